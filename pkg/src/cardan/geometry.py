"""Kinematics of the elliptic (Cardan) motion.

A circle of radius r (moving centrode, centre Omega) rolls inside a circle of
radius 2r (fixed centrode, centre O). A point at polar position (rho, alpha)
in the moving frame traces the curve

    X(phi) = r exp(i phi) + rho exp(i alpha) exp(-i phi),

an ellipse centred at O with semi-axes r + rho and |r - rho| whose major axis
makes the angle alpha / 2 with the x-axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elliptic import EllipticDomainError, _agm, _ek

TWO_PI = 2.0 * math.pi


def _normalize_angle(angle: float) -> float:
    a = math.fmod(float(angle), TWO_PI)
    if a < 0.0:
        a += TWO_PI
    # fmod of a value just below 2pi can round back up to 2pi
    return 0.0 if a >= TWO_PI else a


@dataclass(frozen=True)
class MotionConfig:
    """Scale of the motion: moving-centrode radius ``r`` and disk ratio ``kappa = R / r``."""

    r: float = 1.0
    kappa: float = 1.0

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError(f"r must be positive, got {self.r!r}")
        if not self.kappa >= 0:
            raise ValueError(f"kappa must be non-negative, got {self.kappa!r}")

    @property
    def R(self) -> float:
        """Radius of the disk of generating points."""
        return self.kappa * self.r


@dataclass(frozen=True)
class MovingPoint:
    """A point of the moving plane in polar coordinates about Omega."""

    rho: float
    alpha: float = 0.0

    def __post_init__(self):
        if not self.rho >= 0:
            raise ValueError(f"rho must be non-negative, got {self.rho!r}")
        object.__setattr__(self, "alpha", _normalize_angle(self.alpha))

    @classmethod
    def from_cartesian(cls, xi: float, eta: float) -> "MovingPoint":
        return cls(math.hypot(xi, eta), math.atan2(eta, xi))

    @property
    def xi(self) -> float:
        return self.rho * math.cos(self.alpha)

    @property
    def eta(self) -> float:
        return self.rho * math.sin(self.alpha)


@dataclass(frozen=True)
class EllipseGeometry:
    semi_major: float
    semi_minor: float
    orientation: float
    center: tuple[float, float] = (0.0, 0.0)

    def implicit_residual(self, x: float, y: float) -> float:
        """b^2 x'^2 + a^2 y'^2 - a^2 b^2 in the axis frame, scaled by 1/a^2.

        Zero on the ellipse; stays finite for the degenerate segment b = 0.
        """
        a, b = self.semi_major, self.semi_minor
        c, s = math.cos(self.orientation), math.sin(self.orientation)
        xr = x * c + y * s
        yr = -x * s + y * c
        return (b * b * xr * xr + a * a * yr * yr - a * a * b * b) / (a * a)


@dataclass(frozen=True)
class TracePoint:
    phi: float
    x: float
    y: float


@dataclass(frozen=True)
class Circle:
    center: tuple[float, float]
    radius: float


def ellipse_of_point(cfg: MotionConfig, p: MovingPoint) -> EllipseGeometry:
    """The ellipse generated by ``p``; a segment of length 4r when rho == r."""
    return EllipseGeometry(cfg.r + p.rho, abs(cfg.r - p.rho), _normalize_angle(0.5 * p.alpha))


def trace(cfg: MotionConfig, p: MovingPoint, phi: float) -> TracePoint:
    """Position of ``p`` in the fixed plane when O-Omega makes angle ``phi`` with the x-axis."""
    r, rho, alpha = cfg.r, p.rho, p.alpha
    x = r * math.cos(phi) + rho * math.cos(phi - alpha)
    y = r * math.sin(phi) - rho * math.sin(phi - alpha)
    return TracePoint(_normalize_angle(phi), x, y)


def trace_cartesian(cfg: MotionConfig, xi: float, eta: float, phi: float) -> TracePoint:
    """Same as :func:`trace` but with the point given as (xi, eta)."""
    r = cfg.r
    c, s = math.cos(phi), math.sin(phi)
    return TracePoint(_normalize_angle(phi), r * c + xi * c + eta * s, r * s + eta * c - xi * s)


def trace_curve(cfg: MotionConfig, p: MovingPoint, steps: int = 200) -> np.ndarray:
    """``(steps, 2)`` array of points on the generated ellipse for phi on a uniform grid."""
    phi = np.linspace(0.0, TWO_PI, steps, endpoint=False)
    x = cfg.r * np.cos(phi) + p.rho * np.cos(phi - p.alpha)
    y = cfg.r * np.sin(phi) - p.rho * np.sin(phi - p.alpha)
    return np.column_stack((x, y))


def centrodes(cfg: MotionConfig, phi: float = 0.0) -> tuple[Circle, Circle]:
    """Fixed centrode (centre O, radius 2r) and moving centrode (centre Omega, radius r).

    Omega sits at distance r from O in direction ``phi``.
    """
    r = cfg.r
    return (
        Circle((0.0, 0.0), 2.0 * r),
        Circle((r * math.cos(phi), r * math.sin(phi)), r),
    )


def area_of_point(cfg: MotionConfig, rho):
    """Area pi |r^2 - rho^2| of the ellipse generated at distance ``rho`` from Omega."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise ValueError("rho must be non-negative")
    r = cfg.r
    area = math.pi * np.abs((r - rho) * (r + rho))
    return float(area) if area.ndim == 0 else area


def h(w):
    """Perimeter of the ellipse of a point at distance ``w * r``, in units of r.

    h(w) = 4 (w + 1) E(2 sqrt(w) / (w + 1)); h(0) = 2 pi, h(1) = 8.
    """
    w = np.asarray(w, dtype=float)
    if np.any(w < 0) or np.any(np.isnan(w)):
        raise EllipticDomainError("h is defined for w >= 0")
    E, _ = _ek(2.0 * np.sqrt(w) / (w + 1.0), np.abs(1.0 - w) / (1.0 + w))
    out = 4.0 * (w + 1.0) * E
    # near 0 the increment pi w^2 / 2 drowns in the rounding of the AGM route;
    # Horner on positive coefficients keeps h monotone there
    small = w < _SERIES_W
    if np.any(small):
        ws = np.where(small, w, 0.0)
        out = np.where(small, TWO_PI * np.polynomial.polynomial.polyval(ws * ws, _GK), out)
    return float(out) if out.ndim == 0 else out


def gauss_kummer_coefficients(n: int) -> np.ndarray:
    """binom(1/2, j)^2 for j = 0..n-1, so that h(w) = 2 pi sum_j c_j w^(2j) on [0, 1]."""
    c = np.empty(n)
    b = 1.0
    for j in range(n):
        c[j] = b * b
        b *= (0.5 - j) / (j + 1)
    return c


_GK = gauss_kummer_coefficients(16)
# polynomial in w of d/dw sum_j c_j w^(2j)
_SLOPE_POLY = np.zeros(2 * len(_GK) - 1)
_SLOPE_POLY[1::2] = 2.0 * np.arange(1, len(_GK)) * _GK[1:]
_SERIES_W = 0.05


def _h_prime(w):
    """Vectorized dh/dw = 4 E(k) - 2 (1 - w) (K(k) - E(k)) / w, k = 2 sqrt(w)/(w+1).

    Uses the limits h'(0) = 0 and h'(1) = 4 (the (1 - w) factor beats the
    logarithmic growth of K at w = 1). No domain checks.
    """
    w = np.asarray(w, dtype=float)
    safe = np.where((w == 0.0) | (w == 1.0), 0.5, w)
    k = 2.0 * np.sqrt(safe) / (safe + 1.0)
    kp = np.abs(1.0 - safe) / (1.0 + safe)
    K, s = _agm(k, kp)
    E = K * (1.0 - s)
    # K - E = K * S
    out = 4.0 * E - 2.0 * (1.0 - safe) * K * s / safe
    # 4E and the K-E term cancel as w -> 0; the power series is exact there
    small = w < _SERIES_W
    if np.any(small):
        ws = np.where(small, w, 0.0)
        series = 2.0 * math.pi * np.polynomial.polynomial.polyval(ws, _SLOPE_POLY)
        out = np.where(small, series, out)
    out = np.where(w == 0.0, 0.0, out)
    out = np.where(w == 1.0, 4.0, out)
    return out


def h_prime(w: float) -> float:
    """dh/dw for w > 0, w != 1.

    The chain rule through dE/dk is singular at w = 1 (k = 1) and 0/0 at
    w = 0, so both points raise; the one-sided limits are 4 and 0.
    """
    w = float(w)
    if not w > 0.0 or w == 1.0:
        raise EllipticDomainError(f"h_prime needs w > 0 and w != 1, got {w!r}")
    return float(_h_prime(w))


def perimeter_of_point(cfg: MotionConfig, rho):
    """Perimeter r h(rho / r) of the ellipse generated at distance ``rho`` from Omega."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise ValueError("rho must be non-negative")
    out = cfg.r * h(rho / cfg.r)
    return float(out) if np.ndim(out) == 0 else out
