"""Law of the random perimeter U of the ellipse generated by a uniform point of D_R.

A point at distance w r from Omega generates an ellipse of perimeter r h(w),
with h strictly increasing from h(0) = 2 pi. Hence

    G(u) = P[U <= u] = w(u)^2 / kappa^2,   r h(w(u)) = u,

on [2 pi r, r h(kappa)]. Moments are available three ways: the closed form for
the mean, quadrature over w of w h(w)^k, and integration by parts against G.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .elliptic import EllipticDomainError, _agm, _ek
from .geometry import MotionConfig, _h_prime, h
from .quadrature import DEFAULT_SPEC, QuadratureError, QuadratureSpec, integrate

TWO_PI = 2.0 * math.pi
MEAN_AT_ONE = 64.0 / 9.0  # E[U_1] / r
_ONE_TOL = 1e-12
_BISECT_WIDTH = 1e-8
_NEWTON_TOL = 1e-13


@dataclass(frozen=True)
class PerimeterLaw:
    """Distribution of U_kappa; a point mass at 2 pi r when kappa = 0."""

    cfg: MotionConfig

    @classmethod
    def of(cls, kappa: float, r: float = 1.0) -> "PerimeterLaw":
        return cls(MotionConfig(r=r, kappa=kappa))

    @property
    def kappa(self) -> float:
        return self.cfg.kappa

    def support(self) -> tuple[float, float]:
        r = self.cfg.r
        return TWO_PI * r, r * h(self.kappa)


def _integrate_scaled(f, a, b, spec, points, scale, shift=0.0):
    """shift + scale * int_a^b f, with a budget failure reported in the same units."""
    try:
        val, _ = integrate(f, a, b, spec, points=points)
    except QuadratureError as exc:
        raise QuadratureError(shift + scale * exc.estimate, abs(scale) * exc.error, exc.subdivisions) from exc
    return shift + scale * val


def _check_order(k) -> int:
    if int(k) != k or k < 1:
        raise ValueError(f"moment order must be a positive integer, got {k!r}")
    return int(k)


def perimeter_expectation(law: PerimeterLaw) -> float:
    """E[U_kappa] in closed form.

    kappa = 0 and kappa = 1 (within 1e-12) return the limits 2 pi r and 64 r / 9.
    """
    kappa, r = law.kappa, law.cfg.r
    if kappa == 0.0:
        return TWO_PI * r
    if abs(kappa - 1.0) <= _ONE_TOL:
        return MEAN_AT_ONE * r
    kappa2 = kappa * kappa
    if kappa < 1.0:
        kp = math.sqrt((1.0 - kappa) * (1.0 + kappa))
        K, s = (float(v) for v in _agm(np.array(kappa), np.array(kp)))
        if kappa < 0.5:
            # same bracket with E = K (1 - S); the E and K terms cancel to
            # O(kappa^2) here, so divide that out analytically
            inner = 5.0 + 3.0 * kappa2 - (7.0 * kappa2 + 1.0) * (s / kappa2)
            return 8.0 * r / 9.0 * K * inner
        E = K * (1.0 - s)
        # 3 kappa^4 - 2 kappa^2 - 1 = -(1 - kappa^2)(3 kappa^2 + 1)
        bracket = (7.0 * kappa2 + 1.0) * E - kp * kp * (3.0 * kappa2 + 1.0) * K
        return 8.0 * r / (9.0 * kappa2) * bracket
    v = 1.0 / kappa
    vp = math.sqrt((kappa - 1.0) * (kappa + 1.0)) / kappa
    E, K = (float(x) for x in _ek(v, vp))
    bracket = (7.0 * kappa2 + 1.0) * E - 4.0 * (kappa - 1.0) * (kappa + 1.0) * K
    return 8.0 * r / (9.0 * kappa) * bracket


def perimeter_expectation_unified(law: PerimeterLaw) -> float:
    """E[U_kappa] from the single formula in the Landen-transformed modulus.

    The formula is 0/0 at kappa = 0 and 0 * inf at kappa = 1; those points
    return the stored limits.
    """
    kappa, r = law.kappa, law.cfg.r
    if kappa == 0.0:
        return TWO_PI * r
    if kappa == 1.0:
        return MEAN_AT_ONE * r
    k = 2.0 * math.sqrt(kappa) / (kappa + 1.0)
    kp = abs(1.0 - kappa) / (1.0 + kappa)
    E, K = (float(x) for x in _ek(k, kp))
    bracket = (7.0 * kappa * kappa + 1.0) * E - (kappa - 1.0) ** 2 * K
    return 4.0 * (kappa + 1.0) * r / (9.0 * kappa * kappa) * bracket


def perimeter_series_approx(kappa: float, r: float = 1.0) -> float:
    """Large-kappa expansion pi r (4 kappa / 3 + 1 / kappa - 1 / (16 kappa^3)) of E[U_kappa]."""
    kappa = float(kappa)
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    return math.pi * r * (4.0 * kappa / 3.0 + 1.0 / kappa - 1.0 / (16.0 * kappa ** 3))


def perimeter_moment_quadrature(law: PerimeterLaw, k: int, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """E[U^k] = (2 r^k / kappa^2) int_0^kappa w h(w)^k dw by adaptive quadrature.

    h has a (w - 1)^2 log|w - 1| kink at w = 1, which is a panel edge.
    """
    k = _check_order(k)
    kappa, r = law.kappa, law.cfg.r
    if kappa == 0.0:
        return (TWO_PI * r) ** k
    scale = r ** k * 2.0 / (kappa * kappa)
    return _integrate_scaled(lambda w: w * h(w) ** k, 0.0, kappa, spec, (1.0,), scale)


def _invert_h(x, w_max: float):
    """Vectorized solution of h(w) = x on [0, w_max]: bisection, then Newton."""
    x = np.asarray(x, dtype=float)
    lo = np.zeros_like(x)
    hi = np.full_like(x, w_max)
    while np.any(hi - lo > _BISECT_WIDTH):
        mid = 0.5 * (lo + hi)
        below = h(mid) < x
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    w = 0.5 * (lo + hi)
    for _ in range(8):
        slope = _h_prime(w)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(slope > 0.0, (h(w) - x) / slope, 0.0)
        w_new = np.clip(w - step, lo, hi)
        done = np.all(np.abs(w_new - w) <= _NEWTON_TOL)
        w = w_new
        if done:
            break
    w = np.where(x <= TWO_PI, 0.0, w)
    return w


def invert_h(x: float, w_max: float) -> float:
    """The unique w in [0, w_max] with h(w) = x, for 2 pi <= x <= h(w_max).

    Conditioning degrades near x = 2 pi where h'(0) = 0: an error dx in x
    moves w by about dx / (pi w).
    """
    x = float(x)
    w_max = float(w_max)
    if not w_max >= 0:
        raise EllipticDomainError("w_max must be non-negative")
    top = h(w_max)
    slack = 1e-13 * top
    if not TWO_PI - slack <= x <= top + slack:
        raise EllipticDomainError(f"x = {x!r} outside [2 pi, h(w_max) = {top!r}]")
    if x <= TWO_PI:
        return 0.0
    if x >= top:
        return w_max
    return float(_invert_h(x, w_max))


def perimeter_cdf(law: PerimeterLaw, u):
    """G(u) = P[U_kappa <= u]; a unit step at 2 pi r when kappa = 0."""
    u = np.asarray(u, dtype=float)
    kappa, r = law.kappa, law.cfg.r
    x = u / r
    if kappa == 0.0:
        out = np.where(x < TWO_PI, 0.0, 1.0)
        return float(out) if out.ndim == 0 else out
    top = h(kappa)
    inside = (x >= TWO_PI) & (x < top)
    out = np.where(x < TWO_PI, 0.0, 1.0)
    if np.any(inside):
        w = _invert_h(np.where(inside, x, TWO_PI), kappa)
        out = np.where(inside, np.minimum(w * w / (kappa * kappa), 1.0), out)
    return float(out) if out.ndim == 0 else out


def _density_at_w(law: PerimeterLaw, w):
    return 2.0 * w / (law.kappa ** 2 * law.cfg.r * _h_prime(w))


def perimeter_pdf(law: PerimeterLaw, u):
    """Density g(u) = 2 w / (kappa^2 r h'(w)), w = w(u), on the open support.

    Zero outside [2 pi r, r h(kappa)]; the endpoints themselves raise (see
    :func:`perimeter_pdf_left_limit` and :func:`perimeter_pdf_right_limit`).
    """
    kappa, r = law.kappa, law.cfg.r
    if kappa == 0.0:
        raise ValueError("U_0 is a point mass at 2 pi r and has no density")
    u = np.asarray(u, dtype=float)
    x = u / r
    top = h(kappa)
    if np.any((x == TWO_PI) | (x == top)):
        raise EllipticDomainError("density is only defined on the open support; use the endpoint limits")
    inside = (x > TWO_PI) & (x < top)
    out = np.zeros_like(x)
    if np.any(inside):
        w = _invert_h(np.where(inside, x, top), kappa)
        out = np.where(inside, _density_at_w(law, w), 0.0)
    return float(out) if out.ndim == 0 else out


def perimeter_pdf_left_limit(law: PerimeterLaw, w: float = 1e-6) -> float:
    """lim g(u) as u -> 2 pi r from above, by Richardson extrapolation in w.

    g is even in w near 0, so (4 g(w) - g(2 w)) / 3 removes the w^2 term.
    """
    if law.kappa == 0.0:
        raise ValueError("no density at kappa = 0")
    g1 = float(_density_at_w(law, w))
    g2 = float(_density_at_w(law, 2.0 * w))
    return (4.0 * g1 - g2) / 3.0


def perimeter_pdf_right_limit(law: PerimeterLaw) -> float:
    """lim g(u) as u -> r h(kappa) from below."""
    if law.kappa == 0.0:
        raise ValueError("no density at kappa = 0")
    return float(_density_at_w(law, law.kappa))


def perimeter_moment_via_cdf(
    law: PerimeterLaw,
    k: int,
    spec: QuadratureSpec = DEFAULT_SPEC,
    variable: str = "w",
) -> float:
    """E[U^k] = r^k [h(kappa)^k - (k / kappa^2) int_{2 pi}^{h(kappa)} x^(k-1) w(x)^2 dx].

    ``variable="w"`` substitutes x = h(w), giving the integrand
    h(w)^(k-1) w^2 h'(w) on [0, kappa]. ``variable="x"`` integrates in x
    directly with w(x) from :func:`invert_h`; it is slower and kept as a
    cross-check.
    """
    k = _check_order(k)
    kappa, r = law.kappa, law.cfg.r
    if kappa == 0.0:
        return (TWO_PI * r) ** k
    top = h(kappa)
    scale = -(r ** k) * k / (kappa * kappa)
    shift = (r * top) ** k
    if variable == "w":
        return _integrate_scaled(
            lambda w: h(w) ** (k - 1) * w * w * _h_prime(w), 0.0, kappa, spec, (1.0,), scale, shift
        )
    if variable == "x":
        def integrand(x):
            w = _invert_h(x, kappa)
            return x ** (k - 1) * w * w
        return _integrate_scaled(integrand, TWO_PI, top, spec, (8.0,), scale, shift)
    raise ValueError(f"variable must be 'w' or 'x', got {variable!r}")


@dataclass(frozen=True)
class TableEntry:
    kappa: float
    k: int
    value_string: str

    @property
    def value(self) -> float:
        return float(self.value_string)


def load_reference_table() -> list[TableEntry]:
    """Reference values of E[U_kappa^k] / r^k for kappa in {2, 3}, k = 1..10.

    Read from the packaged CSV (columns kappa, k, value_string).
    """
    text = resources.files("cardan.data").joinpath("perimeter_moments.csv").read_text()
    rows = csv.DictReader(io.StringIO(text))
    return [TableEntry(float(row["kappa"]), int(row["k"]), row["value_string"]) for row in rows]
