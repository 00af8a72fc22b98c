"""Law of the random area A of the ellipse generated by a uniform point of the disk D_R.

With kappa = R / r the law has three shapes (plus the point mass at kappa = 0):

* ``SUB_UNIT`` (0 < kappa <= 1): uniform on [pi r^2 (1 - kappa^2), pi r^2].
* ``MID`` (1 <= kappa <= sqrt 2): density 2 / (pi r^2 kappa^2) up to
  pi r^2 (kappa^2 - 1), then 1 / (pi r^2 kappa^2) up to pi r^2.
* ``HIGH`` (kappa >= sqrt 2): density 2 / (pi r^2 kappa^2) up to pi r^2,
  then 1 / (pi r^2 kappa^2) up to pi r^2 (kappa^2 - 1).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .geometry import MotionConfig, area_of_point
from .quadrature import DEFAULT_SPEC, QuadratureSpec, integrate

SQRT2 = math.sqrt(2.0)


class Regime(enum.Enum):
    POINT_MASS = "point_mass"
    SUB_UNIT = "sub_unit"
    MID = "mid"
    HIGH = "high"


def _default_regime(kappa: float) -> Regime:
    if kappa == 0.0:
        return Regime.POINT_MASS
    if kappa <= 1.0:
        return Regime.SUB_UNIT
    if kappa <= SQRT2:
        return Regime.MID
    return Regime.HIGH


_REGIME_RANGE = {
    Regime.POINT_MASS: (0.0, 0.0),
    Regime.SUB_UNIT: (0.0, 1.0),
    Regime.MID: (1.0, SQRT2),
    Regime.HIGH: (SQRT2, math.inf),
}


@dataclass(frozen=True)
class AreaLaw:
    """Distribution of A_kappa.

    ``regime`` defaults to the one implied by ``cfg.kappa``. At the shared
    boundaries kappa = 1 and kappa = sqrt 2 either neighbouring regime may be
    requested explicitly; both describe the same law.
    """

    cfg: MotionConfig
    regime: Regime | None = None

    def __post_init__(self):
        kappa = self.cfg.kappa
        if self.regime is None:
            object.__setattr__(self, "regime", _default_regime(kappa))
            return
        regime = Regime(self.regime)
        lo, hi = _REGIME_RANGE[regime]
        inside = lo <= kappa <= hi
        if regime is Regime.SUB_UNIT:
            inside = 0.0 < kappa <= 1.0
        if not inside:
            raise ValueError(f"regime {regime.value} does not cover kappa = {kappa!r}")
        object.__setattr__(self, "regime", regime)

    @classmethod
    def of(cls, kappa: float, r: float = 1.0, regime: Regime | None = None) -> "AreaLaw":
        return cls(MotionConfig(r=r, kappa=kappa), regime)

    @property
    def unit(self) -> float:
        """pi r^2, the area of the circle generated by Omega."""
        return math.pi * self.cfg.r ** 2

    def support(self) -> tuple[float, float]:
        kappa, unit = self.cfg.kappa, self.unit
        if self.regime is Regime.POINT_MASS:
            return unit, unit
        if self.regime is Regime.SUB_UNIT:
            return unit * (1.0 - kappa) * (1.0 + kappa), unit
        return 0.0, unit * max(1.0, (kappa - 1.0) * (kappa + 1.0))


def _check_order(k) -> int:
    if int(k) != k or k < 1:
        raise ValueError(f"moment order must be a positive integer, got {k!r}")
    return int(k)


def area_moment(law: AreaLaw, k: int) -> float:
    """E[A^k] in closed form (units r^(2k))."""
    k = _check_order(k)
    kappa = law.cfg.kappa
    scale = law.unit ** k
    if kappa == 0.0:
        return scale
    kappa2 = kappa * kappa
    if kappa <= 1.0:
        # 1 - (1 - kappa^2)^(k+1) without cancellation for small kappa
        if kappa == 1.0:
            bracket = 1.0
        else:
            bracket = -math.expm1((k + 1) * math.log1p(-kappa2))
    else:
        bracket = 1.0 + ((kappa - 1.0) * (kappa + 1.0)) ** (k + 1)
    return scale / (k + 1) * bracket / kappa2


def area_expectation_minimum(r: float = 1.0) -> tuple[float, float]:
    """``(kappa*, E[A_kappa*])``: the global minimum of E[A_kappa] at kappa* = 2^(1/4)."""
    return 2.0 ** 0.25, (SQRT2 - 1.0) * math.pi * r * r


def area_expectation_slope(kappa: float, r: float = 1.0) -> float:
    """d E[A_kappa] / d kappa = pi r^2 (kappa^4 - 2) / kappa^3 for kappa > 1."""
    return math.pi * r * r * (kappa ** 4 - 2.0) / kappa ** 3


def area_variance(law: AreaLaw) -> float:
    """Var[A_kappa] (units r^4)."""
    kappa = law.cfg.kappa
    scale = law.unit ** 2
    if kappa <= 1.0:
        return scale * kappa ** 4 / 12.0
    inv2 = 1.0 / (kappa * kappa)
    return scale * (-1.0 - inv2 * inv2 + 2.0 * inv2 + kappa ** 4 / 12.0)


def _variance_slope(kappa: float) -> float:
    # d/dkappa of -1 - kappa^-4 + 2 kappa^-2 + kappa^4 / 12
    return 4.0 / kappa ** 5 - 4.0 / kappa ** 3 + kappa ** 3 / 3.0


def area_variance_extrema(r: float = 1.0, xtol: float = 1e-12) -> list[tuple[float, float, str]]:
    """Local extrema of Var[A_kappa] on kappa > 1 as ``(kappa, variance, "max"|"min")``.

    Roots of the derivative are bracketed on a grid over (1, 3] (the slope is
    positive beyond) and refined with Brent's method.
    """
    grid = np.linspace(1.0 + 1e-9, 3.0, 2001)
    slope = np.array([_variance_slope(x) for x in grid])
    out = []
    for i in np.nonzero(np.sign(slope[:-1]) != np.sign(slope[1:]))[0]:
        root = brentq(_variance_slope, grid[i], grid[i + 1], xtol=xtol, rtol=4 * np.finfo(float).eps)
        kind = "max" if slope[i] > 0 else "min"
        out.append((root, area_variance(AreaLaw.of(root, r)), kind))
    return out


def area_cdf(law: AreaLaw, x):
    """P[A_kappa <= x]; right-continuous, pieces closed on the left."""
    x = np.asarray(x, dtype=float)
    kappa, unit = law.cfg.kappa, law.unit
    y = x / unit
    regime = law.regime
    if regime is Regime.POINT_MASS:
        out = np.where(x < unit, 0.0, 1.0)
        return float(out) if out.ndim == 0 else out
    kappa2 = kappa * kappa
    knot = (kappa - 1.0) * (kappa + 1.0)  # kappa^2 - 1
    if regime is Regime.SUB_UNIT:
        conds = [y < -knot, y < 1.0]
        vals = [0.0, 1.0 - (1.0 - y) / kappa2]
    elif regime is Regime.MID:
        conds = [y < 0.0, y < knot, y < 1.0]
        vals = [0.0, 2.0 * y / kappa2, 1.0 - (1.0 - y) / kappa2]
    else:
        conds = [y < 0.0, y < 1.0, y < knot]
        vals = [0.0, 2.0 * y / kappa2, (1.0 + y) / kappa2]
    out = np.select(conds, vals, default=1.0)
    return float(out) if out.ndim == 0 else out


def area_pdf(law: AreaLaw, x):
    """Density of A_kappa (piecewise constant). Undefined for the point mass at kappa = 0."""
    if law.regime is Regime.POINT_MASS:
        raise ValueError("A_0 is a point mass at pi r^2 and has no density")
    x = np.asarray(x, dtype=float)
    kappa, unit = law.cfg.kappa, law.unit
    y = x / unit
    level = 1.0 / (unit * kappa * kappa)
    knot = (kappa - 1.0) * (kappa + 1.0)
    if law.regime is Regime.SUB_UNIT:
        conds = [y < -knot, y < 1.0]
        vals = [0.0, level]
    elif law.regime is Regime.MID:
        conds = [y < 0.0, y < knot, y < 1.0]
        vals = [0.0, 2.0 * level, level]
    else:
        conds = [y < 0.0, y < 1.0, y < knot]
        vals = [0.0, 2.0 * level, level]
    out = np.select(conds, vals, default=0.0)
    return float(out) if out.ndim == 0 else out


def _density_pieces(law: AreaLaw) -> list[tuple[float, float, float]]:
    """``(lo, hi, level)`` for every non-empty constant piece of the density."""
    kappa, unit = law.cfg.kappa, law.unit
    level = 1.0 / (unit * kappa * kappa)
    knot = unit * (kappa - 1.0) * (kappa + 1.0)
    if law.regime is Regime.SUB_UNIT:
        pieces = [(-knot, unit, level)]
    elif law.regime is Regime.MID:
        pieces = [(0.0, knot, 2.0 * level), (knot, unit, level)]
    else:
        pieces = [(0.0, unit, 2.0 * level), (unit, knot, level)]
    return [p for p in pieces if p[1] > p[0]]


def area_moment_via_density(law: AreaLaw, k: int, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """E[A^k] as the quadrature of x^k f(x) over the pieces of the density."""
    k = _check_order(k)
    if law.regime is Regime.POINT_MASS:
        raise ValueError("density route needs kappa > 0")
    total = 0.0
    for lo, hi, level in _density_pieces(law):
        val, _ = integrate(lambda x: level * x ** k, lo, hi, spec)
        total += val
    return total


def area_moment_via_radial_quadrature(law: AreaLaw, k: int, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """E[A^k] = (2 / R^2) int_0^R A(rho)^k rho d rho by quadrature."""
    k = _check_order(k)
    cfg = law.cfg
    if cfg.kappa == 0.0:
        raise ValueError("radial route needs kappa > 0")
    R = cfg.R
    val, _ = integrate(lambda rho: area_of_point(cfg, rho) ** k * rho, 0.0, R, spec, points=(cfg.r,))
    return 2.0 * val / (R * R)
