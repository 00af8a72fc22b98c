"""Monte Carlo oracle: uniform points on D_R, the ellipses they generate, and empirical laws.

Sampling uses NumPy's Philox counter-based generator. A seed is expanded with
``SeedSequence(seed).spawn(LANES)`` into fixed independent streams and sample
``i`` always comes from lane ``i % LANES``'s block, so a batch depends only on
``(cfg, n, seed)`` and never on how lanes are scheduled.
"""
from __future__ import annotations

import csv
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .area import AreaLaw, area_cdf
from .geometry import MotionConfig, MovingPoint, area_of_point, perimeter_of_point
from .perimeter import PerimeterLaw, perimeter_cdf

LANES = 8


class Quantity(str, enum.Enum):
    AREA = "area"
    PERIMETER = "perimeter"


@dataclass(frozen=True)
class SampleBatch:
    """Sampled generating points with the areas and perimeters of their ellipses."""

    cfg: MotionConfig
    seed: int
    rho: np.ndarray
    alpha: np.ndarray
    areas: np.ndarray
    perimeters: np.ndarray

    @property
    def n(self) -> int:
        return len(self.rho)

    @property
    def points(self) -> list[MovingPoint]:
        return [MovingPoint(float(r), float(a)) for r, a in zip(self.rho, self.alpha)]

    def values(self, quantity) -> np.ndarray:
        return self.areas if Quantity(quantity) is Quantity.AREA else self.perimeters

    def to_csv(self, fh) -> None:
        """Write rows ``rho, alpha, area, perimeter`` with a header."""
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["rho", "alpha", "area", "perimeter"])
        for row in zip(self.rho, self.alpha, self.areas, self.perimeters):
            writer.writerow([repr(float(v)) for v in row])


def _lane_sizes(n: int) -> list[int]:
    base, extra = divmod(n, LANES)
    return [base + (1 if i < extra else 0) for i in range(LANES)]


def _lane_block(stream: np.random.SeedSequence, size: int) -> np.ndarray:
    return np.random.Generator(np.random.Philox(stream)).random((2, size))


def _lane_uniforms(seed: int, n: int, workers: int = 1) -> tuple[np.ndarray, np.ndarray]:
    streams = np.random.SeedSequence(seed).spawn(LANES)
    sizes = _lane_sizes(n)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(_lane_block, streams, sizes))
    else:
        blocks = [_lane_block(s, size) for s, size in zip(streams, sizes)]
    u1 = [b[0] for b in blocks]
    u2 = [b[1] for b in blocks]
    # interleave lanes so sample i comes from lane i % LANES
    out1 = np.empty(n)
    out2 = np.empty(n)
    for lane in range(LANES):
        out1[lane::LANES] = u1[lane]
        out2[lane::LANES] = u2[lane]
    return out1, out2


def sample(cfg: MotionConfig, n: int, seed: int = 0, workers: int = 1) -> SampleBatch:
    """Draw ``n`` points area-uniformly on the disk of radius R = kappa r.

    rho = R sqrt(U1), alpha = 2 pi U2. With kappa = 0 every point is Omega.
    ``workers`` threads generate the lanes; the batch does not depend on it.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    u1, u2 = _lane_uniforms(int(seed), n, workers)
    rho = cfg.R * np.sqrt(u1)
    alpha = 2.0 * math.pi * u2
    return SampleBatch(
        cfg=cfg,
        seed=int(seed),
        rho=rho,
        alpha=alpha,
        areas=np.asarray(area_of_point(cfg, rho), dtype=float),
        perimeters=np.asarray(perimeter_of_point(cfg, rho), dtype=float),
    )


def empirical_moment(batch: SampleBatch, quantity, k: int) -> tuple[float, float]:
    """Sample mean of the k-th power and its standard error.

    A constant sample (e.g. kappa = 0) returns its value exactly with error 0;
    a single observation has an undefined (nan) standard error.
    """
    vals = batch.values(quantity) ** int(k)
    if len(vals) == 1:
        return float(vals[0]), math.nan
    if np.ptp(vals) == 0.0:
        return float(vals[0]), 0.0
    return float(np.mean(vals)), float(np.std(vals, ddof=1) / math.sqrt(len(vals)))


@dataclass(frozen=True)
class EmpiricalCDF:
    """Right-continuous step function of a sample, with its KS distance to the exact law."""

    sorted_values: np.ndarray
    ks_statistic: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.searchsorted(self.sorted_values, x, side="right") / len(self.sorted_values)
        return float(out) if out.ndim == 0 else out


def ks_statistic(sorted_values: np.ndarray, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """sup |F_n - F| for a sorted sample against a vectorized CDF.

    The supremum is attained at a sample value or just left of one, so both
    F and its left limit are compared there. Left limits are taken one ulp
    below, which handles atoms (kappa = 0) as well as continuous laws.
    """
    values = np.asarray(sorted_values, dtype=float)
    n = len(values)
    distinct, first = np.unique(values, return_index=True)
    below = first / n  # F_n just left of each distinct value
    at = np.append(first[1:], n) / n  # F_n at each distinct value
    F = np.asarray(cdf(distinct), dtype=float)
    F_left = np.asarray(cdf(np.nextafter(distinct, -np.inf)), dtype=float)
    return float(max(np.max(np.abs(at - F)), np.max(np.abs(F_left - below))))


def exact_cdf(cfg: MotionConfig, quantity) -> Callable[[np.ndarray], np.ndarray]:
    if Quantity(quantity) is Quantity.AREA:
        law = AreaLaw(cfg)
        return lambda x: area_cdf(law, x)
    plaw = PerimeterLaw(cfg)
    return lambda u: perimeter_cdf(plaw, u)


def empirical_cdf(batch: SampleBatch, quantity) -> EmpiricalCDF:
    values = np.sort(batch.values(quantity))
    return EmpiricalCDF(values, ks_statistic(values, exact_cdf(batch.cfg, quantity)))
