"""Complete elliptic integrals K(k), E(k) and the identities built on them.

All functions take the *modulus* k, not the parameter m = k**2 used by
``scipy.special.ellipk``/``ellipe``:

    K(k) = int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t)
    E(k) = int_0^{pi/2} sqrt(1 - k^2 sin^2 t) dt

Values come from the arithmetic-geometric mean. The AGM is run on the
complementary modulus k' = sqrt(1 - k^2), which callers near k = 1 can pass in
directly to avoid losing it to rounding.
"""
from __future__ import annotations

import enum
import math

import numpy as np

_HALF_PI = 0.5 * math.pi
_MAX_AGM_STEPS = 64


class EllipticDomainError(ValueError):
    """Modulus (or other argument) outside the domain of the requested function."""


class DivergenceError(ArithmeticError):
    """K(k) diverges at k = 1."""


def _agm(k, kp):
    """Return ``(K, S)`` with ``E = K * (1 - S)`` for arrays of k and k' > 0.

    S is the AGM correction sum sum_n 2^(n-1) c_n^2 with c_0 = k. Keeping E - K
    as ``-K * S`` avoids cancellation for small k.
    """
    a = np.ones_like(kp)
    b = np.array(kp, dtype=float)
    c = np.array(k, dtype=float)
    s = 0.5 * c * c
    weight = 0.5
    for _ in range(_MAX_AGM_STEPS):
        a_next = 0.5 * (a + b)
        b = np.sqrt(a * b)
        c = c * c / (4.0 * a_next)
        a = a_next
        weight *= 2.0
        s = s + weight * c * c
        if np.all(c <= 1e-17 * a):
            break
    return _HALF_PI / a, s


def _ek(k, kp=None):
    """Vectorized ``(E, K)``; K is ``inf`` where k' == 0. No domain checks."""
    k = np.asarray(k, dtype=float)
    if kp is None:
        kp = np.sqrt((1.0 - k) * (1.0 + k))
    kp = np.asarray(kp, dtype=float)
    k, kp = np.broadcast_arrays(k, kp)
    at_one = kp <= 0.0
    safe_kp = np.where(at_one, 0.5, kp)
    safe_k = np.where(at_one, 0.0, k)
    K, s = _agm(safe_k, safe_kp)
    E = K * (1.0 - s)
    E = np.where(at_one, 1.0, E)
    K = np.where(at_one, np.inf, K)
    return E, K


def _check_modulus(k, allow_one=True):
    arr = np.asarray(k, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise EllipticDomainError(f"modulus must lie in [0, 1], got {k!r}")
    if not allow_one and np.any(arr == 1.0):
        raise DivergenceError("K(k) diverges at k = 1")
    return arr


def _out(x, like):
    return float(x) if np.ndim(like) == 0 else x


def complete_E(k):
    """E(k) for 0 <= k <= 1 (scalar or array). E(1) = 1."""
    arr = _check_modulus(k)
    E, _ = _ek(arr)
    return _out(E, k)


def complete_K(k):
    """K(k) for 0 <= k < 1 (scalar or array).

    Raises :class:`DivergenceError` at k = 1 instead of returning infinity;
    the limit branches of the perimeter formulas use stored constants there.
    """
    arr = _check_modulus(k, allow_one=False)
    _, K = _ek(arr)
    return _out(K, k)


def complete_EK(k):
    """``(E(k), K(k))`` from a single AGM run; k in [0, 1)."""
    arr = _check_modulus(k, allow_one=False)
    E, K = _ek(arr)
    return _out(E, k), _out(K, k)


def deriv_E(k: float) -> float:
    """dE/dk = (E - K) / k.

    Returns the analytic limit 0 at k = 0; raises at k = 1 where the
    derivative is -infinity.
    """
    k = float(_check_modulus(k, allow_one=False))
    if k == 0.0:
        return 0.0
    K, s = _agm(np.array(k), np.array(math.sqrt((1.0 - k) * (1.0 + k))))
    return float(-K * s / k)


def deriv_K(k: float) -> float:
    """dK/dk = (E - (1 - k^2) K) / (k (1 - k^2)).

    Returns the analytic limit 0 at k = 0; raises at k = 1.
    """
    k = float(_check_modulus(k, allow_one=False))
    if k == 0.0:
        return 0.0
    kp2 = (1.0 - k) * (1.0 + k)
    K, s = _agm(np.array(k), np.array(math.sqrt(kp2)))
    # E - (1 - k^2) K = K (k^2 - S)
    return float(K * (k * k - s) / (k * kp2))


def _check_open_unit(k, name="k"):
    k = float(k)
    if not 0.0 <= k < 1.0:
        raise EllipticDomainError(f"{name} must lie in [0, 1), got {k!r}")
    return k


def landen_E(k: float) -> float:
    """E(2 sqrt(k) / (1 + k)) evaluated as (2 E(k) - (1 - k^2) K(k)) / (1 + k)."""
    k = _check_open_unit(k)
    E, K = complete_EK(k)
    return (2.0 * E - (1.0 - k) * (1.0 + k) * K) / (1.0 + k)


def landen_K(k: float) -> float:
    """K(2 sqrt(k) / (1 + k)) evaluated as (1 + k) K(k)."""
    k = _check_open_unit(k)
    return (1.0 + k) * complete_K(k)


class Antiderivative(str, enum.Enum):
    """Integrands with closed-form antiderivatives in terms of E and K."""

    E_k = "E_k"              # E(k) k
    K_k = "K_k"              # K(k) k
    K_k3 = "K_k3"            # K(k) k^3
    E_over_k4 = "E_over_k4"  # E(k) / k^4
    K_over_k2 = "K_over_k2"  # K(k) / k^2


def antiderivative(kind, k: float) -> float:
    """Closed-form antiderivative of ``kind`` at 0 < k < 1.

    Definite integrals are differences of two calls.
    """
    kind = Antiderivative(kind)
    k = float(k)
    if not 0.0 < k < 1.0:
        raise EllipticDomainError(f"antiderivatives are evaluated on 0 < k < 1, got {k!r}")
    E, K = complete_EK(k)
    k2 = k * k
    kp2 = (1.0 - k) * (1.0 + k)
    if kind is Antiderivative.E_k:
        return ((1.0 + k2) * E - kp2 * K) / 3.0
    if kind is Antiderivative.K_k:
        return E - kp2 * K
    if kind is Antiderivative.K_k3:
        return ((4.0 + k2) * E - kp2 * (4.0 + 3.0 * k2) * K) / 9.0
    if kind is Antiderivative.E_over_k4:
        return (2.0 * (k2 - 2.0) * E + kp2 * K) / (9.0 * k2 * k)
    return -E / k


def integral_K_over_v4(kappa: float) -> float:
    """int_{1/kappa}^1 K(v) / v^4 dv for kappa > 1, in closed form."""
    kappa = float(kappa)
    if not kappa > 1.0:
        raise EllipticDomainError(f"kappa must exceed 1, got {kappa!r}")
    v = 1.0 / kappa
    vp = math.sqrt((kappa - 1.0) * (kappa + 1.0)) / kappa
    E, K = _ek(v, vp)
    E, K = float(E), float(K)
    return (-5.0 + kappa * (kappa * kappa + 4.0) * E
            + 2.0 * kappa * (kappa - 1.0) * (kappa + 1.0) * K) / 9.0
