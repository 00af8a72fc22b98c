"""Elliptic integrals against independent quadrature of their defining integrals."""
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from cardan.elliptic import (
    Antiderivative,
    DivergenceError,
    EllipticDomainError,
    antiderivative,
    complete_E,
    complete_EK,
    complete_K,
    deriv_E,
    deriv_K,
    integral_K_over_v4,
    landen_E,
    landen_K,
)

GRID = [i / 100 for i in range(1, 100)]


def E_oracle(k):
    return quad(lambda t: math.sqrt(1 - (k * math.sin(t)) ** 2), 0, math.pi / 2, epsabs=0, epsrel=1e-13, limit=200)[0]


def K_oracle(k):
    return quad(lambda t: 1 / math.sqrt(1 - (k * math.sin(t)) ** 2), 0, math.pi / 2, epsabs=0, epsrel=1e-13, limit=200)[0]


def test_endpoints():
    assert complete_E(0.0) == math.pi / 2
    assert complete_K(0.0) == math.pi / 2
    assert complete_E(1.0) == 1.0


def test_K_diverges_at_one():
    with pytest.raises(DivergenceError):
        complete_K(1.0)
    with pytest.raises(DivergenceError):
        complete_EK(1.0)


@pytest.mark.parametrize("bad", [-0.1, 1.0000001, float("nan")])
def test_domain(bad):
    with pytest.raises(EllipticDomainError):
        complete_E(bad)
    with pytest.raises((EllipticDomainError, DivergenceError)):
        complete_K(bad)


def test_half_matches_quadrature():
    assert complete_E(0.5) == pytest.approx(E_oracle(0.5), rel=1e-12, abs=0)
    assert complete_K(0.5) == pytest.approx(K_oracle(0.5), rel=1e-12, abs=0)


@pytest.mark.parametrize("k", GRID)
def test_grid_matches_quadrature(k):
    assert complete_E(k) == pytest.approx(E_oracle(k), rel=1e-12, abs=0)
    assert complete_K(k) == pytest.approx(K_oracle(k), rel=1e-12, abs=0)


@pytest.mark.parametrize("k", [1 - 1e-6, 1 - 1e-8, 1 - 1e-10])
def test_near_one_against_mpmath(k):
    mpmath.mp.dps = 40
    m = mpmath.mpf(k) ** 2
    assert complete_E(k) == pytest.approx(float(mpmath.ellipe(m)), rel=1e-14)
    assert complete_K(k) == pytest.approx(float(mpmath.ellipk(m)), rel=1e-14)


def test_vectorized_matches_scalar():
    ks = np.array(GRID)
    E, K = complete_EK(ks)
    assert np.array_equal(E, [complete_E(k) for k in GRID])
    assert np.array_equal(K, [complete_K(k) for k in GRID])


@given(st.floats(min_value=0.0, max_value=0.999999, allow_nan=False))
def test_bracketing(k):
    E, K = complete_EK(k)
    assert E <= math.pi / 2 <= K
    # the deviation from pi/2 is about k^2 / 4 relative, below an ulp for k < ~3e-8
    if k > 1e-7:
        assert E < math.pi / 2 < K


def _central(f, k, step=1e-6):
    return (f(k + step) - f(k - step)) / (2 * step)


def test_derivatives_against_finite_differences():
    assert deriv_E(0.3) == pytest.approx(_central(complete_E, 0.3), rel=1e-6)
    assert deriv_K(0.3) == pytest.approx(_central(complete_K, 0.3), rel=1e-6)


@pytest.mark.parametrize("k", [i / 10 for i in range(1, 10)])
def test_derivative_identity(k):
    E, K = complete_EK(k)
    assert deriv_E(k) * k + K - E == pytest.approx(0.0, abs=1e-14)
    assert deriv_K(k) == pytest.approx(_central(complete_K, k), rel=1e-6)


def test_derivative_limits_and_domain():
    assert deriv_E(0.0) == 0.0
    assert deriv_K(0.0) == 0.0
    with pytest.raises(DivergenceError):
        deriv_E(1.0)
    with pytest.raises(DivergenceError):
        deriv_K(1.0)


def test_landen_examples():
    assert landen_K(0.0) == math.pi / 2
    k2 = 2 * math.sqrt(0.4) / 1.4
    assert landen_E(0.4) - complete_E(k2) == pytest.approx(0.0, abs=1e-13)
    assert landen_K(0.4) - complete_K(k2) == pytest.approx(0.0, abs=1e-13)


@pytest.mark.parametrize("k", GRID)
def test_landen_grid(k):
    k2 = 2 * math.sqrt(k) / (1 + k)
    assert landen_E(k) == pytest.approx(complete_E(k2), rel=1e-12)
    assert landen_K(k) == pytest.approx(complete_K(k2), rel=1e-12)


def test_landen_domain():
    with pytest.raises(EllipticDomainError):
        landen_E(1.0)
    with pytest.raises(EllipticDomainError):
        landen_K(-0.2)


INTEGRANDS = {
    Antiderivative.E_k: lambda k: complete_E(k) * k,
    Antiderivative.K_k: lambda k: complete_K(k) * k,
    Antiderivative.K_k3: lambda k: complete_K(k) * k ** 3,
    Antiderivative.E_over_k4: lambda k: complete_E(k) / k ** 4,
    Antiderivative.K_over_k2: lambda k: complete_K(k) / k ** 2,
}


def test_K_over_k2_closed_form():
    assert antiderivative("K_over_k2", 0.5) == -complete_E(0.5) / 0.5


@pytest.mark.parametrize("kind", [Antiderivative.E_k, Antiderivative.K_k3])
def test_definite_integral_against_quadrature(kind):
    f = INTEGRANDS[kind]
    oracle = quad(f, 0.2, 0.8, epsabs=0, epsrel=1e-13)[0]
    assert antiderivative(kind, 0.8) - antiderivative(kind, 0.2) == pytest.approx(oracle, abs=1e-11)


@pytest.mark.parametrize("kind", list(Antiderivative))
@pytest.mark.parametrize("k", [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8])
def test_antiderivative_differentiates_to_integrand(kind, k):
    numeric = _central(lambda x: antiderivative(kind, x), k)
    assert numeric == pytest.approx(INTEGRANDS[kind](k), rel=1e-5)


@pytest.mark.parametrize("k", [0.0, 1.0, 1.5])
def test_antiderivative_domain(k):
    with pytest.raises(EllipticDomainError):
        antiderivative("E_k", k)


def _K_over_v4_oracle(kappa):
    mpmath.mp.dps = 30
    return float(mpmath.quad(lambda v: mpmath.ellipk(v * v) / v ** 4, [1 / mpmath.mpf(kappa), 1]))


@pytest.mark.parametrize("kappa", [1.1, 1.5, 2.0, 3.0, 10.0])
def test_integral_K_over_v4_against_quadrature(kappa):
    assert integral_K_over_v4(kappa) == pytest.approx(_K_over_v4_oracle(kappa), rel=1e-10)


def test_integral_K_over_v4_scipy_oracle():
    # second oracle with a different quadrature and K implementation
    for kappa, lo in ((2.0, 0.5), (3.0, 1 / 3)):
        oracle = quad(lambda v: complete_K(v) / v ** 4, lo, 1, limit=200, epsabs=0, epsrel=1e-13)[0]
        assert integral_K_over_v4(kappa) == pytest.approx(oracle, rel=1e-10)


def test_integral_K_over_v4_limit_and_domain():
    assert integral_K_over_v4(1 + 1e-12) == pytest.approx(0.0, abs=1e-10)
    with pytest.raises(EllipticDomainError):
        integral_K_over_v4(1.0)
