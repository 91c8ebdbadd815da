"""Special-function checks against an independent quadrature oracle.

The oracle integrates exp(-t^2) (resp. exp(-t) t^(a-1)) directly with the
adaptive rule; the library routes go through erf/erfc/gamma identities, so
agreement is a genuine two-path check.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from critline import specfun as sf

REL_TOL_ERF = 1e-12
REL_TOL_GAMMA = 1e-10
TOL_ADDITIVITY = 1e-12
TOL_BRIDGE = 1e-10

HALF_SQRT_PI = math.sqrt(math.pi) / 2

# Frozen oracle values (adaptive quadrature, see oracle_* helpers below).
ERF_1 = 0.7468241328124271
ERFC_3 = 1.9577193236779756e-05
GAMMA_2_1 = 0.7357588823428846  # 2/e, exact by parts
I_1_1 = 0.18393972058572117  # e^{-1}/2, exact antiderivative


def oracle_erf(x: float) -> float:
    val, _ = integrate.quad(lambda t: math.exp(-t * t), 0.0, x, epsabs=1e-15, epsrel=1e-13)
    return val


def oracle_erfc(x: float) -> float:
    val, _ = integrate.quad(lambda t: math.exp(-t * t), x, np.inf, epsabs=1e-16, epsrel=1e-13)
    return val


def oracle_gamma_upper(a: float, x: float) -> float:
    val, _ = integrate.quad(
        lambda t: math.exp(-t + (a - 1.0) * math.log(t)), x, np.inf,
        epsabs=1e-16, epsrel=1e-13, limit=200,
    )
    return val


def rel_err(got, want):
    return abs(got - want) / abs(want)


class TestErf:
    def test_empty_integral(self):
        assert sf.erf_unnormalized(0.0) == 0.0

    def test_value_at_one(self):
        assert rel_err(sf.erf_unnormalized(1.0), ERF_1) < REL_TOL_ERF
        assert rel_err(ERF_1, oracle_erf(1.0)) < 1e-12  # fixture really is the oracle

    def test_against_oracle_grid(self):
        for x in [0.1, 0.5, 1.7, 3.3, 6.0]:
            assert rel_err(sf.erf_unnormalized(x), oracle_erf(x)) < 1e-11

    def test_monotone(self):
        xs = np.linspace(0.0, 8.0, 200)
        vals = sf.erf_unnormalized(xs)
        assert np.all(np.diff(vals) >= 0)  # saturates in doubles near 6
        strict = sf.erf_unnormalized(np.linspace(0.0, 4.0, 100))
        assert np.all(np.diff(strict) > 0)

    def test_domain(self):
        with pytest.raises(ValueError):
            sf.erf_unnormalized(-0.5)
        with pytest.raises(ValueError):
            sf.erf_unnormalized(float("nan"))


class TestErfc:
    def test_half_line(self):
        assert rel_err(sf.erfc_unnormalized(0.0), HALF_SQRT_PI) < 1e-15

    def test_value_at_three(self):
        assert rel_err(sf.erfc_unnormalized(3.0), ERFC_3) < REL_TOL_ERF
        assert rel_err(ERFC_3, oracle_erfc(3.0)) < 1e-11

    def test_standard_tail_bound(self):
        # Erfc(10) < e^{-100}/(2*10) * (upper constant); loose classical form
        val = sf.erfc_unnormalized(10.0)
        assert 0.0 < val < math.exp(-100.0) / 10.0 * 1.01

    def test_strictly_decreasing(self):
        xs = np.linspace(0.0, 6.0, 120)
        vals = sf.erfc_unnormalized(xs)
        assert np.all(np.diff(vals) < 0)

    def test_additivity_random(self):
        rng = np.random.default_rng(20260819)
        for x in rng.uniform(0.0, 10.0, size=100):
            s = sf.erf_unnormalized(float(x)) + sf.erfc_unnormalized(float(x))
            assert abs(s - HALF_SQRT_PI) < TOL_ADDITIVITY

    def test_domain(self):
        with pytest.raises(ValueError):
            sf.erfc_unnormalized(-1e-9)


class TestErfcAsymptotic:
    def test_leading_term_at_three(self):
        est = sf.erfc_asymptotic(3.0)
        assert rel_err(est.leading_term, math.exp(-9.0) / 6.0) < 1e-15
        assert abs(oracle_erfc(3.0) / est.leading_term - 1.0) < sf.ERFC_ASYMP_K / 9.0

    def test_bound_holds_on_grid(self):
        for x in [2.0, 2.5, 3.0, 5.0, 10.0, 20.0]:
            est = sf.erfc_asymptotic(x)
            assert est.within_bound()
            assert est.relative_error_bound == sf.ERFC_ASYMP_K / (x * x)

    def test_threshold(self):
        est = sf.erfc_asymptotic(2.0)
        assert est.within_bound()
        with pytest.raises(ValueError):
            sf.erfc_asymptotic(1.999)

    def test_estimate_validation(self):
        with pytest.raises(ValueError):
            sf.AsymptoticEstimate(1.0, 1.0, -0.1)


class TestIncompleteGamma:
    def test_exact_exponential(self):
        for x in [0.2, 1.0, 4.0]:
            assert rel_err(sf.incomplete_gamma_upper(1.0, x), math.exp(-x)) < REL_TOL_GAMMA

    def test_by_parts_fixture(self):
        assert rel_err(sf.incomplete_gamma_upper(2.0, 1.0), GAMMA_2_1) < REL_TOL_GAMMA
        assert rel_err(GAMMA_2_1, 2.0 * math.exp(-1.0)) < 1e-15

    def test_against_oracle(self):
        for a, x in [(0.25, 0.3), (1.85, 2.5), (2.7, 0.01), (-0.5, 0.7), (-1.0, 1.3), (-3.2, 2.0)]:
            assert rel_err(sf.incomplete_gamma_upper(a, x), oracle_gamma_upper(a, x)) < 1e-9

    def test_large_x_asymptotic(self):
        # Gamma(a,x) / (x^{a-1} e^{-x}) -> 1
        for a in [0.5, 1.85, 3.0]:
            for x in [50.0, 200.0]:
                ratio = sf.incomplete_gamma_upper(a, x) / (x ** (a - 1.0) * math.exp(-x))
                assert abs(ratio - 1.0) < 2.0 * abs(a - 1.0) / x + 1e-6

    def test_domain(self):
        with pytest.raises(ValueError):
            sf.incomplete_gamma_upper(1.0, 0.0)
        with pytest.raises(ValueError):
            sf.incomplete_gamma_upper(1.0, -2.0)


class TestGaussianTail:
    def test_a0_is_erfc(self):
        for T in [0.3, 1.0, 2.5]:
            assert rel_err(sf.gaussian_tail_I(0.0, T), sf.erfc_unnormalized(T)) < 1e-11

    def test_exact_a1(self):
        assert rel_err(sf.gaussian_tail_I(1.0, 1.0), I_1_1) < REL_TOL_GAMMA

    def test_half_gamma_bridge(self):
        for a in [-0.5, 0.0, 1.0, 2.7]:
            for T in [0.1, 1.0, 5.0]:
                lhs = sf.gaussian_tail_I(a, T)
                rhs = 0.5 * sf.incomplete_gamma_upper((a + 1.0) / 2.0, T * T)
                assert rel_err(lhs, rhs) < TOL_BRIDGE

    def test_monotone_in_T(self):
        for a in [-0.5, 0.0, 2.7]:
            vals = [sf.gaussian_tail_I(a, T) for T in [0.1, 0.5, 1.0, 2.0, 4.0]]
            assert all(u > v for u, v in zip(vals, vals[1:]))

    def test_monotone_in_a_for_T_above_one(self):
        for T in [1.5, 3.0]:
            vals = [sf.gaussian_tail_I(a, T) for a in [-1.0, 0.0, 1.0, 2.0, 3.0]]
            assert all(u < v for u, v in zip(vals, vals[1:]))

    def test_expansion_at_2(self):
        # I(2,2) = (1/2) * 2^{1} e^{-4} (1 + O(2^{-2}))
        est = sf.gaussian_tail_asymptotic(2.0, 2.0)
        assert rel_err(est.leading_term, math.exp(-4.0)) < 1e-15
        assert est.within_bound()
        assert rel_err(est.value, oracle_gamma_upper(1.5, 4.0) / 2.0) < 1e-9

    def test_expansion_grid(self):
        for a in [-0.5, 0.0, 1.0, 2.7]:
            for T in [2.0, 3.0, 6.0]:
                if T * T < abs(a) + 2.0:
                    continue  # below the expansion's validity threshold
                assert sf.gaussian_tail_asymptotic(a, T).within_bound()

    def test_domain(self):
        with pytest.raises(ValueError):
            sf.gaussian_tail_I(1.0, 0.0)
        with pytest.raises(ValueError):
            sf.gaussian_tail_I(1.0, -1.0)
