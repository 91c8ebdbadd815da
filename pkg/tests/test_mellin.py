"""Stream summation, Mellin identity, and Parseval two-path tests.

The step-function transform is exact on the computed range, so every
analytic comparison here is against either a closed form, an independent
L-evaluation route, or a finite stream built so the tail vanishes
identically.
"""
import math

import numpy as np
import pytest

from critline import dirichlet as dd
from critline import mellin as ml
from critline.errors import ConvergenceError

TOL_EXACT = 1e-12
TOL_CHI4_MELLIN = 1e-8
TOL_SHIFT = 1e-10
PLANCHEREL_REL_5 = 1e-3

ZETA2_HALF = math.pi**2 / 12.0


def chi_minus_4():
    return dd.kronecker_character(-4)


def nontrivial_characters(q):
    return [c for c in dd.enumerate_characters(q) if not c.is_principal]


class TestSummation:
    def test_zeta_floor(self):
        zs = ml.zeta_stream()
        assert ml.summation(zs, 10.7) == 10.0
        assert ml.summation(zs, 1.0) == 1.0
        for x in (1.5, 2.0, 17.01, 999.999):
            assert ml.summation(zs, x) == float(math.floor(x))

    def test_chi4_prefix(self):
        st = ml.character_stream(chi_minus_4())
        assert ml.summation(st, 6.0) == 1.0 + 0.0 - 1.0 + 0.0 + 1.0 + 0.0
        # period-4 walk: 1, 1, 0, 0 repeating
        S = ml.SummationFunction(st, 100)
        for n in range(1, 97):
            assert S.at(n) == S.at(n + 4)

    def test_zero_stream(self):
        st = ml.zero_stream()
        for x in (1.0, 3.3, 250.0):
            assert ml.summation(st, x) == 0.0

    def test_cache_matches_direct(self):
        chi = nontrivial_characters(7)[1]
        st = ml.character_stream(chi)
        S = ml.SummationFunction(st, 500)
        for x in (1.0, 6.5, 49.2, 350.0, 500.0):
            assert abs(S.at(x) - ml.summation(st, x)) < TOL_EXACT

    def test_below_one_is_empty_sum(self):
        S = ml.SummationFunction(ml.zeta_stream(), 10)
        assert S.at(0.5) == 0.0

    def test_range_errors(self):
        S = ml.SummationFunction(ml.zeta_stream(), 100)
        with pytest.raises(ValueError):
            S.at(101.0)
        with pytest.raises(ValueError):
            ml.summation(ml.zeta_stream(), 2e7)

    def test_integer_coefficients_stay_exact(self):
        # quadratic character prefix sums are small integers; the cache
        # must reproduce them with no float fuzz at all
        leg = dd.legendre_character(11)
        S = ml.SummationFunction(ml.character_stream(leg), 2000)
        vals = leg.values(np.arange(1, 2001))
        running = np.cumsum(vals.real).astype(int)
        assert np.all(S.prefix[1:].real == running)
        assert np.all(S.prefix[1:].imag == 0.0)


class TestStreamContracts:
    def test_first_coefficient_normalized(self):
        for st in (
            ml.zeta_stream(),
            ml.character_stream(chi_minus_4()),
            ml.character_stream(dd.legendre_character(7)),
        ):
            assert st.coefficients(np.array([1]))[0] == 1.0 + 0.0j

    def test_tempered_bound(self):
        # degree-1 tempered streams: |a_n| <= 1 everywhere
        st = ml.character_stream(nontrivial_characters(13)[0])
        assert st.tempered_theta == 0.0
        a = st.coefficients(np.arange(1, 10_001))
        assert float(np.max(np.abs(a))) <= 1.0 + 1e-15

    def test_principal_rejected(self):
        principal = dd.enumerate_characters(6)[0]
        assert principal.is_principal
        with pytest.raises(ValueError):
            ml.character_stream(principal)

    def test_index_validation(self):
        st = ml.zeta_stream()
        with pytest.raises(ValueError):
            st.coefficients(np.array([0]))

    def test_array_stream_range(self):
        st = ml.array_stream("finite", 1, np.ones(10), nu=1.0)
        with pytest.raises(ValueError):
            st.coefficients(np.array([11]))


class TestMellinIdentity:
    def test_zeta_anchor(self):
        S = ml.SummationFunction(ml.zeta_stream(), 2_000_000)
        r = ml.mellin_of_summation(S, 2.0, math.log(1.9e6))
        assert abs(r.value - ZETA2_HALF) < r.truncation
        assert r.truncation < 1e-5

    def test_chi4_against_l_value(self):
        chi = chi_minus_4()
        S = ml.SummationFunction(ml.character_stream(chi), 200_000)
        r = ml.mellin_of_summation(S, 0.8, math.log(1.9e5))
        ref = complex(dd.l_value(chi, 0.8)) / 0.8
        assert abs(r.value - ref) < TOL_CHI4_MELLIN
        assert abs(r.value - ref) < r.truncation + 1e-12

    def test_zero_stream(self):
        S = ml.SummationFunction(ml.zero_stream(), 1000)
        r = ml.mellin_of_summation(S, 1.5, math.log(900))
        assert r.value == 0.0

    def test_strip_family(self):
        # truncation estimates must dominate the actual defect across the
        # strip for every nontrivial character of small modulus
        rng = np.random.default_rng(20260819)
        for q in (3, 4, 5, 7, 9, 11, 16):
            for chi in nontrivial_characters(q):
                S = ml.SummationFunction(ml.character_stream(chi), 120_000)
                for _ in range(4):
                    s = complex(
                        rng.uniform(0.3, 2.0), rng.uniform(-8.0, 8.0)
                    )
                    r = ml.mellin_of_summation(S, s, math.log(1.0e5))
                    ref = complex(dd.l_value(chi, s)) / s
                    assert abs(r.value - ref) < r.truncation + 1e-7, (
                        chi.label,
                        s,
                    )

    def test_grid_matches_scalar(self):
        chi = nontrivial_characters(5)[0]
        S = ml.SummationFunction(ml.character_stream(chi), 50_000)
        grid = np.array([0.5 + 1j, 1.1 - 2j, 1.9 + 0.3j])
        vals, trunc = ml.mellin_values(S, grid, math.log(4.0e4))
        for i, s in enumerate(grid):
            r = ml.mellin_of_summation(S, complex(s), math.log(4.0e4))
            assert abs(vals[i] - r.value) < TOL_EXACT
            assert trunc[i] == r.truncation

    def test_convergence_domain(self):
        S = ml.SummationFunction(ml.character_stream(chi_minus_4()), 1000)
        with pytest.raises(ConvergenceError):
            ml.mellin_of_summation(S, -0.2 + 1j, math.log(900))
        Sz = ml.SummationFunction(ml.zeta_stream(), 1000)
        with pytest.raises(ConvergenceError):
            ml.mellin_of_summation(Sz, 0.9, math.log(900))

    def test_cache_range_guard(self):
        S = ml.SummationFunction(ml.zeta_stream(), 100)
        with pytest.raises(ValueError):
            ml.mellin_of_summation(S, 2.0, math.log(500.0))


class TestLinearityAndShift:
    def test_linearity(self):
        rng = np.random.default_rng(11)
        a = rng.normal(size=4000) + 1j * rng.normal(size=4000)
        b = rng.normal(size=4000)
        mk = lambda label, v: ml.SummationFunction(
            ml.array_stream(label, 1, v, nu=0.6), 4000
        )
        s = 1.7 + 0.9j
        X = math.log(3999.0)
        va = ml.mellin_of_summation(mk("a", a), s, X).value
        vb = ml.mellin_of_summation(mk("b", b), s, X).value
        vab = ml.mellin_of_summation(mk("a+2b", a + 2 * b), s, X).value
        assert abs(vab - (va + 2 * vb)) < TOL_EXACT

    def test_shift_identity(self):
        # two balancing coefficients zero out both the plain and the
        # sigma0-weighted totals, so A0 of either stream vanishes past
        # n0+2 and both transforms are complete: the identity is exact
        rng = np.random.default_rng(12)
        sigma0 = 0.7
        n0 = 1500
        a = np.zeros(2000, dtype=complex)
        a[:n0] = rng.normal(size=n0) + 1j * rng.normal(size=n0)
        n1, n2 = n0 + 1, n0 + 2
        c_or = np.sum(a[:n0])
        c_sh = np.sum(a[:n0] * np.arange(1, n0 + 1) ** -sigma0)
        m = np.array(
            [[1.0, 1.0], [n1**-sigma0, n2**-sigma0]], dtype=complex
        )
        a[n0], a[n0 + 1] = np.linalg.solve(m, [-c_or, -c_sh])
        shifted = a * np.arange(1, 2001) ** -sigma0
        S_or = ml.SummationFunction(ml.array_stream("a", 1, a, nu=0.6), 2000)
        S_sh = ml.SummationFunction(
            ml.array_stream("a-shift", 1, shifted, nu=0.6), 2000
        )
        assert abs(S_or.at(1999.0)) < 1e-10
        assert abs(S_sh.at(1999.0)) < 1e-10
        X = math.log(1999.0)
        for s in (1.8 + 0.4j, 1.2 - 2.0j, 2.5 + 0.0j):
            lhs = ml.mellin_of_summation(S_sh, s, X).value * s
            rhs = ml.mellin_of_summation(S_or, s + sigma0, X).value * (
                s + sigma0
            )
            assert abs(lhs - rhs) < TOL_SHIFT


class TestPlancherel:
    def test_chi4(self):
        rep = ml.plancherel_check(
            ml.character_stream(chi_minus_4()),
            0.6,
            X_max=math.log(2.0e5),
            T_max=2000.0,
        )
        assert rep.consistent()
        assert abs(rep.lhs - rep.rhs) < 1e-3 * rep.lhs
        lhs, rhs = rep
        assert lhs == rep.lhs and rhs == rep.rhs

    def test_zero_stream(self):
        rep = ml.plancherel_check(
            ml.zero_stream(), 0.6, X_max=math.log(5e3), T_max=50.0
        )
        assert tuple(rep) == (0.0, 0.0)

    def test_legendre_5(self):
        rep = ml.plancherel_check(
            ml.character_stream(dd.legendre_character(5)),
            0.6,
            X_max=math.log(2.0e5),
            T_max=4000.0,
        )
        assert rep.consistent()
        assert abs(rep.lhs - rep.rhs) < PLANCHEREL_REL_5 * rep.lhs

    def test_character_family_consistent(self):
        # both routes inside stated error bars across parities and orders
        seen = 0
        for q in (3, 4, 5, 7, 8, 9, 11, 12):
            for chi in nontrivial_characters(q)[:2]:
                rep = ml.plancherel_check(
                    ml.character_stream(chi),
                    0.65,
                    X_max=math.log(5.0e4),
                    T_max=400.0,
                )
                assert rep.consistent(), chi.label
                assert rep.lhs > 0.0
                seen += 1
        assert seen >= 10

    def test_domain_errors(self):
        with pytest.raises(ConvergenceError):
            ml.plancherel_check(
                ml.zeta_stream(), 0.9, X_max=math.log(1e3), T_max=50.0
            )
        no_l = ml.array_stream("mute", 1, np.ones(10), nu=1.0)
        with pytest.raises(ValueError):
            ml.plancherel_check(no_l, 1.5, X_max=math.log(9.0), T_max=50.0)


class TestMolteni:
    def test_chi4_counts_odd_n(self):
        st = ml.character_stream(chi_minus_4())
        assert ml.molteni_sum(st, 100.0) == 50.0

    def test_zeta(self):
        assert ml.molteni_sum(ml.zeta_stream(), 100.0) == 100.0

    def test_ratio_bounded_on_grid(self):
        # degree-1 tempered streams satisfy the growth claim with room
        st = ml.character_stream(dd.legendre_character(11))
        for x in (10.0, 100.0, 1000.0, 30_000.0):
            r = ml.molteni_ratio(st, x)
            assert 0.0 < r < 1.0

    def test_range_error(self):
        with pytest.raises(ValueError):
            ml.molteni_sum(ml.zeta_stream(), 2e8)
