"""End-to-end acceptance checks, one test per shipped guarantee.

Each test drives the public API the way a downstream caller would and
asserts both the numerical outcome and a wall-clock budget.  Census
constants (counts, extremal ratios, argmin locations) were measured once
on the shipped implementation and are pinned exactly: a drift beyond the
stated slack is a regression even if the qualitative claim still holds.
"""

import math
import time

import numpy as np

from critline import cli
from critline import dirichlet as dd
from critline import gaussian as gs
from critline import mellin as ml
from critline import quadfield as qf
from critline import specfun as sf

SEED = 20260819

TOL_BRIDGE = 1e-10
TOL_COMPLEMENT = 1e-12
TOL_RESIDUAL = 1e-8
TOL_TRANSFORM = 1e-7
TOL_IDENTITY = 1e-4
TOL_SERIES = 1e-8
TOL_KAPPA = 1e-9

# Frozen sweep results.
MASS_MARGIN_MIN = 1.968027097958632
WINDOW_FLOOR = 4.3
WINDOW_MIN = 4.805081573394641
NONRESIDUE_CONSTANT = 4.6
NONRESIDUE_MAX_RATIO = 4.506848283279126
GENUS_WORST_RATIO = 0.649556752969157


def _odd_primes(n: int) -> list[int]:
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return [int(p) for p in np.flatnonzero(mask)[1:]]


def _strip_points(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.uniform(1.8, 2.6, size=n) + 1j * rng.uniform(-3.0, 3.0, size=n)


def test_criterion_01_gaussian_tail_bridge():
    """Tail integrals reduce to upper incomplete gamma; erf and erfc add up."""
    start = time.monotonic()
    for a in (-0.5, 0.0, 1.0, 2.7):
        for cut in (0.1, 1.0, 5.0):
            lhs = sf.gaussian_tail_I(a, cut)
            rhs = 0.5 * sf.incomplete_gamma_upper((a + 1.0) / 2.0, cut * cut)
            assert abs(lhs - rhs) <= TOL_BRIDGE * abs(rhs), (a, cut, lhs, rhs)
    rng = np.random.default_rng(SEED)
    x = rng.uniform(0.0, 6.0, size=100)
    total = sf.erf_unnormalized(x) + sf.erfc_unnormalized(x)
    assert np.max(np.abs(total - sf.HALF_SQRT_PI)) < TOL_COMPLEMENT
    assert time.monotonic() - start < 1.0


def test_criterion_02_functional_equation_sweep():
    """Completed-function residuals stay below 1e-8 for every primitive
    character of modulus at most 100, at twenty random strip points."""
    start = time.monotonic()
    rng = np.random.default_rng(SEED)
    s = rng.uniform(0.1, 0.9, size=20) + 1j * rng.uniform(-8.0, 8.0, size=20)
    checked = 0
    for q in range(3, 101):
        for chi in dd.primitive_characters(q):
            residuals = dd.functional_equation_residuals(chi, s)
            assert np.max(residuals) < TOL_RESIDUAL, (q, chi.label)
            checked += 1
    assert checked == 1815
    assert time.monotonic() - start < 30.0


def test_criterion_03_transform_matches_l_over_s():
    """The truncated transform of the coefficient summation function agrees
    with L(s)/s within its own truncation bound plus 1e-7, and the integer
    stream anchors at pi^2/12."""
    start = time.monotonic()
    rng = np.random.default_rng(SEED)
    s = rng.uniform(0.35, 1.95, size=10) + 1j * rng.uniform(-5.0, 5.0, size=10)
    x_max = 1 << 16
    log_x = math.log(x_max)
    for q in range(3, 51):
        for chi in dd.enumerate_characters(q):
            if chi.is_principal:
                continue
            summation = ml.SummationFunction(ml.character_stream(chi), x_max)
            values, trunc = ml.mellin_values(summation, s, log_x)
            target = dd.l_values(chi, s) / s
            assert np.all(np.abs(values - target) <= trunc + TOL_TRANSFORM), (
                q,
                chi.label,
            )
    anchor = ml.SummationFunction(ml.zeta_stream(), 2_000_000)
    result = ml.mellin_of_summation(anchor, 2.0, math.log(1.9e6))
    assert result.truncation < 1e-5
    assert abs(result.value - math.pi**2 / 12.0) < result.truncation
    assert time.monotonic() - start < 60.0


def test_criterion_04_central_identity_routes():
    """The windowed central-value identity holds to 1e-4 relative along both
    computation routes for every primitive character of modulus at most 100,
    and the shifted-line integral is independent of the shift within the
    quoted quadrature tails."""
    start = time.monotonic()
    for q in range(3, 101):
        chars = dd.primitive_characters(q)
        if not chars:
            continue
        for alpha in (0.02, 0.05, 0.1):
            lhs, rhs = gs.identity_sides_family(chars, gs.GaussianProbe(alpha))
            rel = np.max(np.abs(lhs - rhs) / np.abs(rhs))
            assert rel < TOL_IDENTITY, (q, alpha, float(rel))
    probe = gs.GaussianProbe(0.05)
    shift_chars = [c for q in range(3, 21) for c in dd.primitive_characters(q)]
    shift_chars += dd.primitive_characters(97)
    for chi in shift_chars:
        cond = dd.analytic_conductor(chi).value
        t_cut = gs.line_cutoff(probe, cond, target=1e-8)
        base = gs.critical_line_integral(chi, probe, t_cut, conductor=cond)
        for sigma in (0.8, 1.2, 1.5):
            moved = gs.contour_integral(chi, probe, sigma, t_cut, conductor=cond)
            gap = abs(moved.value - base.value)
            assert gap <= moved.tail + base.tail + 1e-9, (chi.label, sigma, gap)
    assert time.monotonic() - start < 300.0


def test_criterion_05_probe_mass_floor():
    """The head integral clears pi/2 on the whole shipped width range, and
    the head-minus-remainder margin stays positive for the conductor-scaled
    width at every modulus up to 10^4."""
    start = time.monotonic()
    floor = math.pi / 2.0
    assert gs.HEAD_ALPHA_MAX >= 0.01
    for alpha in np.geomspace(1e-4, gs.HEAD_ALPHA_MAX, 400):
        assert gs.head_integral(gs.GaussianProbe(float(alpha))) >= floor, alpha
    assert gs.head_integral(gs.GaussianProbe(0.12)) < floor
    params = gs.SHIPPED
    margin_min = math.inf
    argmin = None
    for q in range(3, 10_001):
        for parity in (0, 1):
            cond = q * (2.0 + parity)
            probe = params.probe_for(cond)
            margin = gs.head_integral(probe) - gs.remainder_bound(
                probe, cond, 0.5, 0.0
            )
            if margin < margin_min:
                margin_min, argmin = margin, (q, parity)
    assert margin_min > 0.0
    assert argmin == (3, 0)
    assert abs(margin_min - MASS_MARGIN_MIN) < 1e-9
    assert time.monotonic() - start < 120.0


def test_criterion_06_window_energy_and_tails(tmp_path):
    """Every Legendre character up to 2000 keeps the windowed l2 mass above
    the frozen floor after conductor rescaling, window tails past the shipped
    cutoff stay below half the detection floor along both the bound route and
    sampled direct quadrature, and the scaling curve is archived."""
    start = time.monotonic()
    params = gs.SHIPPED
    half_floor = params.floor / 2.0
    rows = []
    worst = (math.inf, None)
    for index, p in enumerate(_odd_primes(2000)):
        chi = dd.legendre_character(p)
        cond = dd.analytic_conductor(chi)
        report = gs.critical_window(chi, params=params, full_sup=False)
        scaled = report.l2_value * math.sqrt(math.log(cond.value))
        if scaled < worst[0]:
            worst = (scaled, p)
        tail = gs.window_tail_bound(
            params.probe_for(cond.value), report.half_width, cond
        )
        assert tail <= half_floor, (p, tail)
        if index % 20 == 0:
            comparison = gs.line_tail_comparison(
                chi, report.half_width, params.probe_for(cond.value), cond
            )
            assert comparison.direct <= comparison.bound <= half_floor, (
                p,
                comparison,
            )
        rows.append(
            cli.ReportRow(
                "window-scaling",
                "q=%05d" % p,
                scaled,
                WINDOW_FLOOR,
                scaled >= WINDOW_FLOOR,
            )
        )
    assert worst[0] >= WINDOW_FLOOR
    assert worst[1] == 3
    assert abs(worst[0] - WINDOW_MIN) < 1e-9
    out = tmp_path / "window-scaling.csv"
    cli.write_atomic(str(out), cli.render_csv(rows))
    text = out.read_text()
    assert text.count("\n") == len(rows) + 1
    assert time.monotonic() - start < 900.0


def test_criterion_07_nonresidue_exponent_census():
    """Least Kronecker nonresidues over all fundamental discriminants up to
    10^5 in absolute value stay below 4.6 * q^(1/3); the census of moduli
    where the nonresidue exceeds q^(1/3) itself is pinned exactly."""
    start = time.monotonic()
    assert dd.least_nonresidue(dd.legendre_character(7)) == 3
    assert dd.least_nonresidue(dd.legendre_character(23)) == 5
    assert qf.least_kronecker_nonresidue(-7) == 3
    assert qf.least_kronecker_nonresidue(-23) == 5
    third = 1.0 / 3.0
    count = 0
    violations = []
    worst = (0.0, None)
    for d in range(-100_000, 100_001):
        try:
            beta = qf.least_kronecker_nonresidue(d)
        except ValueError:
            continue
        count += 1
        q = abs(d)
        ratio = beta * q ** (-third)
        assert ratio < NONRESIDUE_CONSTANT, (d, beta)
        if ratio > worst[0]:
            worst = (ratio, d)
        if math.log(beta) / math.log(q) >= third:
            violations.append((q, beta))
    assert count == 60786
    assert len(violations) == 347
    assert max(beta for _, beta in violations) == 59
    assert max(q for q, beta in violations if beta == 59) == 67044
    assert max(q for q, _ in violations) == 73160
    assert worst[1] == -24
    assert abs(worst[0] - NONRESIDUE_MAX_RATIO) < 1e-12
    assert time.monotonic() - start < 60.0


def test_criterion_08_sieve_paths_identical():
    """Direct and alternating sieved counts agree bit for bit on every field
    with discriminant down to -500, the coefficient series reproduces the
    factored Dedekind values to 1e-8, and the residue constant is certified
    to 1e-9 against the closed form."""
    start = time.monotonic()
    fields = []
    for d in range(-3, -501, -1):
        try:
            fields.append(qf.build_field(d))
        except ValueError:
            continue
    assert len(fields) == 153
    rng = np.random.default_rng(SEED)
    s = _strip_points(rng, 10)
    for field in fields:
        direct, alternating = qf.sieved_count_paths(field, 10_000)
        assert np.array_equal(direct, alternating), field.discriminant
        series, trunc = qf.dedekind_series_values(field, s)
        target = qf.dedekind_zeta_values(field, s)
        gaps = np.abs(series - target)
        assert np.max(gaps) <= TOL_SERIES, (field.discriminant, np.max(gaps))
        assert np.all(gaps <= trunc + 1e-12), field.discriminant
        kappa = qf.residue_kappa(field, tol=TOL_KAPPA)
        assert abs(kappa - qf.residue_formula(field)) <= TOL_KAPPA, (
            field.discriminant
        )
    assert time.monotonic() - start < 300.0


def test_criterion_09_genus_frobenius_scan():
    """Every nontrivial genus character on fields with discriminant down to
    -10^5 finds its least nontrivial Frobenius norm below the split-exponent
    cap plus slack, with coefficient sums certifying each witness."""
    start = time.monotonic()
    cap = qf.SPLIT_EXPONENT + qf.EXPONENT_SLACK
    total_chars = 0
    scanned = 0
    split_fields = 0
    worst = (0.0, None)
    max_norm = 0
    norm_20 = None
    for d in range(-3, -100_001, -1):
        try:
            chars = qf.genus_characters(d)
        except ValueError:
            continue
        scanned += 1
        if not chars:
            continue
        split_fields += 1
        for chi in chars:
            witness = qf.least_nontrivial_frobenius(chi)
            assert witness.exponent_ratio < cap, (d, chi.label)
            assert qf.frobenius_coefficient_check(chi, witness.norm), (
                d,
                chi.label,
            )
            if witness.exponent_ratio > worst[0]:
                worst = (witness.exponent_ratio, chi)
            max_norm = max(max_norm, witness.norm)
            total_chars += 1
            if d == -20:
                norm_20 = witness.norm
    assert total_chars == 69540
    assert scanned == 30392
    assert split_fields == 25582
    assert max_norm == 109
    assert norm_20 == 3
    assert worst[1].discriminant == -708
    assert worst[1].d1 == -3
    assert abs(worst[0] - GENUS_WORST_RATIO) < 1e-12
    assert time.monotonic() - start < 600.0


def test_criterion_10_genus_series_dual_route():
    """The Euler-factored unramified L-value matches the coefficient series
    to 1e-8 at random strip points for the first twenty genus characters."""
    start = time.monotonic()
    chars = []
    d = -3
    while len(chars) < 20:
        try:
            chars.extend(qf.genus_characters(d))
        except ValueError:
            pass
        d -= 1
    chars = chars[:20]
    assert chars[0].discriminant == -15
    assert chars[-1].discriminant == -111
    rng = np.random.default_rng(SEED)
    s = _strip_points(rng, 10)
    for chi in chars:
        series, trunc = qf.genus_series_values(chi, s)
        for k in range(10):
            target = qf.unramified_l_value(chi, complex(s[k]))
            gap = abs(series[k] - target)
            assert gap <= TOL_SERIES, (chi.label, s[k], gap)
            assert gap <= trunc[k] + 1e-12, (chi.label, s[k])
    assert time.monotonic() - start < 120.0
