"""Gaussian probes pairing critical-line integrals with coefficient sums.

The probe exp(-pi*alpha*t^2) weights the line integral of L(s)/s so that
the whole contour collapses, after completing the square, to

    (1/sqrt(alpha)) integral_0^inf A0(e^X) e^{-X^2/(4 pi alpha)} e^{-X/2} dX,

independent of which vertical line carried it. The head X < log 2 of that
axis integral sees only a_1 = 1 and stays of order one as alpha shrinks,
while the declared-growth remainder dies superexponentially once
alpha ~ width_scale / log(conductor): that imbalance certifies a lower
bound for |integral L(1/2+it)/(1/2+it) g(t) dt|, and window reports turn
it into sup and mean-square lower bounds for |L| near the center of the
strip. Everything Gaussian here is in closed form through the
unnormalized error-function family; only L-values are quadratured.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
import scipy.special as _sp

from . import dirichlet as _dirichlet
from . import specfun as _sf
from .errors import PoleError
from .mellin import GROWTH_EPS, SummationFunction

LOG2 = math.log(2.0)
SQRT_PI = math.sqrt(math.pi)

# largest probe width whose axis-head integral still clears pi/2; the
# crossing sits at 0.11450 (bisection fixture in the tests), shipped with
# margin below it
HEAD_ALPHA_MAX = 0.11

# slack multiplier documented for the line-tail comparison: the direct
# tail never exceeded 0.51 x bound on the calibration family, so 1.0
# means "the bound really is an upper envelope"
LINE_TAIL_SLACK = 1.0

_PANEL_WIDTH = 4.0
_MAX_ORDER = 1024


@dataclass(frozen=True)
class GaussianProbe:
    """Width-alpha probe: window(t) = exp(-pi alpha t^2) on the line,
    entire kernel exp(pi alpha (s-1/2)^2) off it; the two agree on
    Re s = 1/2."""

    alpha: float

    def __post_init__(self):
        if not (self.alpha > 0.0 and math.isfinite(self.alpha)):
            raise ValueError("probe width alpha must be positive and finite")

    def window(self, t):
        return np.exp(-math.pi * self.alpha * np.asarray(t, dtype=float) ** 2)

    def kernel(self, s):
        return np.exp(math.pi * self.alpha * (np.asarray(s, dtype=complex) - 0.5) ** 2)

    @property
    def mass(self) -> float:
        """integral of the window over the whole line."""
        return self.alpha**-0.5

    @property
    def l2_mass(self) -> float:
        """integral of window^2 over the whole line."""
        return (2.0 * self.alpha) ** -0.5

    def window_l2_mass(self, half_width: float) -> float:
        """integral of window^2 over [-half_width, half_width]."""
        r = math.sqrt(2.0 * math.pi * self.alpha)
        return 2.0 * _sf.erf_unnormalized(r * half_width) / r


@dataclass(frozen=True)
class ProbeParameters:
    """Shipped absolute constants of the detection setup.

    width_scale sets alpha = width_scale/log(conductor); window_scale sets
    the window half-width window_scale*log(conductor); floor is the
    detection threshold the probe mass is compared against. The defaults
    are calibrated on the Dirichlet family q <= 10^4 (remainder below
    half the head integral, line tail below floor/2) and are config
    overridable; nothing guarantees them off that family.
    """

    width_scale: float = 0.05
    window_scale: float = 6.0
    floor: float = math.pi / 4.0

    def __post_init__(self):
        if min(self.width_scale, self.window_scale, self.floor) <= 0.0:
            raise ValueError("probe parameters must be positive")

    def alpha_for(self, conductor: float) -> float:
        if conductor <= 1.0:
            raise ValueError("probe width undefined at conductor <= 1")
        return self.width_scale / math.log(conductor)

    def probe_for(self, conductor: float) -> GaussianProbe:
        return GaussianProbe(self.alpha_for(conductor))

    def half_width_for(self, conductor: float) -> float:
        if conductor <= 1.0:
            raise ValueError("window undefined at conductor <= 1")
        return self.window_scale * math.log(conductor)


SHIPPED = ProbeParameters()


@dataclass(frozen=True)
class LineIntegral:
    value: complex
    tail: float


class ProbeMassResult(NamedTuple):
    value: float
    passes: bool


@dataclass(frozen=True)
class TailComparison:
    bound: float
    direct: float


@dataclass(frozen=True)
class WindowReport:
    center: float
    half_width: float
    sup_value: float
    l2_value: float
    bound: float
    alpha: float
    window_mass_sq: float


# ---------------------------------------------------------------------------
# evaluators and quadrature scaffolding
# ---------------------------------------------------------------------------

def _as_evaluator(source) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(source, _dirichlet.DirichletCharacter):
        if source.is_principal:
            raise PoleError(
                "principal characters have a pole inside the contour"
            )
        chi = source
        return lambda s: _dirichlet.l_values(chi, s)
    if callable(source):
        return source
    raise TypeError("source must be a DirichletCharacter or an evaluator")


def _source_conductor(source, conductor: float | None) -> float:
    if conductor is not None:
        return float(conductor)
    if isinstance(source, _dirichlet.DirichletCharacter):
        return _dirichlet.analytic_conductor(source).value
    return 1.0


def _panel_nodes(t_lo: float, t_hi: float, order: int):
    """Composite Gauss-Legendre nodes/weights, panels no wider than
    _PANEL_WIDTH so unit-scale oscillation of L stays resolved."""
    n_panels = max(1, int(math.ceil((t_hi - t_lo) / _PANEL_WIDTH)))
    edges = np.linspace(t_lo, t_hi, n_panels + 1)
    x, w = np.polynomial.legendre.leggauss(order)
    mids = 0.5 * (edges[:-1] + edges[1:])
    halves = 0.5 * np.diff(edges)
    t = (mids[:, None] + halves[:, None] * x[None, :]).ravel()
    wt = (halves[:, None] * w[None, :]).ravel()
    return t, wt


def _refining_quadrature(f, t_lo, t_hi, rel_tol=1e-9, base_order=32):
    """Integrate f over [t_lo, t_hi], doubling the composite order until
    two successive values agree; returns (value, last difference)."""
    order = base_order
    prev = None
    while True:
        t, wt = _panel_nodes(t_lo, t_hi, order)
        val = complex(np.sum(wt * f(t)))
        if prev is not None:
            diff = abs(val - prev)
            if diff <= rel_tol * max(abs(val), 1e-30) or order >= _MAX_ORDER:
                return val, diff
        prev = val
        order *= 2


def line_cutoff(
    probe: GaussianProbe,
    conductor: float,
    sigma: float = 0.5,
    target: float = 1e-9,
) -> float:
    """Smallest cutoff with the convexity-times-window tail under target."""
    t = math.sqrt(20.0 / (math.pi * probe.alpha))
    while line_tail_bound(probe, t, conductor, sigma=sigma) > target:
        t *= 1.3
        if t > 1e6:
            raise ValueError("no finite cutoff reaches the requested target")
    return t


def line_tail_bound(
    probe: GaussianProbe,
    t_cut: float,
    conductor: float,
    sigma: float = 0.5,
    eps: float = GROWTH_EPS,
) -> float:
    """Bound for |integral over |t| > t_cut of L(sigma+it)/s times kernel|.

    Strip growth [conductor (2+|s|)]^{max((1-sigma)/2,0)+eps} against the
    Gaussian window; the growth constant is taken as 1, which the
    line_tail_comparison op audits on real data.
    """
    if t_cut <= 0.0:
        raise ValueError("t_cut must be positive")
    a = probe.alpha
    e = max((1.0 - sigma) / 2.0, 0.0) + eps
    c_t = conductor * (2.0 + sigma + t_cut) / t_cut
    pa = math.pi * a
    return (
        2.0
        * math.exp(pa * (sigma - 0.5) ** 2)
        * c_t**e
        * pa ** (-e / 2.0)
        * _sf.gaussian_tail_I(e - 1.0, math.sqrt(pa) * t_cut)
    )


# ---------------------------------------------------------------------------
# the two sides of the central identity
# ---------------------------------------------------------------------------

def contour_integral(
    source,
    probe: GaussianProbe,
    sigma: float,
    t_cut: float,
    conductor: float | None = None,
    rel_tol: float = 1e-9,
) -> LineIntegral:
    """integral over [-t_cut, t_cut] of L(sigma+it)/(sigma+it) times the
    entire probe kernel, with a strip-growth tail bound.

    The value is independent of sigma up to the quoted tail/quadrature
    error wherever L is entire and the coefficient sum converges.
    """
    if sigma <= 0.0:
        raise ValueError("the contour must sit right of sigma = 0")
    l_eval = _as_evaluator(source)

    def integrand(t):
        s = sigma + 1j * t
        return np.asarray(l_eval(s)) * probe.kernel(s) / s

    val, quad_err = _refining_quadrature(integrand, -t_cut, t_cut, rel_tol)
    tail = line_tail_bound(
        probe, t_cut, _source_conductor(source, conductor), sigma=sigma
    )
    return LineIntegral(val, tail + quad_err)


def critical_line_integral(
    source,
    probe: GaussianProbe,
    t_cut: float,
    conductor: float | None = None,
    rel_tol: float = 1e-9,
) -> LineIntegral:
    """integral of L(1/2+it)/(1/2+it) window(t) over [-t_cut, t_cut]; the
    kernel restricted to the critical line is the plain Gaussian window."""
    return contour_integral(
        source, probe, 0.5, t_cut, conductor=conductor, rel_tol=rel_tol
    )


def _axis_tail(probe: GaussianProbe, x_upper: float, k: float, theta: float) -> float:
    """2 sqrt(pi) K e^{pi a theta^2} Erfc((X - 2 pi a theta)/(2 sqrt(pi a)))
    in overflow-safe form: the scaled complement keeps the product finite
    even when the quadratic factor alone would blow up."""
    pa = math.pi * probe.alpha
    root = 2.0 * math.sqrt(pa)
    w = (x_upper - 2.0 * pa * theta) / root
    if w >= 0.0:
        log_piece = theta * x_upper - x_upper**2 / (4.0 * pa)
        return math.pi * k * math.exp(log_piece) * float(_sp.erfcx(w))
    return 2.0 * SQRT_PI * k * math.exp(pa * theta * theta) * float(
        _sf._erfc_signed(w)
    )


def axis_cutoff(
    probe: GaussianProbe,
    bound_const: float,
    theta: float,
    target: float,
) -> float:
    """Smallest X with _axis_tail(probe, X, bound_const, theta) <= target."""
    pa = math.pi * probe.alpha
    tau = target / (2.0 * SQRT_PI * bound_const * math.exp(pa * theta * theta))
    frac = min(max(2.0 * tau / SQRT_PI, 1e-290), 1.999)
    w = float(_sp.erfcinv(frac))
    return max(2.0 * math.sqrt(pa) * w + 2.0 * pa * theta, LOG2 + 1e-9)


def axis_integral(
    S: SummationFunction, probe: GaussianProbe, x_upper: float
) -> LineIntegral:
    """(1/sqrt(alpha)) integral_0^{x_upper} A0(e^X) e^{-X^2/(4 pi alpha)}
    e^{-X/2} dX, exactly per interval (each constant piece of A0 is a
    difference of error integrals), plus a declared-growth tail bound.
    """
    if x_upper <= 0.0:
        raise ValueError("x_upper must be positive")
    b = math.exp(x_upper)
    if b > S.x_max:
        raise ValueError(
            "exp(x_upper)=%g beyond the cached range %d" % (b, S.x_max)
        )
    a = probe.alpha
    pa = math.pi * a
    root = 2.0 * math.sqrt(pa)
    b_int = int(math.floor(b))
    n = np.arange(1, b_int + 1, dtype=float)
    u = (np.log(n) + pa) / root
    erfs = _sf.erf_unnormalized(u)
    top = _sf.erf_unnormalized((x_upper + pa) / root)
    # pieces [log n, log n+1) for n < b_int, then [log b_int, x_upper]
    diffs = np.empty(b_int)
    diffs[:-1] = erfs[1:] - erfs[:-1]
    diffs[-1] = top - erfs[-1]
    value = 2.0 * SQRT_PI * math.exp(pa / 4.0) * complex(
        np.dot(S.prefix[1 : b_int + 1], diffs)
    )
    st = S.stream
    if S._period_sup is not None:
        tail = _axis_tail(probe, x_upper, S._period_sup, -0.5)
    else:
        tail = _axis_tail(
            probe, x_upper, st.conductor**st.xi, st.nu + GROWTH_EPS - 0.5
        )
    return LineIntegral(value, tail)


def head_integral(probe: GaussianProbe) -> float:
    """(1/sqrt(alpha)) integral_0^{log 2} e^{-X^2/(4 pi alpha)} e^{-X/2} dX.

    This is the a_1 = 1 contribution to the axis integral. Closed form
    pi [erfcx(sqrt(pi a)/2) - 2^{-1/2} e^{-log(2)^2/(4 pi a)} erfcx(u2)],
    stable for every alpha; tends to pi as alpha -> 0 and to 0 as
    alpha -> inf.
    """
    pa = math.pi * probe.alpha
    root = 2.0 * math.sqrt(pa)
    u1 = 0.5 * math.sqrt(pa)
    u2 = (LOG2 + pa) / root
    return math.pi * (
        float(_sp.erfcx(u1))
        - math.exp(-LOG2 * LOG2 / (4.0 * pa)) / math.sqrt(2.0) * float(_sp.erfcx(u2))
    )


def remainder_bound(
    probe: GaussianProbe,
    conductor: float,
    xi: float,
    nu: float,
    eps: float = GROWTH_EPS,
) -> float:
    """Upper bound for the axis integral beyond log 2 under the declared
    growth |A0(x)| <= conductor^xi x^(nu+eps); increasing in conductor,
    vanishing superexponentially as alpha -> 0."""
    if probe.alpha > 1.0:
        raise ValueError("remainder bound calibrated only for alpha <= 1")
    theta = nu + eps - 0.5
    return _axis_tail(probe, LOG2, conductor**xi, theta)


def probe_mass_check(
    source, params: ProbeParameters = SHIPPED, conductor: float | None = None
) -> ProbeMassResult:
    """|critical-line probe integral| against the shipped floor, with the
    probe width tied to the conductor."""
    c_val = _source_conductor(source, conductor)
    if c_val <= 1.0:
        raise ValueError("conductor must exceed 1")
    probe = params.probe_for(c_val)
    t_cut = max(
        params.half_width_for(c_val),
        math.sqrt(42.0 / (math.pi * probe.alpha)),
    )
    got = critical_line_integral(source, probe, t_cut, conductor=c_val)
    value = abs(got.value)
    return ProbeMassResult(value, value >= params.floor)


def probe_mass_family(chars, params: ProbeParameters = SHIPPED) -> np.ndarray:
    """probe_mass_check values for same-modulus characters.

    One family evaluation grid serves every character: the grid spans the
    widest parity class's cutoff, and narrower probes lose only their own
    Gaussian tail (below e^-42) by integrating over the union interval.
    """
    if not chars:
        return np.zeros(0)
    q = chars[0].modulus
    if any(c.modulus != q for c in chars) or any(c.is_principal for c in chars):
        raise ValueError("need nonprincipal characters of one modulus")
    alphas = np.empty(len(chars))
    t_cut = 0.0
    for i, c in enumerate(chars):
        c_val = _dirichlet.analytic_conductor(c).value
        alphas[i] = params.alpha_for(c_val)
        t_cut = max(
            t_cut,
            params.half_width_for(c_val),
            math.sqrt(30.0 / (math.pi * alphas[i])),
        )

    def family_at(order):
        t, wt = _panel_nodes(-t_cut, t_cut, order)
        s = 0.5 + 1j * t
        lv = _dirichlet.l_values_family(chars, s)
        win = np.exp(-math.pi * alphas[:, None] * t[None, :] ** 2)
        return np.sum(lv * win * (wt / s)[None, :], axis=1)

    order, vals = 32, family_at(32)
    while order < 384:
        order *= 2
        finer = family_at(order)
        gap = float(np.max(np.abs(finer - vals)))
        vals = finer
        if gap <= 1e-9 + 1e-7 * float(np.max(np.abs(finer))):
            break
    return np.abs(vals)


def window_tail_bound(
    probe: GaussianProbe,
    t_cut: float,
    conductor,
    eps: float = GROWTH_EPS,
) -> float:
    """Closed-form bound for the probe-window tail beyond t_cut on the
    critical line: fourth-root conductor growth against Gaussian decay."""
    if t_cut < 1.0:
        raise ValueError("t_cut must be at least 1")
    if isinstance(conductor, _dirichlet.AnalyticConductor):
        c_val, m = conductor.value, conductor.m
    else:
        c_val, m = float(conductor), 1
    pa = math.pi * probe.alpha
    e = m / 4.0 - 1.0 + eps
    return (
        c_val ** (0.25 + eps)
        * pa ** (-(m / 4.0 + eps) / 2.0)
        * _sf.gaussian_tail_I(e, math.sqrt(pa) * t_cut)
    )


def line_tail_comparison(
    source,
    t_cut: float,
    probe: GaussianProbe,
    conductor,
    eps: float = GROWTH_EPS,
) -> TailComparison:
    """window_tail_bound next to the directly quadratured
    |integral over |t| >= t_cut|; the direct value is expected under
    bound times LINE_TAIL_SLACK."""
    bound = window_tail_bound(probe, t_cut, conductor, eps=eps)
    a = probe.alpha
    pa = math.pi * a
    l_eval = _as_evaluator(source)

    def integrand(t):
        s = 0.5 + 1j * t
        return np.asarray(l_eval(s)) * probe.window(t) / s

    t_stop = max(t_cut * 1.5, math.sqrt(45.0 / pa))
    if t_stop <= t_cut:
        return TailComparison(bound, 0.0)
    pos, _ = _refining_quadrature(integrand, t_cut, t_stop, 1e-8)
    neg, _ = _refining_quadrature(integrand, -t_stop, -t_cut, 1e-8)
    return TailComparison(bound, abs(pos + neg))


# ---------------------------------------------------------------------------
# window reports
# ---------------------------------------------------------------------------

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_refine(f, lo, mid, hi, iterations=24):
    """Vectorized golden-section maximization over k brackets; f maps a
    point array to values. Returns the best value seen per bracket."""
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1 = f(x1)
    f2 = f(x2)
    best = np.maximum(f(np.asarray(mid, dtype=float)), np.maximum(f1, f2))
    for _ in range(iterations):
        move_right = f1 < f2
        lo = np.where(move_right, x1, lo)
        hi = np.where(move_right, hi, x2)
        x_keep = np.where(move_right, x2, x1)
        f_keep = np.where(move_right, f2, f1)
        x_new = np.where(
            move_right, lo + _INVPHI * (hi - lo), hi - _INVPHI * (hi - lo)
        )
        f_new = f(x_new)
        x1 = np.where(move_right, x_keep, x_new)
        f1 = np.where(move_right, f_keep, f_new)
        x2 = np.where(move_right, x_new, x_keep)
        f2 = np.where(move_right, f_new, f_keep)
        best = np.maximum(best, np.maximum(f1, f2))
    return best


def _window_sup(weighted_f, half_width: float, even: bool = False) -> float:
    """Sup of a nonnegative window integrand: uniform grid, then
    golden-section polish at the five largest interior local maxima."""
    spacing = min(0.05, half_width / 2000.0)
    t_lo = 0.0 if even else -half_width
    grid = np.arange(t_lo, half_width + spacing / 2.0, spacing)
    vals = weighted_f(grid)
    interior = (vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:])
    idx = np.flatnonzero(interior) + 1
    if idx.size:
        top = idx[np.argsort(vals[idx])[-5:]]
        refined = _golden_refine(
            weighted_f, grid[top - 1], grid[top], grid[top + 1]
        )
        return float(max(np.max(vals), np.max(refined)))
    return float(np.max(vals))


def _window_l2(weighted_f, half_width: float, conductor: float, even: bool = False):
    """Square integral of the window integrand over [-T, T] plus the sup
    of the integrand over the quadrature nodes (a free lower estimate).

    even=True halves the work for integrands symmetric in t. The base
    order keeps Gauss-Legendre capacity (about 1.1 radians per node on
    the unit interval) above the local wavenumber log(conductor (2+T)).
    """
    freq = math.log(conductor * (2.0 + half_width))
    order = 32
    while order < 2.0 * freq:
        order *= 2
    t_lo = 0.0 if even else -half_width
    scale = 2.0 if even else 1.0
    prev = None
    node_sup = 0.0
    while True:
        t, wt = _panel_nodes(t_lo, half_width, order)
        fv = weighted_f(t)
        node_sup = max(node_sup, float(np.max(fv)))
        val = scale * float(np.sum(wt * fv**2))
        if prev is not None and (
            abs(val - prev) <= 1e-6 * max(abs(val), 1e-30)
            or order >= _MAX_ORDER
        ):
            return val, node_sup
        prev = val
        order *= 2


def shifted_window(
    chi: "_dirichlet.DirichletCharacter",
    shift: float,
    params: ProbeParameters = SHIPPED,
    half_width: float | None = None,
    full_sup: bool = True,
) -> WindowReport:
    """Detection report for |L| on the window [shift-T, shift+T] of the
    critical line, sized by the twisted-conductor bound.

    sup_value is the sup of |L(1/2+i(shift+t))| / |1/2+it| (the weighted
    quantity the probe argument bounds from below; the unweighted sup of
    |L| is at least half of it). l2_value is the square integral of the
    same integrand; bound is floor/sqrt(log effective conductor). With
    full_sup=False the sup is the largest quadrature-node value only,
    which family scans use to skip the fine grid.
    """
    l_eval = _as_evaluator(chi)
    cond = _dirichlet.analytic_conductor(chi)
    c_eff = _dirichlet.twist_conductor_bound(cond, 1j * shift).bound
    log_c = math.log(c_eff)
    t_half = params.window_scale * log_c if half_width is None else half_width
    if t_half <= 0.0:
        raise ValueError("window half-width must be positive")

    def weighted_f(t):
        s_line = 0.5 + 1j * (shift + t)
        return np.abs(np.asarray(l_eval(s_line))) / np.abs(0.5 + 1j * t)

    even = shift == 0.0 and chi.is_real
    l2, node_sup = _window_l2(weighted_f, t_half, c_eff, even=even)
    sup = _window_sup(weighted_f, t_half, even=even) if full_sup else node_sup
    return WindowReport(
        center=shift,
        half_width=t_half,
        sup_value=sup,
        l2_value=l2,
        bound=params.floor / math.sqrt(log_c),
        alpha=params.alpha_for(c_eff),
        window_mass_sq=params.probe_for(c_eff).window_l2_mass(t_half),
    )


def critical_window(
    chi: "_dirichlet.DirichletCharacter",
    params: ProbeParameters = SHIPPED,
    half_width: float | None = None,
    full_sup: bool = True,
) -> WindowReport:
    """shifted_window at shift 0: sup and square integral of
    |L(1/2+it)/(1/2+it)| over [-T, T] against floor/sqrt(log conductor)."""
    return shifted_window(
        chi, 0.0, params=params, half_width=half_width, full_sup=full_sup
    )


# ---------------------------------------------------------------------------
# family sweep for the central identity
# ---------------------------------------------------------------------------

def identity_sides_family(
    chars, probe: GaussianProbe, target: float = 1e-8
) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the central identity for a same-modulus family.

    Returns (line side, axis side) as complex arrays. The line side uses
    one family evaluation over a shared composite grid (verified by order
    doubling); the axis side is exact per interval with its cutoff chosen
    so the declared-period tail sits under target.
    """
    if not chars:
        return np.zeros(0, dtype=complex), np.zeros(0, dtype=complex)
    q = chars[0].modulus
    if any(c.modulus != q for c in chars) or any(c.is_principal for c in chars):
        raise ValueError("need nonprincipal characters of one modulus")
    c_max = max(_dirichlet.analytic_conductor(c).value for c in chars)
    t_cut = line_cutoff(probe, c_max, target=target)

    def family_at(order):
        t, wt = _panel_nodes(-t_cut, t_cut, order)
        s = 0.5 + 1j * t
        lv = _dirichlet.l_values_family(chars, s)
        return lv @ (wt * probe.window(t) / s)

    order = 48
    lhs = family_at(order)
    while True:
        order *= 2
        finer = family_at(order)
        gap = float(np.max(np.abs(finer - lhs)))
        lhs = finer
        if gap <= 1e-9 + 1e-7 * float(np.max(np.abs(finer))) or order >= 384:
            break

    # axis side: period prefix sums give the exact sup for the tail cutoff
    pa = math.pi * probe.alpha
    root = 2.0 * math.sqrt(pa)
    period_vals = np.vstack([c.values(np.arange(1, q + 1)) for c in chars])
    walks = np.cumsum(period_vals, axis=1)
    sups = np.max(np.abs(walks), axis=1)
    x_upper = max(
        axis_cutoff(probe, float(np.max(sups)), -0.5, target), LOG2 * 2
    )
    b_int = int(math.floor(math.exp(x_upper)))
    n = np.arange(1, b_int + 1, dtype=float)
    u = (np.log(n) + pa) / root
    erfs = _sf.erf_unnormalized(u)
    diffs = np.empty(b_int)
    diffs[:-1] = erfs[1:] - erfs[:-1]
    diffs[-1] = _sf.erf_unnormalized((x_upper + pa) / root) - erfs[-1]
    reps = -(-b_int // q)
    prefixes = np.hstack([walks] * reps)[:, :b_int] if reps > 1 else walks[:, :b_int]
    # A0 tiles exactly for nonprincipal characters (period sums vanish)
    rhs = 2.0 * SQRT_PI * math.exp(pa / 4.0) * (prefixes @ diffs)
    return lhs, rhs
