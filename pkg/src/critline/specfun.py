"""Unnormalized Gaussian-tail special functions.

Conventions (no 2/sqrt(pi) prefactors anywhere):

    Erf(x)  = int_0^x exp(-t^2) dt
    Erfc(x) = int_x^inf exp(-t^2) dt = sqrt(pi)/2 - Erf(x)
    Gamma(a, x) = int_x^inf exp(-t) t^a dt/t          (upper incomplete gamma)
    I(a, T) = int_T^inf exp(-t^2) t^a dt = Gamma((a+1)/2, T^2) / 2

The downstream Gaussian-window machinery depends on these exact
normalizations; keep them.

Asymptotic regimes carry explicit, empirically calibrated error constants:

    Erfc(x) = (1/2) exp(-x^2) (1/x + O(1/x^3))        valid here for x >= 2
    I(a, T) = (1/2) T^(a-1) exp(-T^2) (1 + O(T^-2))

The O(.) constants below are artifact constants, frozen against the
quadrature oracle in the test suite; they are not claims from the analytic
literature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy import special as _sp

SQRT_PI = math.sqrt(math.pi)
HALF_SQRT_PI = 0.5 * SQRT_PI

# Validity threshold of the Erfc expansion and its calibrated constant.
# K bounds |Erfc(x) / leading - 1| * x^2 on x >= ERFC_ASYMP_THRESHOLD; the
# deviation climbs toward 1/2 as x grows (measured sup 0.4988 on [2, 20]),
# so K sits just above that limit.
ERFC_ASYMP_THRESHOLD = 2.0
ERFC_ASYMP_K = 0.55

# Calibrated constant for I(a,T) ~ (1/2) T^(a-1) exp(-T^2): the relative
# deviation stays below GAUSS_TAIL_K * max(|a-1|, 1/2) / T^2 once
# T^2 >= |a| + 2 (measured sup of the normalized ratio: 0.572 over
# a in [-3, 5]).
GAUSS_TAIL_K = 0.75

# Absolute floor handed to the adaptive rule: the chain of window bounds
# never consumes these integrals below ~1e-6, so double precision suffices.
QUAD_ABS_FLOOR = 1e-16


@dataclass(frozen=True)
class AsymptoticEstimate:
    """An evaluated quantity next to its leading asymptotic term.

    relative_error_bound bounds |value - leading_term| / |leading_term|
    whenever the expansion's validity threshold is met.
    """

    value: float
    leading_term: float
    relative_error_bound: float

    def __post_init__(self):
        if not (self.relative_error_bound >= 0.0):
            raise ValueError("relative_error_bound must be >= 0")

    def within_bound(self) -> bool:
        return abs(self.value - self.leading_term) <= (
            self.relative_error_bound * abs(self.leading_term)
        )


def _check_nonneg(x, name: str):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("%s must be finite" % name)
    if np.any(arr < 0.0):
        raise ValueError("%s must be >= 0" % name)
    return arr


def erf_unnormalized(x):
    """Erf(x) = int_0^x exp(-t^2) dt for x >= 0. Accepts scalars or arrays."""
    arr = _check_nonneg(x, "x")
    out = HALF_SQRT_PI * _sp.erf(arr)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def erfc_unnormalized(x):
    """Erfc(x) = int_x^inf exp(-t^2) dt for x >= 0. Accepts scalars or arrays."""
    arr = _check_nonneg(x, "x")
    out = HALF_SQRT_PI * _sp.erfc(arr)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def _erfc_signed(x):
    """Erfc on all of R (internal; the public contract keeps x >= 0).

    Erfc(-x) = sqrt(pi) - Erfc(x). Needed by window remainder bounds whose
    shifted endpoints can cross zero for aggressive probe widths.
    """
    return HALF_SQRT_PI * _sp.erfc(np.asarray(x, dtype=float))


def erfc_asymptotic(x: float) -> AsymptoticEstimate:
    """Erfc(x) against its leading term (1/2) e^{-x^2} / x, for x >= 2.

    relative_error_bound = K / x^2 with the frozen artifact constant K.
    """
    x = float(x)
    if not math.isfinite(x) or x < ERFC_ASYMP_THRESHOLD:
        raise ValueError(
            "erfc_asymptotic needs x >= %.1f, got %r" % (ERFC_ASYMP_THRESHOLD, x)
        )
    leading = 0.5 * math.exp(-x * x) / x
    return AsymptoticEstimate(
        value=erfc_unnormalized(x),
        leading_term=leading,
        relative_error_bound=ERFC_ASYMP_K / (x * x),
    )


def _gamma_upper_cf(a: float, x: float) -> float:
    """Continued fraction for Gamma(a, x), x > 0, any real a.

    Lentz's method on  Gamma(a,x) = e^{-x} x^a / (x+1-a- 1(1-a)/(x+3-a- ...)).
    Converges quickly for x >= max(1, a); used as the a <= 0 route where the
    regularized library function is unavailable.
    """
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if b != 0.0 else 1.0 / tiny
    h = d
    for i in range(1, 500):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return math.exp(-x + a * math.log(x)) * h


def incomplete_gamma_upper(a: float, x: float) -> float:
    """Gamma(a, x) = int_x^inf e^{-t} t^{a-1} dt for x > 0, any finite a."""
    a = float(a)
    x = float(x)
    if not (math.isfinite(a) and math.isfinite(x)):
        raise ValueError("incomplete_gamma_upper needs finite arguments")
    if x <= 0.0:
        raise ValueError("incomplete_gamma_upper needs x > 0, got %r" % x)
    if a > 0.0:
        return float(_sp.gammaincc(a, x) * _sp.gamma(a))
    if x >= 1.0:
        return _gamma_upper_cf(a, x)
    # Small x with a <= 0: step down from the fractional part, where the
    # library route (or E1 at the integer lattice) applies.
    # Gamma(a,x) = (Gamma(a+1,x) - x^a e^{-x}) / a, and for x < 1 the power
    # term dominates, so the recurrence is stable; a is never 0 below.
    k = int(math.ceil(-a))
    ah = a + k  # in [0, 1)
    if ah == 0.0:
        val = float(_sp.exp1(x))
    else:
        val = float(_sp.gammaincc(ah, x) * _sp.gamma(ah))
    emx = math.exp(-x)
    for j in range(k):
        s = ah - 1.0 - j  # strictly negative: ah in [0,1)
        val = (val - math.pow(x, s) * emx) / s
    return val


def gaussian_tail_I(a: float, T: float) -> float:
    """I(a, T) = int_T^inf exp(-t^2) t^a dt for T > 0.

    Evaluated by the adaptive rule on the substituted integrand (an
    independent route from incomplete_gamma_upper, so the half-gamma bridge
    stays a two-sided check).
    """
    a = float(a)
    T = float(T)
    if not (math.isfinite(a) and math.isfinite(T)):
        raise ValueError("gaussian_tail_I needs finite arguments")
    if T <= 0.0:
        raise ValueError("gaussian_tail_I needs T > 0, got %r" % T)
    # u = t^2 maps the tail onto int_{T^2}^inf e^{-u} u^{(a-1)/2} du / 2;
    # pulling out the exponential scale keeps the adaptive rule happy for
    # large T (integrand e^{-(u - T^2)} is O(1) at the left endpoint).
    x0 = T * T
    expo = (a - 1.0) / 2.0
    scale = math.exp(-x0)
    if scale == 0.0:
        return 0.0

    def f(v):
        return math.exp(-v + expo * math.log(x0 + v))

    val, _err = integrate.quad(
        f, 0.0, np.inf, epsabs=QUAD_ABS_FLOOR / scale if scale > 1e-280 else QUAD_ABS_FLOOR,
        epsrel=1e-13, limit=200,
    )
    return 0.5 * scale * val


def gaussian_tail_asymptotic(a: float, T: float) -> AsymptoticEstimate:
    """I(a, T) against its leading term (1/2) T^{a-1} e^{-T^2}.

    Valid once T^2 >= |a| + 2; relative_error_bound = K |a-1| / T^2 (with a
    floor so the a = 1 exact case still carries a usable bound).
    """
    a = float(a)
    T = float(T)
    if T * T < abs(a) + 2.0:
        raise ValueError("gaussian_tail_asymptotic needs T^2 >= |a| + 2")
    leading = 0.5 * math.pow(T, a - 1.0) * math.exp(-T * T)
    bound = GAUSS_TAIL_K * max(abs(a - 1.0), 0.5) / (T * T)
    return AsymptoticEstimate(
        value=gaussian_tail_I(a, T),
        leading_term=leading,
        relative_error_bound=bound,
    )
