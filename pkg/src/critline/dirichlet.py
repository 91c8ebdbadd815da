"""Dirichlet characters mod q and rigorous L(s, chi) evaluation in the strip.

Characters live on the generator decomposition of (Z/q)^*: each character
is a tuple of exponent numerators k_i against cyclic factors of order s_i,
so chi(g_i) = e(k_i / s_i) with e(x) = exp(2 pi i x). All character
arithmetic (products, conjugates, conductors, orthogonality) happens on the
integer exponents; floats only appear when a value is finally requested.

L-values go through the Hurwitz decomposition

    L(s, chi) = q^{-s} sum_{a mod q, (a,q)=1} chi(a) zeta(s, a/q)

with Euler-Maclaurin for each Hurwitz zeta. The shift count is
N = max(20, ceil|Im s| + 10) with 8 Bernoulli correction terms, enlarged
left of Re s = 1/2 where the asymptotic correction chain needs more room
(see _shift_count). Supported envelope: Re s > -5, |Im s| <= 200,
q <= 10^5, double precision target 1e-9 absolute.

The functional equation is realized in the degree-1 form

    L(1-s, chi) = eps(chi) * gamma_q(s) * L(s, conj chi)
    gamma_q(s)  = (q/pi)^(s-1/2) * Gamma((s+a)/2) / Gamma((1-s+a)/2)
    eps(chi)    = tau(chi) / (i^a sqrt(q))

with a the parity and tau the Gauss sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product as _iproduct

import numpy as np
from scipy.special import loggamma

from . import _arith
from .errors import AccuracyUnattainableError, PoleError, SearchCapError

DEFAULT_ENUM_CAP = 1 << 17

MAX_MODULUS = 100_000
MAX_IMAG = 10_000.0
MIN_REAL = -5.0

# B_{2j} / (2j)! for j = 1..8
_BERN_FACTORS = (
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
)


# ---------------------------------------------------------------------------
# Unit group structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _CyclicFactor:
    """One cyclic factor of (Z/q)^*, attached to the prime power pe | q.

    dlog[x % pe] is the discrete log of x on this factor (or -1 off-units).
    """

    prime_power: int
    order: int
    generator: int
    dlog: np.ndarray = field(repr=False, compare=False)


class UnitGroup:
    """Generator decomposition of (Z/q)^* with discrete-log tables."""

    def __init__(self, q: int):
        if q < 1:
            raise ValueError("modulus must be >= 1, got %d" % q)
        self.modulus = q
        self.factors: list[_CyclicFactor] = []
        for p, e in _arith.factorize(q) if q > 1 else []:
            pe = p**e
            if p == 2:
                if e == 1:
                    continue  # (Z/2)^* is trivial
                if e == 2:
                    self.factors.append(self._cyclic_table(4, 2, 3))
                else:
                    self.factors.extend(self._two_power_tables(e))
            else:
                g = _arith.primitive_root_mod_prime_power(p, e)
                self.factors.append(self._cyclic_table(pe, pe // p * (p - 1), g))
        self.orders = tuple(f.order for f in self.factors)
        self.exponent_lcm = math.lcm(*self.orders) if self.orders else 1
        self.phi = math.prod(self.orders)
        # unit mask mod q, shared by the vectorized value path
        n = np.arange(q if q > 1 else 1)
        self.unit_mask = np.gcd(n, q) == 1 if q > 1 else np.ones(1, dtype=bool)
        self.units = np.nonzero(self.unit_mask)[0] if q > 1 else np.array([1])
        if q == 1:
            self.units = np.array([0])  # residue 0 represents the unit class

    @staticmethod
    def _cyclic_table(pe: int, order: int, g: int) -> _CyclicFactor:
        dlog = np.full(pe, -1, dtype=np.int64)
        x = 1
        for j in range(order):
            dlog[x] = j
            x = (x * g) % pe
        return _CyclicFactor(pe, order, g, dlog)

    @staticmethod
    def _two_power_tables(e: int) -> list[_CyclicFactor]:
        # (Z/2^e)^* = <-1> x <5> for e >= 3
        pe = 1 << e
        half = pe >> 2  # order of 5
        sign = np.full(pe, -1, dtype=np.int64)
        five = np.full(pe, -1, dtype=np.int64)
        for i in (0, 1):
            x = (pe - 1) ** i % pe
            for j in range(half):
                sign[x] = i
                five[x] = j
                x = (x * 5) % pe
        return [
            _CyclicFactor(pe, 2, pe - 1, sign),
            _CyclicFactor(pe, half, 5, five),
        ]


@lru_cache(maxsize=256)
def unit_group(q: int) -> UnitGroup:
    return UnitGroup(q)


# ---------------------------------------------------------------------------
# Characters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirichletCharacter:
    """A Dirichlet character mod q, stored as exponent numerators.

    exponents[i] is k_i with chi(g_i) = e(k_i / s_i) on the i-th cyclic
    factor (order s_i).
    """

    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        grp = unit_group(self.modulus)
        if len(self.exponents) != len(grp.orders):
            raise ValueError("exponent tuple does not match the unit group")
        for k, s in zip(self.exponents, grp.orders):
            if not (0 <= k < s):
                raise ValueError("exponent %d out of range for order %d" % (k, s))

    # -- structure ---------------------------------------------------------

    @property
    def group(self) -> UnitGroup:
        return unit_group(self.modulus)

    @property
    def exponent_map(self) -> dict[int, Fraction]:
        """generator -> rational exponent of the root-of-unity value."""
        grp = self.group
        return {
            f.generator: Fraction(k, f.order)
            for f, k in zip(grp.factors, self.exponents)
        }

    @property
    def label(self) -> str:
        if not self.exponents:
            return "chi[%d]" % self.modulus
        return "chi[%d;%s]" % (self.modulus, ",".join(map(str, self.exponents)))

    @property
    def is_principal(self) -> bool:
        return all(k == 0 for k in self.exponents)

    @property
    def order(self) -> int:
        o = 1
        for k, s in zip(self.exponents, self.group.orders):
            if k:
                o = math.lcm(o, s // math.gcd(k, s))
        return o

    @property
    def is_real(self) -> bool:
        return self.order <= 2

    def conjugate(self) -> "DirichletCharacter":
        grp = self.group
        return DirichletCharacter(
            self.modulus,
            tuple((-k) % s for k, s in zip(self.exponents, grp.orders)),
        )

    @property
    def parity(self) -> int:
        """a in {0,1} with chi(-1) = (-1)^a.

        On odd prime powers -1 = g^(order/2), so the factor contributes
        (-1)^k; mod 4 the generator is -1 itself; mod 2^e (e >= 3) only the
        <-1> factor sees -1.
        """
        if self.modulus <= 2:
            return 0
        sign = 0
        for f, k in zip(self.group.factors, self.exponents):
            pe = f.prime_power
            if pe % 2 == 1 or pe == 4 or f.generator == pe - 1:
                sign += k
        return sign % 2

    @property
    def conductor(self) -> int:
        """Smallest f | q through which the character factors.

        Per cyclic factor: a local character of order d on (Z/p^e)^* needs
        modulus p^(v_p(d)+1) for odd p; on the 2-part, a nontrivial <5>
        component of order 2^beta needs 2^(beta+2), else a nontrivial <-1>
        (or mod-4) component needs 4.
        """
        f_odd = 1
        two_parts: list[tuple[_CyclicFactor, int]] = []
        for fac, k in zip(self.group.factors, self.exponents):
            pe = fac.prime_power
            if pe % 2 == 0:
                two_parts.append((fac, k))
                continue
            if k == 0:
                continue
            p = _arith.factorize(pe)[0][0]
            d = fac.order // math.gcd(k, fac.order)
            alpha = 0
            while d % p == 0:
                d //= p
                alpha += 1
            f_odd *= p ** (alpha + 1)
        f_two = 1
        if len(two_parts) == 1:  # modulus divisible by exactly 4
            f_two = 4 if two_parts[0][1] else 1
        elif len(two_parts) == 2:  # <-1> x <5> for 8 | q
            (_, k_sign), (fac5, k5) = two_parts
            if k5:
                d = fac5.order // math.gcd(k5, fac5.order)
                f_two = 4 * d  # d = 2^beta, conductor 2^(beta+2)
            elif k_sign:
                f_two = 4
        return f_odd * f_two

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    # -- values --------------------------------------------------------------

    def value_numerator(self, n: int) -> int | None:
        """Exponent numerator r with chi(n) = e(r / exponent_lcm), or None if
        gcd(n, q) > 1. Exact integer arithmetic."""
        q = self.modulus
        if q == 1:
            return 0
        if math.gcd(n % q, q) != 1:
            return None
        grp = self.group
        N = grp.exponent_lcm
        r = 0
        for fac, k in zip(grp.factors, self.exponents):
            ell = int(fac.dlog[n % fac.prime_power])
            r += k * ell * (N // fac.order)
        return r % N

    def __call__(self, n: int) -> complex:
        r = self.value_numerator(n)
        if r is None:
            return 0j
        return _root_of_unity(r, self.group.exponent_lcm)

    def values(self, n) -> np.ndarray:
        """Vectorized chi(n) over an integer array."""
        q = self.modulus
        n = np.asarray(n, dtype=np.int64)
        if q == 1:
            return np.ones(n.shape, dtype=complex)
        grp = self.group
        N = grp.exponent_lcm
        r = np.zeros(n.shape, dtype=np.int64)
        ok = np.gcd(n % q, q) == 1
        for fac, k in zip(grp.factors, self.exponents):
            ell = fac.dlog[n % fac.prime_power]
            r += np.where(ok, k * ell * (N // fac.order), 0)
        roots = _root_table(N)
        out = np.where(ok, roots[r % N], 0j)
        return out

    def values_on_units(self) -> np.ndarray:
        """chi on the unit residues of the group, in grp.units order."""
        if self.modulus == 1:
            return np.ones(1, dtype=complex)
        return self.values(self.group.units)


@lru_cache(maxsize=64)
def _root_table(N: int) -> np.ndarray:
    tab = np.exp(2j * np.pi * np.arange(N) / N)
    # pin the exact lattice points so real characters stay exactly +-1
    tab[0] = 1.0
    if N % 2 == 0:
        tab[N // 2] = -1.0
    if N % 4 == 0:
        tab[N // 4] = 1j
        tab[3 * N // 4] = -1j
    return tab


def _root_of_unity(r: int, N: int) -> complex:
    return complex(_root_table(N)[r % N])


def enumerate_characters(q: int, cap: int = DEFAULT_ENUM_CAP) -> list[DirichletCharacter]:
    """All phi(q) characters mod q, in lexicographic exponent order."""
    grp = unit_group(q)
    if grp.phi > cap:
        raise ValueError(
            "enumeration of %d characters mod %d exceeds the cap %d"
            % (grp.phi, q, cap)
        )
    return [
        DirichletCharacter(q, exps)
        for exps in _iproduct(*(range(s) for s in grp.orders))
    ]


def primitive_characters(q: int, cap: int = DEFAULT_ENUM_CAP) -> list[DirichletCharacter]:
    return [chi for chi in enumerate_characters(q, cap) if chi.is_primitive]


def kronecker_character(d: int) -> DirichletCharacter:
    """The quadratic character mod |d| attached to a fundamental discriminant d.

    chi(n) = kronecker(d, n); primitive of conductor |d|.
    """
    if not _arith.is_fundamental_discriminant(d):
        raise ValueError("%d is not a fundamental discriminant" % d)
    q = abs(d)
    grp = unit_group(q)
    exps = []
    for fac in grp.factors:
        # evaluate at the CRT basis element (generator locally, 1 at the
        # cofactor) so the exponent is read off one factor at a time
        pe = fac.prime_power
        b = _arith.crt_reconstruct([fac.generator % pe, 1], [pe, q // pe])
        val = _arith.kronecker(d, b)
        assert val in (1, -1), "kronecker symbol vanished on a unit"
        exps.append(0 if val == 1 else fac.order // 2)
    chi = DirichletCharacter(q, tuple(exps))
    assert chi.is_primitive, "kronecker character must have conductor |d|"
    return chi


def legendre_character(p: int) -> DirichletCharacter:
    """The Legendre symbol mod an odd prime p as a Dirichlet character."""
    if p < 3 or _arith.factorize(p) != [(p, 1)]:
        raise ValueError("legendre_character needs an odd prime, got %d" % p)
    grp = unit_group(p)
    return DirichletCharacter(p, (grp.orders[0] // 2,))


@lru_cache(maxsize=4096)
def inducing_primitive(chi: DirichletCharacter) -> DirichletCharacter:
    """The primitive character of modulus chi.conductor inducing chi.

    Agrees with chi on every n coprime to chi.modulus. Recovered by lifting
    each generator of the conductor's unit group to a residue coprime to
    the full modulus and reading off the exact root-of-unity exponent.
    """
    f = chi.conductor
    if f == chi.modulus:
        return chi
    q = chi.modulus
    n_q = chi.group.exponent_lcm
    exps = []
    for fac in unit_group(f).factors:
        # CRT-lift: the factor generator as an element of (Z/f)^*, i.e.
        # congruent to the generator at its own prime power and to 1 at
        # the cofactor, then shifted until coprime to the full modulus.
        pe = fac.prime_power
        b = _arith.crt_reconstruct([fac.generator % pe, 1], [pe, f // pe])
        while math.gcd(b, q) != 1:
            b += f
        r = chi.value_numerator(b)
        k = Fraction(r, n_q) * fac.order
        if k.denominator != 1:
            raise AssertionError("induced value is not an order-d root of unity")
        exps.append(int(k) % fac.order)
    star = DirichletCharacter(f, tuple(exps))
    assert star.is_primitive, "inducing character must be primitive"
    return star


# ---------------------------------------------------------------------------
# Gauss sums, root numbers, gamma factors
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_{a mod q} chi(a) e(a/q); requires primitivity."""
    if not chi.is_primitive:
        raise ValueError("gauss_sum is defined here only for primitive characters")
    q = chi.modulus
    if q == 1:
        return 1.0 + 0j
    a = chi.group.units
    vals = chi.values(a)
    return complex(np.sum(vals * np.exp(2j * np.pi * a / q)))


def root_number(chi: DirichletCharacter) -> complex:
    """eps(chi) = tau(chi) / (i^a sqrt(q)); unit modulus for primitive chi."""
    tau = gauss_sum(chi)
    return tau / (1j ** chi.parity * math.sqrt(chi.modulus))


def gamma_quotient(chi: DirichletCharacter, s) -> np.ndarray | complex:
    """gamma_q(s) = (q/pi)^{s-1/2} Gamma((s+a)/2) / Gamma((1-s+a)/2).

    This is the degree-1 instance of the completed-function quotient with
    arithmetic conductor q and archimedean parameter the parity.
    """
    a = chi.parity
    q = chi.modulus
    s_arr = np.asarray(s, dtype=complex)
    lg = (
        (s_arr - 0.5) * math.log(q / math.pi)
        + loggamma((s_arr + a) / 2.0)
        - loggamma((1.0 - s_arr + a) / 2.0)
    )
    out = np.exp(lg)
    return complex(out) if np.isscalar(s) or s_arr.ndim == 0 else out


@dataclass(frozen=True)
class GammaFactorData:
    """Root number and gamma-quotient evaluator for a primitive character."""

    character: DirichletCharacter
    root_number: complex

    def __post_init__(self):
        if abs(abs(self.root_number) - 1.0) > 1e-8:
            raise ValueError("root number of a primitive character must be unimodular")

    def gamma_quotient(self, s):
        return gamma_quotient(self.character, s)


def gamma_factor_data(chi: DirichletCharacter) -> GammaFactorData:
    return GammaFactorData(chi, root_number(chi))


# ---------------------------------------------------------------------------
# Analytic conductor
# ---------------------------------------------------------------------------

LRS_FLOOR = {m: 1.0 / (m * m + 1) - 0.5 for m in range(1, 9)}


@dataclass(frozen=True)
class AnalyticConductor:
    """C = D * prod_j (2 + |c_j|) with C(s) = C (1+|s|)^m."""

    D: int
    c_list: tuple[complex, ...]
    m: int

    def __post_init__(self):
        if self.D < 1 or self.m < 1:
            raise ValueError("need D >= 1 and degree m >= 1")
        if len(self.c_list) != self.m:
            raise ValueError("need exactly m archimedean parameters")
        floor = 1.0 / (self.m * self.m + 1) - 0.5
        for c in self.c_list:
            if complex(c).real < floor - 1e-12:
                raise ValueError(
                    "archimedean parameter %r violates Re c >= %g" % (c, floor)
                )

    @property
    def value(self) -> float:
        out = float(self.D)
        for c in self.c_list:
            out *= 2.0 + abs(complex(c))
        return out

    def of_s(self, s) -> float | np.ndarray:
        return self.value * (1.0 + np.abs(np.asarray(s))) ** self.m


@dataclass(frozen=True)
class TwistBound:
    bound: float
    shifted: AnalyticConductor


def analytic_conductor(chi: DirichletCharacter) -> AnalyticConductor:
    """Degree-1 analytic conductor: D = conductor, c_1 = parity."""
    return AnalyticConductor(chi.conductor, (complex(chi.parity),), 1)


def twist_conductor_bound(cond: AnalyticConductor, a: complex) -> TwistBound:
    """Shift c_j -> c_j + a (a purely imaginary): new C <= C (1+|a|)^m."""
    a = complex(a)
    if abs(a.real) > 1e-12:
        raise ValueError("twist shift must be purely imaginary, got %r" % a)
    shifted = AnalyticConductor(cond.D, tuple(c + a for c in cond.c_list), cond.m)
    bound = cond.value * (1.0 + abs(a)) ** cond.m
    assert shifted.value <= bound * (1.0 + 1e-12), "triangle-inequality bound violated"
    return TwistBound(bound, shifted)


# ---------------------------------------------------------------------------
# Hurwitz-zeta L-evaluation
# ---------------------------------------------------------------------------

def _shift_count(sigma_min: float, tmax: float) -> int:
    """Euler-Maclaurin shift count for a single point s = sigma + it.

    Base max(20, ceil(t)+10), grown until the analytic remainder bound
    (B_18/18! times the rising factorial (s)_17 times x^{-sigma-17}) drops
    to the roundoff floor of the main sum. Growing further would only
    amplify cancellation: the main-sum magnitude scales like
    N^{max(0,1-sigma)}, so the minimal adequate N is also the most
    accurate one.
    """
    n = int(math.ceil(max(20.0, math.ceil(tmax) + 10.0)))
    s = complex(sigma_min, tmax)
    log_poch = sum(math.log(max(abs(s + k), 1e-300)) for k in range(17))
    log_b = math.log(8.59e-12)  # B_18 / 18!
    xi = math.log(max(abs(s + 17.0) / (sigma_min + 17.0), 1.0))
    while n < 100_000:
        log_trunc = log_b + log_poch + xi - (sigma_min + 17.0) * math.log(n)
        log_floor = math.log(2.2e-16) + max(0.0, 1.0 - sigma_min) * math.log(n)
        if log_trunc <= max(math.log(1e-15), log_floor):
            break
        n = int(math.ceil(n * 1.25))
    return n


def _check_envelope(q: int, s_arr: np.ndarray):
    if q > MAX_MODULUS:
        raise AccuracyUnattainableError(
            "modulus %d exceeds the supported %d" % (q, MAX_MODULUS)
        )
    sig = s_arr.real.min()
    t = np.abs(s_arr.imag).max()
    if sig <= MIN_REAL:
        raise AccuracyUnattainableError(
            "Re s = %g is outside the supported strip Re s > %g" % (sig, MIN_REAL)
        )
    if t > MAX_IMAG:
        raise AccuracyUnattainableError(
            "|Im s| = %g exceeds the supported %g" % (t, MAX_IMAG)
        )


def _hurwitz_block(
    q: int, units: np.ndarray, s_arr: np.ndarray, N: int
) -> np.ndarray:
    """zeta(s_i, a_r/q) for a_r in units, MINUS the principal pole part.

    Returns H with H[r, i] such that

        zeta(s_i, a_r/q) = H[r, i] + 1/(s_i - 1).

    Splitting off 1/(s-1) exactly lets character sums cancel the pole
    analytically instead of numerically (principal callers add it back).
    The shift count N must already suit every s_i; callers group points
    so that a block never mixes shifts (see l_values_family).
    """
    a = units.astype(float) / q if q > 1 else np.array([1.0])
    n_s = s_arr.size
    out = np.empty((a.size, n_s), dtype=complex)

    # chunk the s axis so the (R*N, chunk) power matrix stays small
    chunk = max(1, int(3_000_000 / max(1, a.size * N)))
    logkpa = np.log(np.add.outer(a, np.arange(N, dtype=float))).ravel()  # (R*N,)
    x = N + a  # Euler-Maclaurin evaluation points
    logx = np.log(x)
    for lo in range(0, n_s, chunk):
        s = s_arr[lo : lo + chunk]
        # main sum over k < N
        powers = np.exp(np.multiply.outer(logkpa, -s))
        main = powers.reshape(a.size, N, s.size).sum(axis=1)
        # tail at x = N + a: ((x^{1-s} - 1)/(s-1)) + x^{-s}/2 + Bernoulli chain.
        # The first piece is -log(x) * expm1(u)/u with u = (1-s) log x, which
        # stays finite through s = 1 (limit -log x).
        xms = np.exp(np.multiply.outer(logx, -s))  # x^{-s}, (R, ns)
        u = np.multiply.outer(logx, 1.0 - s)
        small = np.abs(u) < 1e-8
        ratio = np.where(small, 1.0 + u / 2.0, np.expm1(u) / np.where(small, 1.0, u))
        pole = -logx[:, None] * ratio
        tail = pole + 0.5 * xms
        poch = np.copy(s)  # (s)_1
        xfac = xms / x[:, None]  # x^{-s-1}
        for j, bf in enumerate(_BERN_FACTORS, start=1):
            tail += bf * poch * xfac
            if j < len(_BERN_FACTORS):
                poch = poch * (s + (2 * j - 1)) * (s + 2 * j)
                xfac = xfac / (x * x)[:, None]
        out[:, lo : lo + chunk] = main + tail
    return out


def l_values_family(
    chars: list[DirichletCharacter], s
) -> np.ndarray:
    """L(s_i, chi_c) for characters sharing one modulus; shape (n_char, n_s).

    One Hurwitz block serves the whole family, so scanning all characters
    mod q costs barely more than scanning one.
    """
    if not chars:
        return np.zeros((0, 0), dtype=complex)
    q = chars[0].modulus
    if any(c.modulus != q for c in chars):
        raise ValueError("l_values_family needs a single shared modulus")
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    _check_envelope(q, s_arr)
    principal_rows = [c.is_principal for c in chars]
    if np.any(np.abs(s_arr - 1.0) < 1e-12) and any(principal_rows):
        raise PoleError("principal character has a pole at s = 1")

    # Left of Re s = 0 the Hurwitz route loses ground twice over (the main
    # sum grows like N^{1-sigma} while the character sum cancels), so those
    # points are reflected into Re s > 1 instead.
    left = s_arr.real < 0.0
    if left.any():
        vals = np.empty((len(chars), s_arr.size), dtype=complex)
        vals[:, left] = _l_values_reflected(chars, s_arr[left])
        if not left.all():
            vals[:, ~left] = _l_values_direct(chars, s_arr[~left])
        return vals
    return _l_values_direct(chars, s_arr)


def _l_values_direct(
    chars: list[DirichletCharacter], s_arr: np.ndarray
) -> np.ndarray:
    """Hurwitz-route evaluation, adequate for Re s >= 0."""
    q = chars[0].modulus
    principal_rows = [c.is_principal for c in chars]
    grp = unit_group(q)
    W = np.vstack([c.values_on_units() for c in chars])  # (n_char, R)

    # Per-point shift counts, bucketed to multiples of 8 so a fine s grid
    # does not shatter into one block per point. Mixing shifts would force
    # the largest N onto every point.
    n_per = np.array(
        [_shift_count(float(si.real), float(abs(si.imag))) for si in s_arr]
    )
    n_per = 8 * np.ceil(n_per / 8.0).astype(int)
    vals = np.empty((len(chars), s_arr.size), dtype=complex)
    for n_val in np.unique(n_per):
        sel = np.nonzero(n_per == n_val)[0]
        H = _hurwitz_block(q, grp.units, s_arr[sel], int(n_val))
        vals[:, sel] = W @ H
    # exact pole bookkeeping: sum_a chi(a) = phi(q) for principal chi, else 0
    for idx, is_pr in enumerate(principal_rows):
        if is_pr:
            vals[idx] += grp.phi / (s_arr - 1.0)
    qs = np.exp(-s_arr * math.log(q)) if q > 1 else np.ones_like(s_arr)
    return vals * qs


def _l_values_reflected(
    chars: list[DirichletCharacter], s_arr: np.ndarray
) -> np.ndarray:
    """Re s < 0 via the degree-1 functional equation.

    Each character is replaced by its primitive inducing character star;
    L(s, star) = eps(star) gamma(1-s) L(1-s, conj(star)) with 1-s in the
    absolutely convergent half-plane, and the Euler factors at primes
    dividing the modulus but not the conductor are restored exactly.
    """
    q = chars[0].modulus
    w = 1.0 - s_arr  # Re w > 1
    stars = [inducing_primitive(c) for c in chars]
    by_conductor: dict[int, list[int]] = {}
    for i, st in enumerate(stars):
        by_conductor.setdefault(st.modulus, []).append(i)
    out = np.empty((len(chars), s_arr.size), dtype=complex)
    for f, idxs in sorted(by_conductor.items()):
        lw = l_values_family([stars[i].conjugate() for i in idxs], w)
        for row, i in enumerate(idxs):
            st = stars[i]
            vals = root_number(st) * gamma_quotient(st, w) * lw[row]
            for p, _ in _arith.factorize(q):
                if f % p:
                    vals = vals * (
                        1.0 - complex(st(p)) * np.exp(-s_arr * math.log(p))
                    )
            out[i] = vals
    return out


def l_values(chi: DirichletCharacter, s) -> np.ndarray:
    """Vectorized L(s, chi) over an array of s."""
    return l_values_family([chi], s)[0]


def l_value(chi: DirichletCharacter, s: complex) -> complex:
    """L(s, chi), absolute accuracy 1e-9 over the supported envelope."""
    return complex(l_values_family([chi], np.array([complex(s)]))[0, 0])


def make_l_evaluator(chi: DirichletCharacter):
    """A vectorized callable s_array -> L(s, chi), for the window machinery."""

    def ev(s):
        return l_values(chi, s)

    return ev


# ---------------------------------------------------------------------------
# Functional equation and bounds
# ---------------------------------------------------------------------------

def functional_equation_residuals(chi: DirichletCharacter, s) -> np.ndarray:
    """|L(1-s, chi) - eps(chi) gamma_q(s) L(s, conj chi)| over an s array."""
    if not chi.is_primitive:
        raise ValueError("the functional equation needs a primitive character")
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    eps = root_number(chi)
    lhs = l_values(chi, 1.0 - s_arr)
    rhs = eps * gamma_quotient(chi, s_arr) * l_values(chi.conjugate(), s_arr)
    return np.abs(lhs - rhs)


def functional_equation_residual(chi: DirichletCharacter, s: complex) -> float:
    return float(functional_equation_residuals(chi, complex(s))[0])


@dataclass(frozen=True)
class BoundCheckReport:
    """Empirical ratio report for a ≪-style bound (no implied constant)."""

    label: str
    sigma: float
    t_grid: tuple[float, ...]
    ratios: np.ndarray = field(repr=False, compare=False)

    @property
    def max_ratio(self) -> float:
        return float(np.max(self.ratios))

    @property
    def argmax_t(self) -> float:
        return float(self.t_grid[int(np.argmax(self.ratios))])


def gamma_factor_bound_check(
    chi: DirichletCharacter, sigma: float, t_grid
) -> BoundCheckReport:
    """max_t |gamma_q(sigma+it)| / C(sigma+it)^(sigma-1/2).

    Empirical form of the gamma-quotient growth bound; the analytic statement
    fixes no constant, so the report carries the observed ratios.
    """
    t = np.asarray(list(t_grid), dtype=float)
    s = sigma + 1j * t
    cond = analytic_conductor(chi)
    ratios = np.abs(gamma_quotient(chi, s)) / cond.of_s(s) ** (sigma - 0.5)
    return BoundCheckReport(chi.label, sigma, tuple(t.tolist()), ratios)


def convexity_bound_check(
    chi: DirichletCharacter, sigma: float, t_grid, eps: float = 0.05
) -> BoundCheckReport:
    """max_t |L(sigma+it)| / C(sigma+it)^((1-sigma)/2 + eps).

    Empirical Phragmen-Lindelof ratio over the grid.
    """
    if not (-eps - 1e-12 <= sigma <= 1.0 + eps + 1e-12):
        raise ValueError("convexity check expects -eps <= sigma <= 1+eps")
    t = np.asarray(list(t_grid), dtype=float)
    s = sigma + 1j * t
    cond = analytic_conductor(chi)
    vals = l_values(chi, s)
    ratios = np.abs(vals) / cond.of_s(s) ** ((1.0 - sigma) / 2.0 + eps)
    return BoundCheckReport(chi.label, sigma, tuple(t.tolist()), ratios)


def least_nonresidue(chi: DirichletCharacter, cap: int = 1_000_000) -> int:
    """Smallest n >= 1 with chi(n) not in {0, 1}; always a prime.

    Scans primes only: any smaller composite is a product of primes with
    value in {0, 1}, hence has value in {0, 1} itself.
    """
    if chi.is_principal:
        raise ValueError("the principal character has no nontrivial value")
    for p in _arith.primes_upto(cap):
        r = chi.value_numerator(p)
        if r is not None and r != 0:
            return p
    raise SearchCapError(
        "no nonresidue below %d; modulus %d" % (cap, chi.modulus)
    )
