"""Imaginary quadratic fields: ideal counts, ramified sieves, genus characters.

Everything here is the degree-2 instantiation of the norm-counting
machinery.  A negative fundamental discriminant determines a field whose
ideal-count function r(n) is the divisor sum of a Kronecker character, so
the whole module reduces to exact integer arithmetic plus Dirichlet
L-values from the character module.  Each advertised quantity is kept
computable along two independent routes:

* the residue of the ideal-count rate: an L-value at 1 (analytic) against
  the class-number formula over the reduced forms (algebraic);
* the count of ideals coprime to the ramified primes: a direct sieve
  against inclusion-exclusion over subsets of ramified norms;
* genus-character L-functions: a Kronecker factorization against the
  coefficient series, Abel-summed through the shared Mellin machinery.

Genus characters are the real characters of the class group, indexed by
coprime splittings of the discriminant into two fundamental discriminants.
Their value on a Frobenius class is a Kronecker symbol, which makes the
least-nontrivial-Frobenius search exact: a split prime contributes its own
norm, an inert prime lands in the principal class (never a witness), and
ramified primes are skipped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple

import numpy as np

from . import _arith
from . import dirichlet as _dirichlet
from . import mellin as _mellin
from .errors import AccuracyUnattainableError, SearchCapError

# dual-path residue agreement demanded by residue_kappa
KAPPA_TOL = 1e-9

# Frobenius exponent comparison: measured log(norm)/log|disc| against the
# split-prime share 2/3 plus this slack
SPLIT_EXPONENT = 2.0 / 3.0
EXPONENT_SLACK = 0.1

DEFAULT_SEARCH_CAP = 1_000_000

# marker for inert primes in genus_value: norm p^2, principal class, so the
# character value is trivially 1 and the prime can never witness a search
INERT_TRIVIAL = "inert-trivial"


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ImaginaryQuadraticField:
    """A negative fundamental discriminant with its reduced-form class data.

    reduced_forms lists the (a, b, c) with b^2 - 4ac = discriminant,
    |b| <= a <= c, and b >= 0 whenever |b| = a or a = c; class_number is
    its length.  unit_count is 6 or 4 for the two discriminants with extra
    units, else 2.  ramified_primes are the primes dividing the
    discriminant; each carries a unique prime ideal of norm p.
    """

    discriminant: int
    reduced_forms: tuple[tuple[int, int, int], ...]
    class_number: int
    unit_count: int
    ramified_primes: tuple[int, ...]


def _reduced_forms(disc: int) -> tuple[tuple[int, int, int], ...]:
    """All reduced positive binary quadratic forms of discriminant disc.

    b runs over the residue of disc mod 2 with 3b^2 <= |disc| (the floor
    via isqrt is exact since b^2 is an integer); for each divisor a of
    (b^2 - disc)/4 with b <= a <= c the form (a, b, c) is reduced, and
    (a, -b, c) joins it exactly when both inequalities are strict and
    b > 0.
    """
    forms = []
    for b in range(disc % 2, math.isqrt(-disc // 3) + 1, 2):
        m = (b * b - disc) // 4
        for a in range(max(b, 1), math.isqrt(m) + 1):
            if m % a:
                continue
            c = m // a
            forms.append((a, b, c))
            if b and b < a < c:
                forms.append((a, -b, c))
    forms.sort(key=lambda f: (f[0], f[1]))
    return tuple(forms)


@lru_cache(maxsize=256)
def build_field(disc: int) -> ImaginaryQuadraticField:
    if disc >= 0 or not _arith.is_fundamental_discriminant(disc):
        raise ValueError(
            "%d is not a negative fundamental discriminant" % disc
        )
    forms = _reduced_forms(disc)
    for a, b, c in forms:
        assert b * b - 4 * a * c == disc, ("form discriminant", (a, b, c))
    assert forms and forms[0][0] == 1, ("principal form missing", disc)
    if disc == -3:
        w = 6
    elif disc == -4:
        w = 4
    else:
        w = 2
    ramified = tuple(p for p, _ in _arith.factorize(-disc))
    return ImaginaryQuadraticField(
        discriminant=disc,
        reduced_forms=forms,
        class_number=len(forms),
        unit_count=w,
        ramified_primes=ramified,
    )


# ---------------------------------------------------------------------------
# Ideal counts
# ---------------------------------------------------------------------------

def ideal_count(field: ImaginaryQuadraticField, n: int) -> int:
    """r(n) = sum of kronecker(disc, m) over m | n: ideals of norm n.

    Computed multiplicatively: a split prime power contributes e + 1, an
    inert one 1 or 0 by the parity of e, a ramified one 1.
    """
    if n < 1:
        raise ValueError("ideal_count expects n >= 1, got %d" % n)
    r = 1
    for p, e in _arith.factorize(n):
        k = _arith.kronecker(field.discriminant, p)
        if k == 1:
            r *= e + 1
        elif k == -1 and e % 2:
            return 0
    return r


@lru_cache(maxsize=6)
def _r_sieve(disc: int, x: int) -> np.ndarray:
    """int64 array of length x+1 with r(n) at index n (index 0 unused).

    Divisor-sum sieve over the Kronecker character row; exact integers.
    Cached per (disc, x) and shared read-only inside the module.
    """
    chi = _dirichlet.kronecker_character(disc)
    row = np.real(chi.values(np.arange(1, x + 1))).astype(np.int64)
    r = np.zeros(x + 1, dtype=np.int64)
    for m in range(1, x + 1):
        km = row[m - 1]
        if km:
            r[m::m] += km
    return r


def ideal_count_sieve(field: ImaginaryQuadraticField, x: int) -> np.ndarray:
    """r(1..x) as an int64 array of length x+1 with index n holding r(n)."""
    if x < 1:
        raise ValueError("sieve range must be at least 1, got %d" % x)
    return _r_sieve(field.discriminant, int(x)).copy()


def ideal_count_summation(
    field: ImaginaryQuadraticField, x: float, x_cap: int = 1 << 20
) -> int:
    """Exact count of integral ideals of norm <= x."""
    if x > x_cap:
        raise ValueError("x=%g beyond the configured cap %d" % (x, x_cap))
    n = int(math.floor(x))
    if n < 1:
        return 0
    return int(_r_sieve(field.discriminant, n).sum())


def summation_deviation(
    field: ImaginaryQuadraticField,
    x_max: int,
    eps: float = _mellin.GROWTH_EPS,
) -> float:
    """sup over integer x <= x_max of |count(x) - kappa x| / x^(1/3 + eps).

    The linear rate kappa comes from the class-number formula, so the
    statistic measures only the deviation term.  Reported as a scan
    diagnostic; no theorem pins its constant for a single field.
    """
    r = _r_sieve(field.discriminant, int(x_max))
    x = np.arange(1, int(x_max) + 1, dtype=float)
    dev = np.abs(np.cumsum(r[1:]) - residue_formula(field) * x)
    return float(np.max(dev / x ** (1.0 / 3.0 + eps)))


# ---------------------------------------------------------------------------
# The residue at 1, twice
# ---------------------------------------------------------------------------

def residue_formula(field: ImaginaryQuadraticField) -> float:
    """Class-number formula for the ideal-count rate: 2 pi h / (w sqrt|disc|)."""
    return (
        2.0
        * math.pi
        * field.class_number
        / (field.unit_count * math.sqrt(-field.discriminant))
    )


def residue_kappa(field: ImaginaryQuadraticField, tol: float = KAPPA_TOL) -> float:
    """The ideal-count rate as the Kronecker L-value at 1.

    Cross-checked against residue_formula: the two routes share nothing
    (Euler-Maclaurin L-evaluation against reduced-form enumeration), so
    disagreement beyond tol means one of them is broken and the value is
    refused rather than returned.
    """
    chi = _dirichlet.kronecker_character(field.discriminant)
    analytic = _dirichlet.l_value(chi, 1.0).real
    algebraic = residue_formula(field)
    if abs(analytic - algebraic) > tol:
        raise AccuracyUnattainableError(
            "residue paths disagree for disc %d: L-value %.12g vs formula %.12g"
            % (field.discriminant, analytic, algebraic)
        )
    return analytic


# ---------------------------------------------------------------------------
# The ramified sieve
# ---------------------------------------------------------------------------

def _coprime_mask(disc: int, x: int) -> np.ndarray:
    mask = np.ones(x + 1, dtype=bool)
    mask[0] = False
    for p, _ in _arith.factorize(-disc):
        mask[p::p] = False
    return mask


def sieved_ideal_count(field: ImaginaryQuadraticField, x: float) -> int:
    """Ideals of norm <= x coprime to every ramified prime, by direct sieve.

    An ideal misses all ramified primes exactly when its norm is coprime
    to the discriminant, so the count is the r-sum over such n.
    """
    n = int(math.floor(x))
    if n < 1:
        return 0
    r = _r_sieve(field.discriminant, n)
    return int(r[_coprime_mask(field.discriminant, n)].sum())


def sieved_ideal_count_alternating(
    field: ImaginaryQuadraticField, x: float
) -> int:
    """The same count through inclusion-exclusion over ramified subsets.

    Ideals divisible by a squarefree ramified product of norm q are in
    norm-preserving bijection with all ideals of norm <= x/q, so each
    subset contributes a full count at the scaled cutoff, signed by
    parity.  Exact integer arithmetic throughout.
    """
    n = int(math.floor(x))
    if n < 1:
        return 0
    total = 0
    for k in range(len(field.ramified_primes) + 1):
        for subset in combinations(field.ramified_primes, k):
            q = math.prod(subset)
            if q <= n:
                total += (-1) ** k * ideal_count_summation(field, n // q)
    return total


def sieved_count_paths(
    field: ImaginaryQuadraticField, x_max: int
) -> tuple[np.ndarray, np.ndarray]:
    """Both sieved-count prefix arrays on 0..x_max, for exact comparison.

    Returns (direct, alternating); the two are computed from one r-sieve
    but combine it through unrelated index arithmetic, so entry-wise
    equality exercises the inclusion-exclusion identity at every cutoff
    at once.
    """
    x = int(x_max)
    r = _r_sieve(field.discriminant, x)
    direct = np.zeros(x + 1, dtype=np.int64)
    masked = np.where(_coprime_mask(field.discriminant, x), r, 0)
    np.cumsum(masked[1:], out=direct[1:])
    full = np.zeros(x + 1, dtype=np.int64)
    np.cumsum(r[1:], out=full[1:])
    alternating = np.zeros(x + 1, dtype=np.int64)
    idx = np.arange(x + 1)
    for k in range(len(field.ramified_primes) + 1):
        for subset in combinations(field.ramified_primes, k):
            q = math.prod(subset)
            if q <= x:
                alternating += (-1) ** k * full[idx // q]
    return direct, alternating


class SieveProducts(NamedTuple):
    """Exact products over the sieving norms q_i.

    coprime_density = prod(1 - 1/q_i) is the main-term thinning from the
    coprimality condition; inflation = prod(1 + q_i^(-xi)) is the matching
    growth of the deviation term.
    """

    coprime_density: float
    inflation: float


def sieve_products(field: ImaginaryQuadraticField, xi: float) -> SieveProducts:
    if xi <= 0.0:
        raise ValueError("the inflation exponent must be positive")
    q = Fraction(1)
    r = 1.0
    for p in field.ramified_primes:
        q *= Fraction(p - 1, p)
        r *= 1.0 + float(p) ** -xi
    return SieveProducts(float(q), r)


def character_sieve_products(chi: "GenusCharacter", xi: float) -> SieveProducts:
    """The products taken over primes dividing the character conductor.

    Genus characters are everywhere unramified (conductor one), so both
    products are empty.  Kept as a separate reported quantity from the
    field-level sieve_products, which runs over the field-ramified primes
    and is strictly less than 1; conflating the two silently changes the
    main term.
    """
    if xi <= 0.0:
        raise ValueError("the inflation exponent must be positive")
    assert isinstance(chi, GenusCharacter), "conductor products need a genus character"
    return SieveProducts(1.0, 1.0)


# ---------------------------------------------------------------------------
# Main-term / deviation integral comparison
# ---------------------------------------------------------------------------

class SieveIntegrals(NamedTuple):
    main: float
    cross_bound: float
    error_bound: float


def _power_integral(exponent: float, beta: float) -> float:
    """integral_1^beta x^(exponent - 1) dx in closed form."""
    if abs(exponent) < 1e-12:
        return math.log(beta)
    return (beta**exponent - 1.0) / exponent


def sieve_integrals(
    field: ImaginaryQuadraticField,
    nu: float,
    beta: float,
    eps: float = 0.1,
    density: float | None = None,
    kappa: float | None = None,
) -> SieveIntegrals:
    """Sieved-count square integral against its two deviation envelopes.

    main is exact: integral_1^beta (Q kappa x^(1-nu))^2 dx/x for the
    linear part of the sieved count.  cross_bound integrates the linear
    part against the deviation envelope D^(1/3+eps) x^(1/3-nu), and
    error_bound the envelope squared (with the extra eps in its x-power);
    both are closed-form power integrals with D = |disc|.  density and
    kappa default to the field's coprime density and residue but can be
    pinned for fixture checks.
    """
    if nu <= 0.5:
        raise ValueError("the square integral needs nu > 1/2, got %g" % nu)
    if beta < 2.0:
        raise ValueError("beta must be at least 2, got %g" % beta)
    d = float(-field.discriminant)
    q = sieve_products(field, 1.0 / 3.0).coprime_density if density is None else density
    k = residue_formula(field) if kappa is None else kappa
    main = (q * k) ** 2 * _power_integral(2.0 - 2.0 * nu, beta)
    cross = (
        d ** (1.0 / 3.0 + eps)
        * q
        * k
        * _power_integral(4.0 / 3.0 - 2.0 * nu, beta)
    )
    error = d ** (2.0 / 3.0 + eps) * _power_integral(
        2.0 / 3.0 + eps - 2.0 * nu, beta
    )
    return SieveIntegrals(main, cross, error)


def integral_crossover(
    field: ImaginaryQuadraticField,
    nu: float,
    eps: float = 0.1,
    beta_cap: float = 1e15,
) -> float:
    """Smallest beta at which main exceeds cross_bound, by bisection.

    The ratio main/cross_bound grows like (Q kappa / D^(1/3+eps)) beta^(2/3),
    so the crossover traces a D^(1/2)-shaped curve over discriminants; the
    scan suites archive it.
    """
    def dominated(beta: float) -> bool:
        ints = sieve_integrals(field, nu, beta, eps)
        return ints.main > ints.cross_bound

    lo, hi = 2.0, 4.0
    if dominated(lo):
        return lo
    while not dominated(hi):
        lo, hi = hi, hi * hi
        if hi > beta_cap:
            raise SearchCapError(
                "no crossover below %g for disc %d"
                % (beta_cap, field.discriminant)
            )
    for _ in range(60):
        mid = math.sqrt(lo * hi)
        if dominated(mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# Genus characters
# ---------------------------------------------------------------------------

def prime_discriminants(disc: int) -> tuple[int, ...]:
    """The unique factorization of a fundamental discriminant into prime
    discriminants: (-1)^((p-1)/2) p for each odd prime p, and a two-part
    in {-4, 8, -8} when the discriminant is even."""
    if disc == 1:
        return ()
    if not _arith.is_fundamental_discriminant(disc):
        raise ValueError("%d is not a fundamental discriminant" % disc)
    parts = []
    odd = 1
    for p, _ in _arith.factorize(abs(disc)):
        if p == 2:
            continue
        star = p if p % 4 == 1 else -p
        parts.append(star)
        odd *= star
    two_part = disc // odd
    assert disc % odd == 0 and two_part in (1, -4, 8, -8), (
        "two-part factorization",
        disc,
    )
    if two_part != 1:
        parts.append(two_part)
    parts.sort(key=abs)
    return tuple(parts)


@dataclass(frozen=True)
class GenusCharacter:
    """A real class-group character, as a coprime splitting disc = d1 * d2.

    Both halves are fundamental discriminants (1 allowed as the empty
    product).  On an unramified prime ideal of split norm p the character
    takes the value kronecker(d1, p) = kronecker(d2, p); inert norms land
    in the principal class.  The splitting is unordered; construction
    accepts either orientation.
    """

    discriminant: int
    d1: int
    d2: int

    def __post_init__(self):
        if self.discriminant >= 0 or not _arith.is_fundamental_discriminant(
            self.discriminant
        ):
            raise ValueError(
                "%d is not a negative fundamental discriminant"
                % self.discriminant
            )
        if self.d1 * self.d2 != self.discriminant:
            raise ValueError(
                "splitting %d * %d does not factor %d"
                % (self.d1, self.d2, self.discriminant)
            )
        if math.gcd(self.d1, self.d2) != 1:
            raise ValueError(
                "splitting halves %d, %d share a factor" % (self.d1, self.d2)
            )
        for d in (self.d1, self.d2):
            if d != 1 and not _arith.is_fundamental_discriminant(d):
                raise ValueError("%d is not a fundamental discriminant" % d)

    @property
    def is_trivial(self) -> bool:
        return self.d1 in (1, self.discriminant)

    @property
    def label(self) -> str:
        return "genus[%d=%d*%d]" % (self.discriminant, self.d1, self.d2)

    @property
    def field(self) -> ImaginaryQuadraticField:
        return build_field(self.discriminant)


def genus_character(disc: int, d1: int) -> GenusCharacter:
    """The genus character of the given discriminant with d1 as one half."""
    if d1 == 0 or disc % d1:
        raise ValueError("%d does not divide the discriminant %d" % (d1, disc))
    return GenusCharacter(disc, d1, disc // d1)


def genus_characters(
    disc: int, include_trivial: bool = False
) -> list[GenusCharacter]:
    """All genus characters of the discriminant, one per unordered splitting.

    Canonical orientation |d1| < |d2| (ties cannot occur for coprime
    halves).  Subset products of the prime-discriminant factorization give
    2^(t-1) splittings; the trivial one is skipped unless asked for.
    """
    parts = prime_discriminants(disc)
    out = []
    for k in range(len(parts) + 1):
        for subset in combinations(parts, k):
            d1 = math.prod(subset)
            d2 = disc // d1
            if abs(d1) > abs(d2):
                continue
            chi = GenusCharacter(disc, d1, d2)
            if chi.is_trivial and not include_trivial:
                continue
            out.append(chi)
    out.sort(key=lambda c: (abs(c.d1), c.d1, not c.is_trivial))
    return out


def genus_value(chi: GenusCharacter, p: int) -> int | str:
    """Character value at the Frobenius class over the rational prime p.

    0 for ramified p; the INERT_TRIVIAL marker for inert p, whose prime
    ideal has norm p^2 and is principal, so the value is 1 for a reason
    worth keeping visible; otherwise kronecker(d1, p) on either prime
    above the split p.
    """
    if p < 2:
        raise ValueError("genus_value expects a prime, got %d" % p)
    if chi.discriminant % p == 0:
        return 0
    if _arith.kronecker(chi.discriminant, p) == -1:
        return INERT_TRIVIAL
    return _arith.kronecker(chi.d1, p)


def ramified_value(chi: GenusCharacter, p: int) -> int:
    """Character value at the unique prime ideal above a ramified p.

    Exactly one splitting half is coprime to p; its Kronecker symbol at p
    is the value, in {-1, +1}.
    """
    if chi.discriminant % p:
        raise ValueError("%d is not ramified in disc %d" % (p, chi.discriminant))
    g = (
        _arith.kronecker(chi.d1, p)
        if chi.d1 % p
        else _arith.kronecker(chi.d2, p)
    )
    assert g in (-1, 1), ("ramified value", chi.label, p)
    return g


@dataclass(frozen=True)
class FrobeniusWitness:
    """First unramified prime ideal with nontrivial character value.

    norm is the least such norm (the witness is split, so it equals the
    rational prime beneath it); exponent_ratio = log(norm)/log|disc| is
    the quantity compared against the split-prime share 2/3.
    """

    norm: int
    witness_prime: int
    exponent_ratio: float


def least_nontrivial_frobenius(
    chi: GenusCharacter, cap: int = DEFAULT_SEARCH_CAP
) -> FrobeniusWitness:
    """Scan primes ascending for the first nontrivial Frobenius value.

    Rational-prime order is norm order for the purpose of the search:
    ramified primes are excluded by definition, and an inert prime of
    norm p^2 is principal, so only split primes can witness; every split
    prime below the returned one has value +1, and every inert norm in
    between is trivially covered.
    """
    if chi.is_trivial:
        raise ValueError(
            "trivial genus splitting %s has no nontrivial value" % chi.label
        )
    for p in _arith.primes_upto(cap):
        if _arith.kronecker(chi.discriminant, p) == 1 and _arith.kronecker(
            chi.d1, p
        ) == -1:
            return FrobeniusWitness(
                norm=p,
                witness_prime=p,
                exponent_ratio=math.log(p) / math.log(-chi.discriminant),
            )
    raise SearchCapError(
        "no nontrivial Frobenius below %d for %s" % (cap, chi.label)
    )


def least_kronecker_nonresidue(d: int, cap: int = DEFAULT_SEARCH_CAP) -> int:
    """Smallest prime p with kronecker(d, p) = -1, for fundamental d.

    The light sibling of the character-module nonresidue search: a plain
    symbol walk with no unit-group construction, usable across a 10^5-wide
    discriminant scan.
    """
    if not _arith.is_fundamental_discriminant(d):
        raise ValueError("%d is not a fundamental discriminant" % d)
    for p in _arith.primes_upto(cap):
        if _arith.kronecker(d, p) == -1:
            return p
    raise SearchCapError("no nonresidue below %d for discriminant %d" % (cap, d))


# ---------------------------------------------------------------------------
# Unramified L-functions, twice
# ---------------------------------------------------------------------------

def _kronecker_dirichlet(d: int) -> _dirichlet.DirichletCharacter:
    if d == 1:
        return _dirichlet.DirichletCharacter(1, ())
    return _dirichlet.kronecker_character(d)


def ramified_euler_factors(chi: GenusCharacter, s) -> np.ndarray:
    """prod over ramified p of (1 - g_p p^(-s)), elementwise over s.

    These are the polynomial factors that strip the ramified primes from
    the Euler product; on Re s >= 0 each has modulus at most 2.
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    out = np.ones(s_arr.shape, dtype=complex)
    for p in _ramified_primes(chi.discriminant):
        out *= 1.0 - ramified_value(chi, p) * np.exp(-s_arr * math.log(p))
    return out


def unramified_l_values(chi: GenusCharacter, s) -> np.ndarray:
    """Ramified-prime-free L-function of a genus character, factored.

    The full Hecke L-function splits as the product of the two Kronecker
    Dirichlet L-functions of the splitting halves; multiplying by the
    ramified factor polynomials removes the finitely many ramified Euler
    factors.  Entire for nontrivial characters; the trivial splitting
    inherits the zeta pole at s = 1.
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    vals = _dirichlet.l_values(
        _kronecker_dirichlet(chi.d1), s_arr
    ) * _dirichlet.l_values(_kronecker_dirichlet(chi.d2), s_arr)
    return vals * ramified_euler_factors(chi, s_arr)


def unramified_l_value(chi: GenusCharacter, s: complex) -> complex:
    return complex(unramified_l_values(chi, complex(s))[0])


def _kronecker_row(d: int, x: int) -> np.ndarray:
    """kronecker(d, n) for n = 1..x as a float array of length x+1.

    Short rows come from scalar symbol walks; long ones from the character
    table, whose one-time dlog construction only pays off when the row is
    much longer than the modulus.
    """
    row = np.zeros(x + 1)
    if d == 1:
        row[1:] = 1.0
        return row
    if x <= 256:
        for n in range(1, x + 1):
            row[n] = _arith.kronecker(d, n)
        return row
    chi = _dirichlet.kronecker_character(d)
    row[1:] = np.real(chi.values(np.arange(1, x + 1)))
    return row


def _ramified_primes(disc: int) -> tuple[int, ...]:
    return tuple(p for p, _ in _arith.factorize(-disc))


def hecke_coefficients(chi: GenusCharacter, x_max: int) -> np.ndarray:
    """Coefficients a(n) of the full Hecke L-function, for n <= x_max.

    Dirichlet convolution of the two Kronecker rows, by a strided divisor
    sieve over the sparser row.  a(n) counts ideals of norm n weighted by
    the character, so the values are small integers, exact in doubles.
    """
    x = int(x_max)
    if x < 1:
        raise ValueError("coefficient range must be at least 1, got %d" % x)
    c1 = _kronecker_row(chi.d1, x)
    c2 = _kronecker_row(chi.d2, x)
    if np.count_nonzero(c2) < np.count_nonzero(c1):
        c1, c2 = c2, c1
    a = np.zeros(x + 1)
    for u in np.nonzero(c1[1:])[0] + 1:
        a[u::u] += c1[u] * c2[1 : x // u + 1]
    return a


def genus_coefficients(chi: GenusCharacter, x_max: int) -> np.ndarray:
    """Coefficients b(n) of the ramified-prime-free L-function.

    Multiplying the Hecke series by the ramified factor polynomials
    spreads each subset of ramified norms across the coefficient array
    with alternating sign, which is a second strided sieve on top of
    hecke_coefficients.
    """
    x = int(x_max)
    a = hecke_coefficients(chi, x)
    b = a.copy()
    ramified = _ramified_primes(chi.discriminant)
    for k in range(1, len(ramified) + 1):
        for subset in combinations(ramified, k):
            q = math.prod(subset)
            if q > x:
                continue
            g = math.prod(ramified_value(chi, p) for p in subset)
            b[q::q] += (-1) ** k * g * a[1 : x // q + 1]
    return b


def frobenius_coefficient_check(chi: GenusCharacter, norm: int) -> bool:
    """Partial sums of b(n) dominate the sieved ideal counts below norm.

    Below the first nontrivial Frobenius norm every unramified value is
    +1, so b(n) coincides with the count of coprime ideals of norm n and
    the cumulative comparison holds with equality; the check verifies the
    inequality at every cutoff n < norm.  Scalar symbol walks throughout,
    cheap enough to run across a full discriminant scan.
    """
    m = int(norm) - 1
    if m < 1:
        return True
    b_sums = np.cumsum(genus_coefficients(chi, m)[1:])
    row = _kronecker_row(chi.discriminant, m)
    r = np.zeros(m + 1)
    for u in range(1, m + 1):
        if row[u]:
            r[u::u] += row[u]
    for p in _ramified_primes(chi.discriminant):
        r[p::p] = 0.0
    sieved = np.cumsum(r[1:])
    return bool(np.all(b_sums >= sieved - 1e-9))


def genus_stream(chi: GenusCharacter, x_max: int) -> _mellin.CoefficientStream:
    """The b(n) series as a coefficient stream for the Mellin machinery.

    Declared growth: prefix sums of an entire degree-2 series, bounded by
    sqrt|disc| x^(1/2+eps) with large slack; the attached evaluator is the
    factorization path, so stream consumers exercise both routes.
    """
    return _mellin.array_stream(
        label="%s-stream" % chi.label,
        degree=2,
        values=genus_coefficients(chi, x_max)[1:],
        nu=0.5,
        xi=0.5,
        conductor=float(-chi.discriminant),
        self_dual=True,
        l_eval=lambda s: unramified_l_values(chi, s),
    )


def genus_series_values(
    chi: GenusCharacter, s, x_cap: int = 400_000
) -> tuple[np.ndarray, np.ndarray]:
    """The unramified L-values through the coefficient series.

    Abel summation in integral form: the Mellin transform of the exact
    prefix sums over [1, x_cap] equals L(s)/s up to the returned
    truncation bound, so the series value is s times the transform.
    Needs Re s > 1/2 plus the declared-growth slack to converge.
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    S = _summation_cached(chi, int(x_cap))
    vals, trunc = _mellin.mellin_values(S, s_arr, math.log(x_cap))
    return vals * s_arr, trunc * np.abs(s_arr)


@lru_cache(maxsize=4)
def _summation_cached(chi: GenusCharacter, x_cap: int) -> _mellin.SummationFunction:
    return _mellin.SummationFunction(genus_stream(chi, x_cap), x_cap)


# ---------------------------------------------------------------------------
# Dedekind zeta, twice
# ---------------------------------------------------------------------------

def dedekind_zeta_values(field: ImaginaryQuadraticField, s) -> np.ndarray:
    """zeta_F through the factorization zeta(s) L(s, chi_disc)."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    triv = _dirichlet.DirichletCharacter(1, ())
    kron = _dirichlet.kronecker_character(field.discriminant)
    return _dirichlet.l_values(triv, s_arr) * _dirichlet.l_values(kron, s_arr)


def dedekind_zeta(field: ImaginaryQuadraticField, s: complex) -> complex:
    return complex(dedekind_zeta_values(field, complex(s))[0])


def deviation_stream(
    field: ImaginaryQuadraticField, x_max: int
) -> _mellin.CoefficientStream:
    """The ideal-count series with its linear rate removed: r(n) - kappa.

    Subtracting the exact class-number-formula rate kills the pole, so
    the prefix sums grow like the deviation term alone and the Mellin
    route converges well right of Re s = 1/3; the declared envelope
    sqrt|disc| x^(1/3+eps) holds with large slack at desk scale.
    """
    kappa = residue_formula(field)
    r = _r_sieve(field.discriminant, int(x_max))

    def shifted_zeta(s: np.ndarray) -> np.ndarray:
        triv = _dirichlet.DirichletCharacter(1, ())
        return dedekind_zeta_values(field, s) - kappa * _dirichlet.l_values(
            triv, s
        )

    return _mellin.array_stream(
        label="deviation[%d]-stream" % field.discriminant,
        degree=2,
        values=r[1:] - kappa,
        nu=1.0 / 3.0,
        xi=0.5,
        conductor=float(-field.discriminant),
        self_dual=True,
        l_eval=shifted_zeta,
    )


def ideal_stream(
    field: ImaginaryQuadraticField, x_max: int
) -> _mellin.CoefficientStream:
    """The raw ideal-count series r(n) as a coefficient stream.

    Prefix sums grow linearly, so the declared abscissa is 1 and Mellin
    consumers must stay right of it; deviation_stream is the pole-free
    variant for high-accuracy work.
    """
    r = _r_sieve(field.discriminant, int(x_max))
    return _mellin.array_stream(
        label="ideal[%d]-stream" % field.discriminant,
        degree=2,
        values=r[1:].astype(float),
        nu=1.0,
        xi=0.5,
        conductor=float(-field.discriminant),
        self_dual=True,
        l_eval=lambda s: dedekind_zeta_values(field, s),
    )


def dedekind_series_values(
    field: ImaginaryQuadraticField, s, x_cap: int = 1 << 17
) -> tuple[np.ndarray, np.ndarray]:
    """zeta_F through the coefficient series, pole subtracted and restored.

    Abel-sums the deviation stream over [1, x_cap] and adds back the
    class-number-formula rate times zeta, so the only inaccuracy is the
    returned truncation bound; genuinely independent of the Kronecker
    L-evaluation at the same point.
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=complex))
    S = _deviation_cached(field, int(x_cap))
    vals, trunc = _mellin.mellin_values(S, s_arr, math.log(x_cap))
    triv = _dirichlet.DirichletCharacter(1, ())
    zeta = _dirichlet.l_values(triv, s_arr)
    return (
        vals * s_arr + residue_formula(field) * zeta,
        trunc * np.abs(s_arr),
    )


@lru_cache(maxsize=4)
def _deviation_cached(
    field: ImaginaryQuadraticField, x_cap: int
) -> _mellin.SummationFunction:
    return _mellin.SummationFunction(deviation_stream(field, x_cap), x_cap)
