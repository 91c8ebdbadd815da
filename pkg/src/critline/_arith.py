"""Elementary integer arithmetic shared by the character and field modules.

Everything here is deterministic and exact (pure integer arithmetic).
Desk scale throughout: moduli and discriminants up to ~10^6, so plain
sieves and trial factorization are fine.
"""

from __future__ import annotations

import math
from functools import lru_cache


def sieve_primes(n: int) -> list[int]:
    """All primes <= n, ascending."""
    if n < 2:
        return []
    flags = bytearray([1]) * (n + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return [i for i in range(2, n + 1) if flags[i]]


@lru_cache(maxsize=8)
def _prime_list_cached(n: int) -> tuple[int, ...]:
    return tuple(sieve_primes(n))


@lru_cache(maxsize=32)
def primes_upto(n: int) -> tuple[int, ...]:
    """Cached prime list; rounds the cap up so nearby calls share one sieve."""
    cap = max(1024, 1 << (max(n, 2) - 1).bit_length())
    return tuple(p for p in _prime_list_cached(cap) if p <= n)


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as [(p, e), ...] with p ascending."""
    if n < 1:
        raise ValueError("factorize expects n >= 1, got %d" % n)
    out = []
    for p in (2, 3, 5):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    # wheel over 6k+-1
    f = 7
    step = 4
    while f * f <= n:
        if n % f == 0:
            e = 0
            while n % f == 0:
                n //= f
                e += 1
            out.append((f, e))
        f += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return out


def radical(n: int) -> int:
    r = 1
    for p, _ in factorize(n):
        r *= p
    return r


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    n = abs(n)
    return all(e == 1 for _, e in factorize(n))


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd n > 0."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi needs odd n > 0")
    a %= n
    t = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), extending Jacobi to all integers n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    # split off the even part of n
    e = 0
    while n % 2 == 0:
        n //= 2
        e += 1
    if e:
        if a % 2 == 0:
            return 0
        if e % 2 == 1 and a % 8 in (3, 5):
            sign = -sign
    return sign * jacobi(a, n)


def is_fundamental_discriminant(d: int) -> bool:
    """Quadratic field discriminants: d = 1 is excluded here (no field)."""
    if d == 1 or d == 0:
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        k = d // 4
        return k % 4 in (2, 3) and is_squarefree(k)
    return False


def fundamental_discriminants(lo: int, hi: int) -> list[int]:
    """All fundamental discriminants d with lo <= d <= hi, ascending."""
    return [d for d in range(lo, hi + 1) if is_fundamental_discriminant(d)]


def primitive_root_mod_prime_power(p: int, e: int) -> int:
    """A generator of (Z/p^e)^* for odd prime p (cyclic case)."""
    if p == 2:
        raise ValueError("even prime powers are not cyclic for e >= 3")
    # generator mod p first
    order = p - 1
    fac = [q for q, _ in factorize(order)]
    g = None
    for cand in range(2, p):
        if all(pow(cand, order // q, p) != 1 for q in fac):
            g = cand
            break
    assert g is not None, "no primitive root found mod %d" % p
    if e == 1:
        return g
    # lift: g works mod p^e unless g^(p-1) == 1 mod p^2
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


def crt_reconstruct(residues: list[int], moduli: list[int]) -> int:
    """x mod prod(moduli) with x = residues[i] mod moduli[i] (coprime moduli)."""
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        t = ((r - x) * pow(m, -1, mi)) % mi
        x += m * t
        m *= mi
    return x % m
