"""Primes and residue symbols.

Everything here is a pure function of its arguments.  The Legendre symbol is
computed from Euler's criterion only, never through reciprocity, so the
reciprocity checks in :mod:`reciprocity.laws` compare two independent routes.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DomainError",
    "PrimeTable",
    "is_prime",
    "sieve_primes",
    "modpow",
    "legendre",
    "qstar",
    "qstar_symbol",
    "sqrt_mod",
    "prime_factors",
]

# numpy kernels multiply two residues in int64
INT64_MODULUS_LIMIT = 1 << 31


class DomainError(ValueError):
    """An argument lies outside the domain of an arithmetic function."""


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit``, ascending."""

    limit: int
    primes: tuple[int, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def __getitem__(self, i):
        return self.primes[i]

    def __contains__(self, n) -> bool:
        i = bisect_right(self.primes, n)
        return i > 0 and self.primes[i - 1] == n

    def upto(self, bound: int) -> tuple[int, ...]:
        """Primes ``<= bound`` (bound may be below ``limit``)."""
        return self.primes[: bisect_right(self.primes, bound)]

    def between(self, lo: int, hi: int) -> tuple[int, ...]:
        i = bisect_right(self.primes, lo - 1)
        return self.primes[i : bisect_right(self.primes, hi)]


def sieve_primes(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes.

    >>> sieve_primes(10).primes
    (2, 3, 5, 7)
    """
    if limit < 2:
        raise DomainError(f"empty prime range: limit={limit} < 2")
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for n in range(3, math.isqrt(limit) + 1, 2):
        if flags[n]:
            flags[n * n :: 2 * n] = False
    return PrimeTable(limit, tuple(int(p) for p in np.flatnonzero(flags)))


def is_prime(n: int) -> bool:
    """Deterministic trial division; fine for the sizes used here."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def prime_factors(n: int) -> dict[int, int]:
    """Factor ``n >= 1`` by trial division, returning ``{p: exponent}``."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def modpow(base: int, exp: int, modulus: int) -> int:
    """Square-and-multiply ``base**exp mod modulus``."""
    if modulus < 1:
        raise DomainError(f"modulus must be positive, got {modulus}")
    if exp < 0:
        raise DomainError("negative exponent")
    result = 1 % modulus
    base %= modulus
    while exp:
        if exp & 1:
            result = result * base % modulus
        base = base * base % modulus
        exp >>= 1
    return result


def _require_odd_prime(p: int) -> None:
    if p == 2 or not is_prime(p):
        raise DomainError(f"{p} is not an odd prime")


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, by Euler's criterion."""
    _require_odd_prime(p)
    r = modpow(a, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def qstar(q: int) -> int:
    """(-1)^((q-1)/2) q, the unique signed multiple of q that is 1 mod 4."""
    _require_odd_prime(q)
    return q if q % 4 == 1 else -q


def qstar_symbol(q: int, p: int) -> int:
    """The symbol (q*/p) for any prime p.

    At p = 2 the supplementary rule (-1)^((q^2-1)/8) applies; at p = q the
    symbol is 0.
    """
    _require_odd_prime(q)
    if p == q:
        return 0
    if p == 2:
        return -1 if ((q * q - 1) // 8) % 2 else 1
    return legendre(qstar(q), p)


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of ``a`` modulo the odd prime ``p`` (Tonelli-Shanks).

    Returns ``None`` when ``a`` is a non-residue.  No primality check: this sits
    inside point enumeration loops.
    """
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    s, q = 0, p - 1
    while q % 2 == 0:
        s += 1
        q //= 2
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r
