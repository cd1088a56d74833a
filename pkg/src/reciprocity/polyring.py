"""Univariate polynomials over Z and over F_p.

Coefficient sequences are stored lowest degree first.  ``N_p(f)`` always means
the number of *distinct* roots of the reduction of ``f`` in F_p, computed as
``deg gcd(T^p - T, f)``; a double root counts once.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from reciprocity.modarith import INT64_MODULUS_LIMIT, DomainError, prime_factors
from reciprocity.parsing import ParseError, parse_terms

__all__ = [
    "IntPoly",
    "ModPoly",
    "RootCount",
    "NotSquarefreeError",
    "parse_poly",
    "reduce_mod_p",
    "poly_gcd",
    "frobenius_power",
    "count_distinct_roots",
    "count_distinct_roots_many",
    "factor_degrees",
    "is_squarefree",
    "ramified_primes",
    "cyclotomic",
    "euler_phi",
    "discriminant",
]


class NotSquarefreeError(DomainError):
    """Distinct-degree factorization needs a squarefree reduction."""


@dataclass(frozen=True)
class IntPoly:
    """Monic polynomial with integer coefficients, ``coeffs[i]`` of ``T^i``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if len(c) < 2:
            raise DomainError("polynomial must have positive degree")
        if c[-1] != 1:
            raise DomainError(f"polynomial is not monic (leading coefficient {c[-1]})")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> tuple[int, ...]:
        return tuple(i * c for i, c in enumerate(self.coeffs))[1:]

    def __str__(self) -> str:
        return format_poly(self.coeffs)


@dataclass(frozen=True)
class ModPoly:
    """Polynomial over F_p; trailing zero coefficients are stripped."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(_trim([c % self.p for c in self.coeffs])))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def monic(self) -> ModPoly:
        if self.is_zero():
            return self
        inv = pow(self.coeffs[-1], -1, self.p)
        return ModPoly(self.p, tuple(c * inv for c in self.coeffs))

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def __str__(self) -> str:
        return format_poly(self.coeffs) + f" over F_{self.p}"


@dataclass(frozen=True)
class RootCount:
    p: int
    distinct_roots: int


def format_poly(coeffs: Sequence[int], var: str = "T") -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        body = str(mag) if i == 0 or mag != 1 else ""
        parts.append((sign, body + mono))
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def parse_poly(text: str) -> IntPoly:
    """Parse ``"T^3 - T - 1"``; any single letter works as the variable.

    Rejects non-monic input and polynomials with a repeated factor over Q
    (zero discriminant), since every law here is about separable ``f``.
    """
    terms = parse_terms(text)
    var = None
    coeffs: dict[int, int] = {}
    for coef, powers, col in terms:
        if len(powers) > 1:
            raise ParseError("only one variable allowed", text, col)
        for v in powers:
            if var is None:
                var = v
            elif v != var:
                raise ParseError(f"mixed variables {var!r} and {v!r}", text, col)
        deg = next(iter(powers.values()), 0)
        coeffs[deg] = coeffs.get(deg, 0) + coef
    coeffs = {d: c for d, c in coeffs.items() if c}
    if not coeffs or max(coeffs) == 0:
        raise ParseError("polynomial must have positive degree", text, 0)
    n = max(coeffs)
    if coeffs[n] != 1:
        raise ParseError(f"polynomial is not monic (leading coefficient {coeffs[n]})", text, 0)
    f = IntPoly(tuple(coeffs.get(i, 0) for i in range(n + 1)))
    if discriminant(f) == 0:
        raise ParseError("polynomial has a repeated factor (zero discriminant)", text, 0)
    return f


# --- F_p[T] list arithmetic -------------------------------------------------


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    q = [0] * max(0, len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] * inv % p
        if c:
            q[k - db] = c
            for j in range(db + 1):
                r[k - db + j] = (r[k - db + j] - c * b[j]) % p
    return _trim(q), _trim(r[:db])


def _mod_monic(a: list[int], f: Sequence[int], p: int) -> list[int]:
    d = len(f) - 1
    for k in range(len(a) - 1, d - 1, -1):
        c = a[k]
        if c:
            for j in range(d):
                a[k - d + j] = (a[k - d + j] - c * f[j]) % p
    del a[d:]
    return _trim(a)


def _mulmod(a, b, f, p):
    return _mod_monic(_mul(a, b, p), f, p)


def _powmod(base: list[int], e: int, f: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _mod_monic(list(base), f, p)
    while e:
        if e & 1:
            result = _mulmod(result, base, f, p)
        base = _mulmod(base, base, f, p)
        e >>= 1
    return _mod_monic(result, f, p) if len(f) > 1 else []


def _gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _divmod(a, b, p)[1]
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _check_modulus(a: ModPoly, b: ModPoly) -> None:
    if a.p != b.p:
        raise DomainError(f"modulus mismatch: {a.p} vs {b.p}")


# --- public operations ------------------------------------------------------


def reduce_mod_p(f: IntPoly, p: int) -> ModPoly:
    return ModPoly(p, f.coeffs)


def poly_gcd(a: ModPoly, b: ModPoly) -> ModPoly:
    """Monic gcd over F_p by Euclid's algorithm."""
    _check_modulus(a, b)
    if a.is_zero() and b.is_zero():
        raise DomainError("gcd(0, 0) is undefined")
    return ModPoly(a.p, tuple(_gcd(a.coeffs, b.coeffs, a.p)))


def frobenius_power(f: ModPoly) -> ModPoly:
    """``T^p mod f`` in F_p[T]/(f), by repeated squaring."""
    if f.degree < 1:
        raise DomainError("need deg f >= 1")
    g = f.monic()
    return ModPoly(f.p, tuple(_powmod([0, 1], f.p, g.coeffs, f.p)))


def count_distinct_roots(f: ModPoly) -> RootCount:
    """``N_p(f) = deg gcd(T^p - T, f)``."""
    if f.degree < 1:
        raise DomainError("need deg f >= 1")
    g = f.monic()
    x_p = _powmod([0, 1], f.p, g.coeffs, f.p)
    h = _gcd(g.coeffs, _sub(x_p, [0, 1], f.p), f.p)
    return RootCount(f.p, len(h) - 1)


def is_squarefree(f: ModPoly) -> bool:
    deriv = ModPoly(f.p, tuple(i * c for i, c in enumerate(f.coeffs))[1:])
    if deriv.is_zero():
        return False
    return poly_gcd(f, deriv).degree == 0


def factor_degrees(f: ModPoly) -> tuple[int, ...]:
    """Degrees of the irreducible factors of a squarefree ``f``, ascending.

    Distinct-degree factorization: the product of the degree-``d`` factors is
    ``gcd(T^(p^d) - T, f)`` once lower degrees have been divided out.
    """
    if f.degree < 1:
        raise DomainError("need deg f >= 1")
    if not is_squarefree(f):
        raise NotSquarefreeError(f"{format_poly(f.coeffs)} is not squarefree modulo {f.p}")
    p = f.p
    g = list(f.monic().coeffs)
    h = [0, 1]
    degrees: list[int] = []
    d = 0
    while len(g) - 1 >= 2 * (d + 1):
        d += 1
        h = _powmod(h, p, g, p)
        factor = _gcd(g, _sub(h, [0, 1], p), p)
        k = len(factor) - 1
        if k:
            degrees += [d] * (k // d)
            g = _divmod(g, factor, p)[0]
            h = _divmod(h, g, p)[1] if len(g) > 1 else h
    if len(g) > 1:
        degrees.append(len(g) - 1)
    return tuple(sorted(degrees))


def discriminant(f: IntPoly) -> int:
    """Discriminant over Z via the resultant of ``f`` and ``f'`` (exact fractions)."""
    from fractions import Fraction

    n = f.degree
    a = [Fraction(c) for c in f.coeffs]
    b = [Fraction(c) for c in f.derivative()]
    res = _resultant(a, b)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    out = sign * res
    assert out.denominator == 1
    return int(out)


def _resultant(a: list, b: list):
    # Euclidean resultant over Q; a, b low-degree first with nonzero leaders
    from fractions import Fraction

    a, b = list(a), list(b)
    while b and b[-1] == 0:
        b.pop()
    if not b:
        return Fraction(0)
    res = Fraction(1)
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return res * b[0] ** da
        # r = a mod b
        r = list(a)
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k] / b[-1]
            for j in range(db + 1):
                r[k - db + j] -= c * b[j]
        r = r[:db]
        while r and r[-1] == 0:
            r.pop()
        if not r:
            return Fraction(0)
        dr = len(r) - 1
        # res(a, b) = (-1)^(da*db) lc(b)^(da-dr) res(b, r)
        res *= (-1) ** (da * db) * b[-1] ** (da - dr)
        a, b = b, r


def ramified_primes(f: IntPoly, primes: Iterable[int]) -> list[int]:
    """Primes among ``primes`` where the reduction of ``f`` has a repeated factor."""
    return [p for p in primes if not is_squarefree(reduce_mod_p(f, p))]


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> IntPoly:
    """Phi_m by exact division of ``T^m - 1`` by ``Phi_d`` for proper divisors d."""
    if m < 1:
        raise DomainError("m must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            den = cyclotomic(d).coeffs
            q, r = _int_divmod(num, den)
            if any(r):
                raise ArithmeticError(f"Phi_{d} does not divide the running quotient for m={m}")
            num = q
    return IntPoly(tuple(num))


def _int_divmod(a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    # b monic
    r = list(a)
    db = len(b) - 1
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        q[k - db] = c
        if c:
            for j in range(db + 1):
                r[k - db + j] -= c * b[j]
    return q, r[:db]


def euler_phi(m: int) -> int:
    if m < 1:
        raise DomainError("m must be positive")
    out = m
    for p in prime_factors(m):
        out = out // p * (p - 1)
    return out


# --- batched kernel ---------------------------------------------------------


def _frobenius_rows(f: IntPoly, primes: np.ndarray) -> np.ndarray:
    """Rows of ``T^p mod f`` for many primes at once (int64, p < 2**31)."""
    d = f.degree
    P = primes.reshape(-1, 1)
    F = np.array(f.coeffs[:d], dtype=np.int64)[None, :] % P
    n = len(primes)
    # one reduction per product is enough when d * p^2 stays below 2**63
    lazy = int(primes.max()) ** 2 * (d + 1) < (1 << 62)

    def reduce_high(C):
        for k in range(C.shape[1] - 1, d - 1, -1):
            c = C[:, k : k + 1]
            C[:, k - d : k] = (C[:, k - d : k] - c * F) % P
        return C[:, :d]

    def mulmod(A, B):
        C = np.zeros((n, 2 * d - 1), dtype=np.int64)
        for i in range(d):
            if lazy:
                C[:, i : i + d] += A[:, i : i + 1] * B
            else:
                C[:, i : i + d] = (C[:, i : i + d] + A[:, i : i + 1] * B % P) % P
        C %= P
        return reduce_high(C)

    def times_t(A):
        top = A[:, d - 1 : d]
        out = np.zeros_like(A)
        out[:, 1:] = A[:, : d - 1]
        return (out - top * F) % P

    R = np.zeros((n, d), dtype=np.int64)
    R[:, 0] = 1 % primes
    if d == 1:
        # T = -c0 in F_p[T]/(T + c0); T^p = T by Fermat, compute anyway
        root = (-F[:, 0]) % primes
        R[:, 0] = [pow(int(r), int(p), int(p)) for r, p in zip(root, primes)]
        return R
    for bit in range(int(primes.max()).bit_length() - 1, -1, -1):
        R = mulmod(R, R)
        mask = ((primes >> bit) & 1).astype(bool)
        if mask.any():
            R[mask] = times_t(R)[mask]
    return R


def count_distinct_roots_many(f: IntPoly, primes: Iterable[int]) -> dict[int, int]:
    """``{p: N_p(f)}`` for many primes; vectorized Frobenius then a gcd per prime."""
    plist = [int(p) for p in primes]
    if not plist:
        return {}
    if max(plist) >= INT64_MODULUS_LIMIT:
        return {p: count_distinct_roots(reduce_mod_p(f, p)).distinct_roots for p in plist}
    rows = _frobenius_rows(f, np.array(plist, dtype=np.int64))
    out = {}
    for p, row in zip(plist, rows.tolist()):
        fp = [c % p for c in f.coeffs]
        h = _gcd(fp, _sub(_trim(row), [0, 1], p), p)
        out[p] = len(h) - 1
    return out
