"""Long Weierstrass curves reduced modulo primes.

``y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6``.  Points are ``(x, y)``
tuples of residues and the point at infinity is ``None``.  The group law works
on the long form directly, so p = 2 and 3 need no special handling there.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np

from reciprocity.modarith import DomainError, prime_factors, sqrt_mod
from reciprocity.parsing import ParseError, parse_terms

__all__ = [
    "WeierstrassCurve",
    "ReducedCurve",
    "TraceRecord",
    "CURVES",
    "parse_curve",
    "count_affine",
    "trace_table",
    "point_add",
    "scalar_mul",
    "l_torsion_kernel_size",
    "full_l_torsion_rational",
]

Point = Optional[tuple[int, int]]


@dataclass(frozen=True)
class WeierstrassCurve:
    a1: int = 0
    a2: int = 0
    a3: int = 0
    a4: int = 0
    a6: int = 0
    bad_primes: frozenset[int] | None = None

    def __post_init__(self):
        if self.discriminant == 0:
            raise DomainError(f"singular curve {self}")
        primes = frozenset(prime_factors(abs(self.discriminant)))
        if self.bad_primes is None:
            object.__setattr__(self, "bad_primes", primes)
        else:
            object.__setattr__(self, "bad_primes", frozenset(self.bad_primes))
            if not self.bad_primes <= primes:
                raise DomainError(f"bad primes {sorted(self.bad_primes)} do not all divide the discriminant")

    @property
    def coefficients(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def discriminant(self) -> int:
        a1, a2, a3, a4, a6 = self.coefficients
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def is_good(self, p: int) -> bool:
        return p not in self.bad_primes

    def reduce(self, p: int) -> ReducedCurve:
        return ReducedCurve(p, *(c % p for c in self.coefficients))

    def __str__(self) -> str:
        a1, a2, a3, a4, a6 = self.coefficients
        lhs = _join([(1, "y^2"), (a1, "xy"), (a3, "y")])
        rhs = _join([(1, "x^3"), (a2, "x^2"), (a4, "x"), (a6, "")])
        return f"{lhs} = {rhs}"


def _join(terms) -> str:
    out = ""
    for c, mono in terms:
        if c == 0:
            continue
        body = (str(abs(c)) if abs(c) != 1 or not mono else "") + mono
        if not out:
            out = ("-" if c < 0 else "") + body
        else:
            out += f" {'-' if c < 0 else '+'} {body}"
    return out or "0"


_LHS = {(2, 0): None, (1, 1): "a1", (1, 0): "a3"}  # (deg y, deg x) on the y side
_RHS = {(0, 3): None, (0, 2): "a2", (0, 1): "a4", (0, 0): "a6"}


def parse_curve(text: str, bad_primes: Iterable[int] | None = None) -> WeierstrassCurve:
    """Parse ``"y^2 + y = x^3 - x^2"``.

    Variables may be ``x, y`` or the bivariate ``T, S`` of the ``f(S, T) = 0``
    presentation (``S`` plays ``y``).  A single side ``... = 0`` is accepted.
    """
    if text.count("=") != 1:
        raise ParseError("expected exactly one '='", text, max(0, text.find("=")))
    left, right = text.split("=")
    offset = len(left) + 1
    coeff: dict[tuple[int, int], int] = {}
    for side, sign, shift in ((left, 1, 0), (right, -1, offset)):
        try:
            terms = parse_terms(side)
        except ParseError as err:
            raise ParseError(err.reason, text, err.position + shift) from None
        for c, powers, col in terms:
            names = set(powers)
            if not names <= {"x", "y"} and not names <= {"S", "T"}:
                raise ParseError(f"unknown variable in {sorted(names)}", text, col + shift)
            dy = powers.get("y", 0) + powers.get("S", 0)
            dx = powers.get("x", 0) + powers.get("T", 0)
            coeff[(dy, dx)] = coeff.get((dy, dx), 0) + sign * c
    coeff = {k: v for k, v in coeff.items() if v}
    if coeff.get((2, 0)) != 1 or coeff.get((0, 3)) != -1:
        raise ParseError("need y^2 on the left and x^3 on the right with coefficient 1", text, 0)
    vals = {}
    for key, v in coeff.items():
        if key in _LHS:
            if _LHS[key]:
                vals[_LHS[key]] = v
        elif key in _RHS:
            if _RHS[key]:
                vals[_RHS[key]] = -v
        else:
            raise ParseError(f"monomial y^{key[0]} x^{key[1]} not allowed in Weierstrass form", text, 0)
    return WeierstrassCurve(**vals, bad_primes=None if bad_primes is None else frozenset(bad_primes))


# name -> curve, with the bad primes of each conductor
CURVES: dict[str, WeierstrassCurve] = {
    "11a": WeierstrassCurve(0, -1, 1, 0, 0, frozenset({11})),
    "32a": WeierstrassCurve(0, 0, 0, -1, 0, frozenset({2})),
    "36a": WeierstrassCurve(0, 0, 0, 0, 1, frozenset({2, 3})),
    "37a": WeierstrassCurve(0, 0, 1, -1, 0, frozenset({37})),
    "101a": WeierstrassCurve(0, 1, 1, -1, -1, frozenset({101})),
}


@dataclass(frozen=True)
class ReducedCurve:
    p: int
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def contains(self, P: Point) -> bool:
        if P is None:
            return True
        x, y = P
        p = self.p
        return (y * y + self.a1 * x * y + self.a3 * y - (x**3 + self.a2 * x * x + self.a4 * x + self.a6)) % p == 0

    def neg(self, P: Point) -> Point:
        if P is None:
            return None
        x, y = P
        return (x, (-y - self.a1 * x - self.a3) % self.p)

    def add(self, P: Point, Q: Point) -> Point:
        if P is None:
            return Q
        if Q is None:
            return P
        p = self.p
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if (y1 + y2 + a1 * x2 + a3) % p == 0:
                return None
            den = (2 * y1 + a1 * x1 + a3) % p
            inv = pow(den, -1, p)
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) * inv % p
            nu = (-x1 * x1 * x1 + a4 * x1 + 2 * a6 - a3 * y1) * inv % p
        else:
            inv = pow(x2 - x1, -1, p)
            lam = (y2 - y1) * inv % p
            nu = (y1 * x2 - y2 * x1) * inv % p
        x3 = (lam * lam + a1 * lam - a2 - x1 - x2) % p
        y3 = (-(lam + a1) * x3 - nu - a3) % p
        return (x3, y3)

    def mul(self, k: int, P: Point) -> Point:
        if k < 0:
            return self.mul(-k, self.neg(P))
        result: Point = None
        addend = P
        while k:
            if k & 1:
                result = self.add(result, addend)
            k >>= 1
            if k:
                addend = self.add(addend, addend)
        return result

    def points(self) -> Iterator[tuple[int, int]]:
        """Affine points in increasing ``x``, generated lazily."""
        p = self.p
        if p == 2:
            for x in range(2):
                for y in range(2):
                    if self.contains((x, y)):
                        yield (x, y)
            return
        inv2 = (p + 1) // 2
        for x in range(p):
            u = (self.a1 * x + self.a3) % p
            disc = (u * u + 4 * (x**3 + self.a2 * x * x + self.a4 * x + self.a6)) % p
            s = sqrt_mod(disc, p)
            if s is None:
                continue
            yield (x, (s - u) * inv2 % p)
            if s:
                yield (x, (-s - u) * inv2 % p)


def point_add(E: ReducedCurve, P: Point, Q: Point) -> Point:
    return E.add(P, Q)


def scalar_mul(E: ReducedCurve, k: int, P: Point) -> Point:
    return E.mul(k, P)


@dataclass(frozen=True)
class TraceRecord:
    p: int
    n_affine: int
    a_p: int
    good: bool = True


# keeps 4 x^3 plus lower terms inside int64
_NUMPY_PRIME_LIMIT = 1 << 19


def _count_small(E: ReducedCurve) -> int:
    return sum(E.contains((x, y)) for x in range(E.p) for y in range(E.p))


def count_affine(E: WeierstrassCurve, p: int) -> TraceRecord:
    """Affine solutions over F_p and ``a_p = p - n_affine``.

    For p > 3 the equation is completed to ``(2y + a1 x + a3)^2 = D(x)`` and
    each ``x`` contributes ``1 + (D(x)/p)``; the quadratic character is read
    from a table of squares.
    """
    Ep = E.reduce(p)
    if p <= 3:
        n = _count_small(Ep)
    elif p >= _NUMPY_PRIME_LIMIT:
        n = sum(1 for _ in Ep.points())
    else:
        x = np.arange(p, dtype=np.int64)
        # Horner without intermediate reduction: 4 x^3 + (a1 x + a3)^2 < 2^63
        disc = (((4 * x + 4 * Ep.a2 + Ep.a1 * Ep.a1) * x + 4 * Ep.a4 + 2 * Ep.a1 * Ep.a3) * x
                + 4 * Ep.a6 + Ep.a3 * Ep.a3) % p
        half = x[: (p + 1) // 2]
        square = np.zeros(p, dtype=bool)
        square[half * half % p] = True  # includes 0
        # zero contributes one y, a nonzero square two
        n = 2 * int(np.count_nonzero(square[disc])) - int(np.count_nonzero(disc == 0))
    return TraceRecord(p, n, p - n, E.is_good(p))


def _trace_chunk(args) -> list[TraceRecord]:
    E, primes = args
    return [count_affine(E, p) for p in primes]


def trace_table(
    E: WeierstrassCurve, primes: Iterable[int], skip_bad: bool = False, jobs: int = 1
) -> list[TraceRecord]:
    """``count_affine`` over ``primes`` in order; ``jobs > 1`` fans out to processes."""
    plist = [p for p in primes if not (skip_bad and not E.is_good(p))]
    if jobs <= 1 or len(plist) < 64:
        return [count_affine(E, p) for p in plist]
    # interleave so every worker gets a similar share of large primes
    chunks = [plist[i::jobs * 4] for i in range(jobs * 4)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_trace_chunk, [(E, c) for c in chunks]))
    return sorted((r for part in parts for r in part), key=lambda r: r.p)


def _check_torsion_args(E: WeierstrassCurve, p: int, l: int) -> None:
    if not E.is_good(p):
        raise DomainError(f"{p} is a bad prime for {E}")
    if p == l:
        raise DomainError("p must differ from l")


def l_torsion_kernel_size(E: WeierstrassCurve, p: int, l: int) -> int:
    """``#{P in E(F_p) : l P = O}`` by enumerating every point.  O(p) group ops."""
    _check_torsion_args(E, p, l)
    Ep = E.reduce(p)
    return 1 + sum(1 for P in Ep.points() if Ep.mul(l, P) is None)


def full_l_torsion_rational(E: WeierstrassCurve, p: int, l: int, a_p: int | None = None) -> bool:
    """Whether ``E(F_p)`` contains all of ``E[l]``, i.e. ``(Z/l)^2``.

    Necessary conditions ``l | p - 1`` and ``l^2 | #E(F_p)`` are tested first.
    Otherwise the points are walked in order and pushed into the l-Sylow
    subgroup ``S`` by the cofactor ``m``: a point of order ``|S|`` proves ``S``
    cyclic (answer False); two independent points of order ``l`` prove the
    full l-torsion is rational (answer True).  One of the two always occurs.
    ``a_p`` may be supplied to skip the O(p) point count; a wrong value is
    caught because the walk checks every point's order against it.
    """
    _check_torsion_args(E, p, l)
    if (p - 1) % l:
        return False
    if a_p is None:
        a_p = count_affine(E, p).a_p
    order = p + 1 - a_p
    if order % (l * l):
        return False
    k, m = 0, order
    while m % l == 0:
        m //= l
        k += 1
    Ep = E.reduce(p)
    first: Point = None
    span: set = set()
    for P in Ep.points():
        Q = Ep.mul(m, P)
        if Q is None:
            continue
        j, R = 0, Q
        while R is not None:
            prev, R = R, Ep.mul(l, R)
            j += 1
            if j > k:
                raise ArithmeticError(f"point {P} has order not dividing {order}; wrong a_p={a_p}?")
        if j == k:
            return False
        if first is None:
            first = prev
            span = {Ep.mul(i, first) for i in range(l)}
        elif prev not in span:
            return True
    return l_torsion_kernel_size(E, p, l) == l * l  # pragma: no cover
