"""Brute-force reference implementations used only by the tests.

Nothing here imports the package; each function is the most literal reading of
its definition, traded for speed.
"""

from __future__ import annotations

import itertools
import math


def primes_upto(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if all(p % d for d in range(2, math.isqrt(p) + 1))]


def legendre_by_squares(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if a in {x * x % p for x in range(1, p)} else -1


def roots_mod_p(coeffs: list[int], p: int) -> int:
    """Distinct roots in F_p of the polynomial with low-to-high ``coeffs``."""
    return sum(1 for t in range(p) if sum(c * t**i for i, c in enumerate(coeffs)) % p == 0)


def affine_points(a: tuple[int, int, int, int, int], p: int) -> int:
    """#{(x, y) in F_p^2 : y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6}."""
    a1, a2, a3, a4, a6 = a
    return sum(
        1
        for x in range(p)
        for y in range(p)
        if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % p == 0
    )


def theta_counts(form, arity: int, T: int, radius: int) -> list[int]:
    """Representation numbers of ``form`` below ``T`` over the box ``|v_i| <= radius``."""
    out = [0] * T
    for v in itertools.product(range(-radius, radius + 1), repeat=arity):
        n = form(*v)
        if n < T:
            out[n] += 1
    return out


def eta_naive(factors: list[tuple[int, int]], T: int) -> list[int]:
    """q * prod_k prod_i (1 - q^(N_i k))^(e_i), multiplying one binomial at a time."""
    series = [0] * T
    if T > 1:
        series[1] = 1
    for N, e in factors:
        for k in range(1, T):
            step = N * k
            if step >= T:
                break
            for _ in range(e):
                for n in range(T - 1, step - 1, -1):
                    series[n] -= series[n - step]
    return series


def group_order_brute(a, p: int) -> int:
    return affine_points(a, p) + 1
