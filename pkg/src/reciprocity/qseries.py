"""Exact truncated q-expansions.

Coefficients are Python integers throughout; floating point only appears when a
series is evaluated at a point of the upper half plane.  Dense products use
Kronecker substitution (pack each series into one big integer, multiply once,
unpack), which is what keeps Delta and the level-11 form cheap at 10^5 terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from reciprocity.modarith import DomainError, legendre, prime_factors, sieve_primes
from reciprocity.parsing import parse_eta_spec
from reciprocity.report import LawReport

try:  # GMP multiplication is asymptotically much faster than CPython's
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = None

__all__ = [
    "QSeries",
    "EtaSpec",
    "QuadForm",
    "SignedThetaRule",
    "PrecisionError",
    "series_mul",
    "expand_rational_gf",
    "eta_product",
    "eta_product_naive",
    "theta_series",
    "signed_theta",
    "halved_difference",
    "check_hecke",
    "evaluate_at_tau",
    "check_modularity",
    "required_truncation",
    "quadratic_character",
]


class PrecisionError(ArithmeticError):
    """Truncated series too short to evaluate at the requested point."""


@dataclass(frozen=True)
class QSeries:
    """``c_0 + c_1 q + ... + c_{T-1} q^{T-1}``, known exactly up to ``q^T``."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("truncation must be positive")

    @classmethod
    def from_list(cls, coeffs: Iterable[int]) -> QSeries:
        return cls(tuple(int(c) for c in coeffs))

    @classmethod
    def from_sparse(cls, terms: dict[int, int], truncation: int) -> QSeries:
        out = [0] * truncation
        for n, c in terms.items():
            if 0 <= n < truncation:
                out[n] += c
        return cls(tuple(out))

    @classmethod
    def one(cls, truncation: int) -> QSeries:
        return cls.from_sparse({0: 1}, truncation)

    @property
    def truncation(self) -> int:
        return len(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __add__(self, other: QSeries) -> QSeries:
        _same_truncation(self, other)
        return QSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: QSeries) -> QSeries:
        _same_truncation(self, other)
        return QSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: QSeries) -> QSeries:
        return series_mul(self, other)

    def truncate(self, truncation: int) -> QSeries:
        if truncation > self.truncation:
            raise ValueError(f"cannot extend a series known to {self.truncation} terms")
        return QSeries(self.coeffs[:truncation])

    def to_csv(self, start: int = 0) -> str:
        return "".join(f"{n},{c}\n" for n, c in enumerate(self.coeffs) if n >= start)


def _same_truncation(a: QSeries, b: QSeries) -> None:
    if a.truncation != b.truncation:
        raise ValueError(f"truncation mismatch: {a.truncation} vs {b.truncation}")


# --- multiplication -------------------------------------------------------


def _mul_school(a: Sequence[int], b: Sequence[int], T: int) -> list[int]:
    out = [0] * T
    for i, x in enumerate(a[:T]):
        if x:
            for j in range(min(len(b), T - i)):
                out[i + j] += x * b[j]
    return out


def _pack(coeffs: Sequence[int], nbytes: int) -> int:
    pos = b"".join((c if c > 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _mul_kronecker(a: Sequence[int], b: Sequence[int], T: int) -> list[int]:
    a, b = list(a[:T]), list(b[:T])
    ma = max(map(abs, a), default=0)
    mb = max(map(abs, b), default=0)
    if ma == 0 or mb == 0:
        return [0] * T
    # every product coefficient is bounded by min(len) * ma * mb < 2^(bits-1)
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 1
    nb = (bits + 7) // 8
    A, B = _pack(a, nb), _pack(b, nb)
    C = int(_mpz(A) * _mpz(B)) if _mpz is not None else A * B
    width = 8 * nb
    half = 1 << (width - 1)
    bias = int.from_bytes((b"\x00" * (nb - 1) + b"\x80") * T, "little")
    low = (C + bias) & ((1 << (width * T)) - 1)
    raw = low.to_bytes(nb * T, "little")
    return [int.from_bytes(raw[i * nb : (i + 1) * nb], "little") - half for i in range(T)]


def _mul(a: Sequence[int], b: Sequence[int], T: int) -> list[int]:
    if min(len(a), len(b), T) < 48:
        return _mul_school(a, b, T)
    return _mul_kronecker(a, b, T)


def _pow(a: Sequence[int], e: int, T: int) -> list[int]:
    result = None
    base = list(a[:T])
    while e:
        if e & 1:
            result = base if result is None else _mul(result, base, T)
        e >>= 1
        if e:
            base = _mul(base, base, T)
    return result if result is not None else [1] + [0] * (T - 1)


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product truncated at the common truncation."""
    _same_truncation(a, b)
    return QSeries(tuple(_mul(a.coeffs, b.coeffs, a.truncation)))


def expand_rational_gf(numerator: QSeries | Sequence[int], denominator: QSeries | Sequence[int], T: int) -> QSeries:
    """Power-series quotient by long division; the denominator must start with +-1."""
    num = list(numerator.coeffs if isinstance(numerator, QSeries) else numerator)
    den = list(denominator.coeffs if isinstance(denominator, QSeries) else denominator)
    if not den or den[0] not in (1, -1):
        raise DomainError("denominator needs constant term +1 or -1")
    d0 = den[0]
    taps = [(j, c) for j, c in enumerate(den) if j and c]
    out = [0] * T
    for n in range(T):
        acc = num[n] if n < len(num) else 0
        for j, c in taps:
            if j > n:
                break
            acc -= c * out[n - j]
        out[n] = acc * d0
    return QSeries(tuple(out))


# --- eta products -----------------------------------------------------------


@dataclass(frozen=True)
class EtaSpec:
    """``q * prod_i prod_k (1 - q^(N_i k))^(e_i)`` as ``((N_1, e_1), ...)``."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        levels = [n for n, _ in self.factors]
        if not self.factors:
            raise ValueError("empty eta specification")
        if levels != sorted(set(levels)):
            raise ValueError("levels must be distinct and ascending")
        if any(n < 1 or e < 1 for n, e in self.factors):
            raise ValueError("levels and exponents must be positive")

    @classmethod
    def parse(cls, text: str) -> EtaSpec:
        return cls(parse_eta_spec(text))

    def __str__(self) -> str:
        return " ".join(f"{n}^{e}" for n, e in self.factors)


def _euler_function(step: int, T: int) -> list[int]:
    """prod_k (1 - q^(step k)) to ``T`` terms via the pentagonal number theorem."""
    out = [0] * T
    out[0] = 1
    k = 1
    while True:
        g1 = step * k * (3 * k - 1) // 2
        if g1 >= T:
            break
        sign = -1 if k % 2 else 1
        out[g1] += sign
        g2 = step * k * (3 * k + 1) // 2
        if g2 < T:
            out[g2] += sign
        k += 1
    return out


def eta_product(spec: EtaSpec | str, T: int) -> QSeries:
    """Eta product truncated at ``q^T``; the leading factor ``q`` is included once."""
    if isinstance(spec, str):
        spec = EtaSpec.parse(spec)
    if T < 2:
        raise DomainError("truncation must be at least 2")
    body = [1] + [0] * (T - 2)
    for level, exp in spec.factors:
        body = _mul(body, _pow(_euler_function(level, T - 1), exp, T - 1), T - 1)
    return QSeries((0, *body))


def eta_product_naive(spec: EtaSpec | str, T: int) -> QSeries:
    """Same series by literal multiplication with each ``(1 - q^m)``; oracle only."""
    if isinstance(spec, str):
        spec = EtaSpec.parse(spec)
    c = np.zeros(T, dtype=object)
    c[:] = 0
    c[1] = 1
    for level, exp in spec.factors:
        for _ in range(exp):
            m = level
            while m < T:
                c[m:] = c[m:] - c[:-m]
                m += level
    return QSeries(tuple(int(x) for x in c))


# --- quadratic forms and theta series ---------------------------------------


def _det(rows: Sequence[Sequence[int]]) -> int:
    from fractions import Fraction

    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i] != 0), None)
        if piv is None:
            return 0
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det *= m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] / m[i][i]
            for c in range(i, n):
                m[r][c] -= f * m[i][c]
    return int(det)


@dataclass(frozen=True)
class QuadForm:
    """Integral quadratic form ``Q(v) = v . gram . v / 2`` with even diagonal."""

    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if n not in (2, 4) or any(len(r) != n for r in g):
            raise ValueError("gram must be a 2x2 or 4x4 matrix")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise ValueError("gram must be symmetric")
        if any(g[i][i] % 2 for i in range(n)):
            raise ValueError("diagonal of the doubled gram matrix must be even")
        if any(_det([r[:k] for r in g[:k]]) <= 0 for k in range(1, n + 1)):
            raise DomainError("quadratic form is not positive definite")

    @classmethod
    def binary(cls, a: int, b: int, c: int) -> QuadForm:
        """``a x^2 + b x y + c y^2``."""
        return cls(((2 * a, b), (b, 2 * c)))

    @classmethod
    def direct_sum(cls, f: QuadForm, g: QuadForm) -> QuadForm:
        n, m = f.arity, g.arity
        rows = [list(r) + [0] * m for r in f.gram] + [[0] * n + list(r) for r in g.gram]
        return cls(tuple(tuple(r) for r in rows))

    @property
    def arity(self) -> int:
        return len(self.gram)

    def __call__(self, *v: int) -> int:
        g = self.gram
        n = self.arity
        return sum(g[i][j] * v[i] * v[j] for i in range(n) for j in range(n)) // 2

    def bounds(self, T: int) -> list[int]:
        """Coordinate bounds ``|v_i| <= sqrt(2 T (G^-1)_ii)`` covering ``Q(v) < T``."""
        inv = np.linalg.inv(np.array(self.gram, dtype=float))
        return [int(math.isqrt(int(2 * T * inv[i, i] * (1 + 1e-9)) + 1)) + 1 for i in range(self.arity)]


def theta_series(Q: QuadForm, T: int) -> QSeries:
    """Representation numbers ``#{v : Q(v) = n}`` for ``n < T``."""
    g = np.array(Q.gram, dtype=np.int64)
    b = Q.bounds(T)
    rest = [np.arange(-k, k + 1, dtype=np.int64) for k in b[1:]]
    grids = np.meshgrid(*rest, indexing="ij")
    w = np.stack([x.ravel() for x in grids])  # (arity-1, M)
    q_rest = np.einsum("im,ij,jm->m", w, g[1:, 1:], w) // 2
    cross = g[0, 1:] @ w
    counts = np.zeros(T, dtype=np.int64)
    for x in range(-b[0], b[0] + 1):
        vals = q_rest + x * cross + (g[0, 0] // 2) * x * x
        vals = vals[vals < T]
        counts += np.bincount(vals, minlength=T)[:T]
    return QSeries(tuple(int(c) for c in counts))


@dataclass(frozen=True)
class SignedThetaRule:
    """Signed, congruence-restricted lattice sum over a quadratic form.

    A vector ``v`` contributes ``(-1)^(sign . v) q^Q(v)`` when, for every
    ``(coeffs, modulus, residue)`` in ``conditions``,
    ``coeffs . v == residue (mod modulus)``.
    """

    form: QuadForm
    conditions: tuple[tuple[tuple[int, ...], int, int], ...] = ()
    sign: tuple[int, ...] | None = None

    def weight(self, v: Sequence[int]) -> int:
        for coeffs, mod, res in self.conditions:
            if (sum(c * x for c, x in zip(coeffs, v)) - res) % mod:
                return 0
        if self.sign is None:
            return 1
        return -1 if sum(s * x for s, x in zip(self.sign, v)) % 2 else 1


def signed_theta(rule: SignedThetaRule, T: int) -> QSeries:
    if T < 2:
        raise DomainError("truncation must be at least 2")
    Q = rule.form
    b = Q.bounds(T)
    axes = [np.arange(-k, k + 1, dtype=np.int64) for k in b]
    grids = np.meshgrid(*axes, indexing="ij")
    v = np.stack([x.ravel() for x in grids])
    g = np.array(Q.gram, dtype=np.int64)
    vals = np.einsum("im,ij,jm->m", v, g, v) // 2
    weight = np.ones(vals.shape, dtype=np.int64)
    for coeffs, mod, res in rule.conditions:
        lin = np.array(coeffs, dtype=np.int64) @ v
        weight[(lin - res) % mod != 0] = 0
    if rule.sign is not None:
        par = (np.array(rule.sign, dtype=np.int64) @ v) % 2
        weight = np.where(par == 1, -weight, weight)
    keep = vals < T
    out = np.bincount(vals[keep], weights=weight[keep], minlength=T)[:T]
    return QSeries(tuple(int(round(c)) for c in out))


def halved_difference(a: QSeries, b: QSeries, divisor: int) -> QSeries:
    """``(a - b) / divisor`` with the constant term set to zero."""
    _same_truncation(a, b)
    if divisor not in (2, 4):
        raise ValueError("divisor must be 2 or 4")
    out = [0]
    for n in range(1, a.truncation):
        d = a[n] - b[n]
        if d % divisor:
            raise ArithmeticError(f"coefficient {n}: {a[n]} - {b[n]} is not divisible by {divisor}")
        out.append(d // divisor)
    return QSeries(tuple(out))


# --- Hecke relations ----------------------------------------------------------


def quadratic_character(q: int) -> Callable[[int], int]:
    """``d -> (d/q)`` for an odd prime ``q``."""

    def chi(d: int) -> int:
        return legendre(d, q)

    return chi


def check_hecke(
    c: QSeries,
    weight_param: int,
    bad_level: int = 1,
    *,
    character: Callable[[int], int] | None = None,
    strong: bool = False,
) -> LawReport:
    """Check the eigenform relations on every index below the truncation.

    - ``c_{m m'} = c_m c_{m'}`` for coprime ``m, m'`` (for all ``m, m'`` when
      ``strong``)
    - ``c_{p^r} = c_{p^(r-1)} c_p - chi(p) p^(w-1) c_{p^(r-2)}`` at good primes
    - ``c_{l^r} = c_l^r`` at primes ``l`` dividing ``bad_level``
    """
    T = c.truncation
    if T < 2 or c[1] != 1:
        raise ValueError("series must be normalized with c_1 = 1")
    if weight_param < 1:
        raise ValueError("weight must be positive")
    bad = set(prime_factors(bad_level)) if bad_level > 1 else set()
    report = LawReport(
        law_id=f"hecke-w{weight_param}" + ("-strong" if strong else ""),
        prime_range=(1, T - 1),
        summary={"bad_primes": sorted(bad), "truncation": T},
    )
    for m in range(2, T):
        for m2 in range(m, (T - 1) // m + 1):
            if not strong and math.gcd(m, m2) != 1:
                continue
            report.checked += 1
            if c[m * m2] != c[m] * c[m2]:
                report.fail(f"{m}*{m2}", c[m] * c[m2], c[m * m2])
    if strong:
        return report
    primes = sieve_primes(T - 1).primes if T > 2 else ()
    for p in primes:
        if p * p >= T:
            break
        chi = 1 if character is None else character(p)
        mult = chi * p ** (weight_param - 1)
        pr, r = p * p, 2
        while pr < T:
            report.checked += 1
            if p in bad:
                want = c[p] ** r
            else:
                want = c[pr // p] * c[p] - mult * c[pr // (p * p)]
            if c[pr] != want:
                report.fail(f"{p}^{r}", want, c[pr])
            pr *= p
            r += 1
    return report


# --- analytic evaluation ------------------------------------------------------

TAIL_TOLERANCE = 1e-15


def _max_abs(c: QSeries) -> int:
    return max(map(abs, c.coeffs)) or 1


def evaluate_at_tau(c: QSeries, tau: complex) -> tuple[complex, float]:
    """Partial Fourier sum ``sum c_n e^(2 pi i n tau)`` and a tail estimate.

    Refuses points where ``|q|^T >= 1e-15 / max|c_n|``: the neglected terms
    would not be small relative to the coefficient scale.
    """
    if tau.imag <= 0:
        raise DomainError("tau must lie in the upper half plane")
    T = c.truncation
    mag = math.exp(-2 * math.pi * tau.imag)
    M = _max_abs(c)
    if T * -2 * math.pi * tau.imag >= math.log(TAIL_TOLERANCE / M):
        raise PrecisionError(
            f"|q|^T too large at Im(tau)={tau.imag:.4g} with T={T}; "
            "increase the truncation or move tau up"
        )
    nz = [(n, v) for n, v in enumerate(c.coeffs) if v]
    if not nz:
        return 0j, 0.0
    n = np.array([k for k, _ in nz], dtype=np.float64)
    vals = np.array([float(v) for _, v in nz])
    terms = vals * np.exp(2j * math.pi * n * tau.real) * np.exp(-2 * math.pi * n * tau.imag)
    tail = M * mag**T / (1 - mag)
    return complex(terms.sum()), tail


def required_truncation(tau: complex, max_coeff: int) -> int:
    """Smallest ``T`` with ``|q|^T < 1e-15 / max_coeff`` at ``tau``."""
    return math.floor(math.log(TAIL_TOLERANCE / max_coeff) / (-2 * math.pi * tau.imag)) + 1


def _moebius(g, tau: complex) -> complex:
    a, b, cc, d = g
    return (a * tau + b) / (cc * tau + d)


def check_modularity(
    c: QSeries | Callable[[int], QSeries],
    level: int,
    weight: int,
    character: Callable[[int], int] | None = None,
    matrices: Sequence[tuple[int, int, int, int]] | None = None,
    taus: Sequence[complex] | None = None,
    tolerance: float = 1e-8,
) -> LawReport:
    """Numerically test ``F(g tau) = chi(d) (c tau + d)^k F(tau)`` on Gamma_0(N).

    ``c`` may be a fixed series, which must be long enough at every test point,
    or a callable ``T -> QSeries``; then the truncation is grown until the tail
    bound holds at every point and its image.
    """
    matrices = list(matrices or [(1, 1, 0, 1), (1, 0, level, 1)])
    taus = list(taus or [1j, 0.25 + 1j / 3])
    for a, b, cc, d in matrices:
        if a * d - b * cc != 1 or cc % level:
            raise DomainError(f"matrix ({a} {b}; {cc} {d}) is not in Gamma_0({level})")
    points = [t for t in taus] + [_moebius(g, t) for g in matrices for t in taus]
    min_im = min(t.imag for t in points)

    if callable(c):
        T = 64
        while True:
            series = c(T)
            need = required_truncation(complex(0, min_im), _max_abs(series))
            if need <= T:
                break
            T = max(need + need // 8, 2 * T)
    else:
        series = c
        need = required_truncation(complex(0, min_im), _max_abs(series))
        if need > series.truncation:
            raise PrecisionError(f"need {need} terms at Im(tau)={min_im:.4g}, have {series.truncation}")

    report = LawReport(
        law_id=f"modularity-N{level}-k{weight}",
        prime_range=(0, series.truncation - 1),
        summary={"truncation": series.truncation, "min_imag": min_im, "tolerance": tolerance},
    )
    worst = 0.0
    for g in matrices:
        a, b, cc, d = g
        chi = 1 if character is None else character(d)
        for tau in taus:
            lhs, _ = evaluate_at_tau(series, _moebius(g, tau))
            base, _ = evaluate_at_tau(series, tau)
            rhs = chi * (cc * tau + d) ** weight * base
            err = abs(lhs - rhs) / abs(base) if base else abs(lhs - rhs)
            worst = max(worst, err)
            report.checked += 1
            if not err < tolerance:
                report.fail(f"({a} {b}; {cc} {d}) at {tau}", f"<{tolerance}", err)
    report.summary["max_rel_error"] = worst
    return report
