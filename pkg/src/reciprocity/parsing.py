"""Tokenizer for the polynomial, curve and eta-spec text formats."""

from __future__ import annotations

import re

__all__ = ["ParseError", "parse_terms", "parse_eta_spec"]


class ParseError(ValueError):
    """Malformed input text; ``position`` is the 0-based column of the fault."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        self.reason = message
        super().__init__(f"{message} at column {position + 1}\n  {text}\n  {' ' * position}^")


_TERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*(\*)?\s*")
_FACTOR = re.compile(r"([A-Za-z])\s*(?:\^\s*(\d+))?\s*(\*?)\s*")


def parse_terms(text: str) -> list[tuple[int, dict[str, int], int]]:
    """Split a sum of monomials into ``(coefficient, {var: exponent}, column)``.

    Accepts ``3x^2``, ``3*x^2``, ``x*y``, ``xy``, ``- y`` and bare integers.
    Signs between terms are mandatory; only the first term may omit one.
    """
    terms: list[tuple[int, dict[str, int], int]] = []
    pos = 0
    n = len(text)
    if not text.strip():
        raise ParseError("empty expression", text, 0)
    while pos < n:
        start = pos
        m = _TERM.match(text, pos)
        sign, digits, star = m.group(1), m.group(2), m.group(3)
        if terms and sign is None:
            raise ParseError("expected '+' or '-'", text, start + len(text[start:]) - len(text[start:].lstrip()))
        pos = m.end()
        if pos >= n and digits is None:
            raise ParseError("dangling operator", text, max(start, n - 1))
        coef = int(digits) if digits else 1
        if sign == "-":
            coef = -coef
        powers: dict[str, int] = {}
        while pos < n:
            f = _FACTOR.match(text, pos)
            if not f:
                break
            var, exp = f.group(1), f.group(2)
            if exp is not None and int(exp) == 0:
                raise ParseError("zero exponent", text, f.start(2))
            powers[var] = powers.get(var, 0) + (int(exp) if exp else 1)
            pos = f.end()
        if digits is None and not powers:
            raise ParseError("expected a coefficient or a variable", text, pos)
        if star and not powers:
            raise ParseError("'*' must be followed by a variable", text, pos)
        terms.append((coef, powers, start))
        if pos < n and text[pos] not in "+-":
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
    return terms


def parse_eta_spec(text: str) -> tuple[tuple[int, int], ...]:
    """Parse ``"1^2 11^2"`` into ``((1, 2), (11, 2))``; a bare level means exponent 1."""
    if not text.strip():
        raise ParseError("empty eta specification", text, 0)
    factors: dict[int, int] = {}
    for m in re.finditer(r"\S+", text):
        tok = m.group()
        t = re.fullmatch(r"(\d+)(?:\^(\d+))?", tok)
        if not t:
            raise ParseError(f"bad eta factor {tok!r}", text, m.start())
        level, exp = int(t.group(1)), int(t.group(2) or 1)
        if level < 1 or exp < 1:
            raise ParseError("levels and exponents must be positive", text, m.start())
        if level in factors:
            raise ParseError(f"level {level} repeated", text, m.start())
        factors[level] = exp
    return tuple(sorted(factors.items()))
