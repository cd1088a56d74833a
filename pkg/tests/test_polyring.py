import pytest

from oracles import primes_upto, roots_mod_p
from reciprocity.modarith import DomainError
from reciprocity.parsing import ParseError
from reciprocity.polyring import (
    IntPoly,
    ModPoly,
    count_distinct_roots,
    count_distinct_roots_many,
    cyclotomic,
    discriminant,
    euler_phi,
    factor_degrees,
    format_poly,
    is_squarefree,
    parse_poly,
    poly_gcd,
    ramified_primes,
    reduce_mod_p,
)

POLYS = ["T^2+1", "T^2-T-1", "T^2-11", "T^3-T-1", "T^3+T-1", "T^3-2", "T^4-T^2+1", "T^5-T-1"]


def test_parse_and_format_round_trip():
    for text in POLYS:
        f = parse_poly(text)
        assert parse_poly(format_poly(f.coeffs)) == f
    assert parse_poly("x^3 - x - 1").coeffs == (-1, -1, 0, 1)


@pytest.mark.parametrize(
    "text, column",
    [("T^2", 0), ("2T^2+1", 0), ("T^2+1)", 5), ("T^2+S", 3), ("", 0), ("T^2 +", 4)],
)
def test_parse_rejects(text, column):
    with pytest.raises(ParseError) as err:
        parse_poly(text)
    assert err.value.position == column


def test_discriminants():
    assert discriminant(parse_poly("T^3-T-1")) == -23
    assert discriminant(parse_poly("T^3+T-1")) == -31
    assert discriminant(parse_poly("T^2-11")) == 44
    assert discriminant(parse_poly("T^2+1")) == -4


@pytest.mark.parametrize("p, n", [(5, 1), (7, 1), (23, 2), (59, 3)])
def test_cubic_root_counts(p, n):
    assert count_distinct_roots(reduce_mod_p(parse_poly("T^3-T-1"), p)).distinct_roots == n


def test_t2_plus_1_at_2_has_one_root():
    assert count_distinct_roots(reduce_mod_p(parse_poly("T^2+1"), 2)).distinct_roots == 1


@pytest.mark.parametrize("text", POLYS)
def test_root_counts_match_brute_force(text):
    f = parse_poly(text)
    primes = primes_upto(97)
    batch = count_distinct_roots_many(f, primes)
    for p in primes:
        want = roots_mod_p(list(f.coeffs), p)
        assert count_distinct_roots(reduce_mod_p(f, p)).distinct_roots == want
        assert batch[p] == want


def test_factor_degrees():
    f = parse_poly("T^3-T-1")
    assert factor_degrees(reduce_mod_p(f, 7)) == (1, 2)
    assert factor_degrees(reduce_mod_p(parse_poly("T^2+1"), 13)) == (1, 1)
    assert factor_degrees(reduce_mod_p(parse_poly("T^2+1"), 7)) == (2,)
    with pytest.raises(DomainError):
        factor_degrees(reduce_mod_p(f, 23))


def test_factor_degrees_sum_to_degree():
    f = parse_poly("T^5-T-1")
    for p in primes_upto(300):
        if p not in ramified_primes(f, [p]):
            assert sum(factor_degrees(reduce_mod_p(f, p))) == 5


def test_ramified_primes():
    assert ramified_primes(parse_poly("T^3-T-1"), primes_upto(100)) == [23]
    assert ramified_primes(parse_poly("T^3+T-1"), primes_upto(100)) == [31]
    assert ramified_primes(parse_poly("T^2+1"), primes_upto(100)) == [2]
    assert not is_squarefree(reduce_mod_p(parse_poly("T^2-T-1"), 5))


def test_gcd_and_modulus_mismatch():
    a = ModPoly(7, (6, 0, 1))  # T^2 - 1
    b = ModPoly(7, (1, 1))  # T + 1
    assert poly_gcd(a, b).monic().coeffs == (1, 1)
    with pytest.raises(DomainError):
        poly_gcd(a, ModPoly(5, (1, 1)))


def test_cyclotomic():
    assert cyclotomic(12).coeffs == (1, 0, -1, 0, 1)
    assert cyclotomic(5).coeffs == (1, 1, 1, 1, 1)
    assert cyclotomic(4) == IntPoly((1, 0, 1))
    for m in range(2, 40):
        assert cyclotomic(m).degree == euler_phi(m)
