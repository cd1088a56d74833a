import pytest

from oracles import legendre_by_squares, primes_upto
from reciprocity.modarith import (
    DomainError,
    is_prime,
    legendre,
    modpow,
    prime_factors,
    qstar,
    qstar_symbol,
    sieve_primes,
    sqrt_mod,
)


def test_sieve_matches_trial_division():
    table = sieve_primes(1000)
    assert list(table) == primes_upto(1000)
    assert len(sieve_primes(10**5)) == 9592


def test_sieve_rejects_tiny_limit():
    with pytest.raises(DomainError):
        sieve_primes(1)


def test_prime_table_queries():
    t = sieve_primes(100)
    assert 97 in t and 91 not in t
    assert t.upto(10) == (2, 3, 5, 7)
    assert t.between(20, 30) == (23, 29)
    assert t[0] == 2


def test_is_prime_and_factors():
    assert [n for n in range(30) if is_prime(n)] == primes_upto(29)
    assert prime_factors(44) == {2: 2, 11: 1}
    assert prime_factors(1) == {}


def test_modpow_examples():
    assert modpow(2, 11, 691) == 2048 % 691
    assert modpow(691, 11, 691) == 0
    assert modpow(5, 0, 7) == 1


@pytest.mark.parametrize("p", primes_upto(97)[1:])
def test_legendre_matches_squares(p):
    assert all(legendre(a, p) == legendre_by_squares(a, p) for a in range(-p, 2 * p))


def test_legendre_examples():
    assert legendre(3, 5) == -1 and legendre(5, 3) == -1
    assert legendre(0, 7) == 0
    assert legendre(-1, 13) == 1


@pytest.mark.parametrize("bad", [(3, 2), (3, 9), (2, 15)])
def test_legendre_domain(bad):
    with pytest.raises(DomainError):
        legendre(*bad)


def test_qstar():
    assert [qstar(q) for q in (3, 5, 7, 11, 13)] == [-3, 5, -7, -11, 13]
    assert all(qstar(q) % 4 == 1 for q in primes_upto(200)[1:])


def test_qstar_symbol_special_cases():
    assert qstar_symbol(5, 5) == 0
    # (q*/2) follows the supplementary law (-1)^((q^2-1)/8)
    assert qstar_symbol(7, 2) == 1 and qstar_symbol(3, 2) == -1 and qstar_symbol(5, 2) == -1


def test_sqrt_mod():
    for p in primes_upto(200)[1:]:
        for a in range(p):
            r = sqrt_mod(a, p)
            if legendre_by_squares(a, p) == -1:
                assert r is None
            else:
                assert r * r % p == a
