import pytest

from oracles import eta_naive, theta_counts
from reciprocity.modarith import DomainError
from reciprocity.parsing import ParseError
from reciprocity.qseries import (
    EtaSpec,
    PrecisionError,
    QSeries,
    QuadForm,
    check_hecke,
    check_modularity,
    eta_product,
    eta_product_naive,
    evaluate_at_tau,
    expand_rational_gf,
    halved_difference,
    quadratic_character,
    required_truncation,
    series_mul,
    theta_series,
)

ETA_23 = [0, 1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 1, -1]
B_LIST = {0: 1, 1: 4, 2: 4, 3: 8, 4: 20, 5: 16, 6: 32, 7: 16, 11: 4, 12: 64, 13: 40, 14: 64, 15: 56, 16: 68, 17: 40}
C_LIST = {0: 1, 1: 0, 2: 12, 3: 12, 4: 12, 5: 12, 6: 24, 7: 24, 11: 0, 12: 72, 13: 24, 14: 48, 15: 60, 16: 84, 17: 48}
C_P_TABLE = {19: 0, 23: -1, 29: 0, 31: 7, 37: 3, 41: -8, 1987: -22, 1993: -66, 1997: -72, 1999: -20}
SPECS = ["1^1 23^1", "1^2 11^2", "4^2 8^2", "6^4", "12^2", "1^24"]


def test_series_arithmetic():
    a = QSeries.from_list([1, 1, 0, 0])
    assert (a * a).coeffs == (1, 2, 1, 0)
    assert (a - a).coeffs == (0, 0, 0, 0)
    assert QSeries.from_sparse({0: 1, 3: 5}, 4).coeffs == (1, 0, 0, 5)
    with pytest.raises(ValueError):
        a + QSeries.one(3)


def test_kronecker_product_matches_schoolbook():
    import random

    rng = random.Random(1)
    for T in (10, 60, 300):
        a = QSeries(tuple(rng.randint(-10**6, 10**6) for _ in range(T)))
        b = QSeries(tuple(rng.randint(-5, 5) for _ in range(T)))
        want = [sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(T)]
        assert list(series_mul(a, b).coeffs) == want


def test_eta_23_expansion():
    assert list(eta_product("1^1 23^1", 25).coeffs) == ETA_23


@pytest.mark.parametrize("spec", SPECS)
def test_eta_matches_naive_product(spec):
    T = 1000
    want = eta_naive(list(EtaSpec.parse(spec).factors), T)
    assert list(eta_product(spec, T).coeffs) == want
    assert list(eta_product_naive(spec, T).coeffs) == want


def test_eta_spec_parsing():
    assert EtaSpec.parse("1^2 11^2").factors == ((1, 2), (11, 2))
    assert str(EtaSpec.parse("11^2 1^2")) == "1^2 11^2"
    for bad in ["", "1^2 1^3", "1^0", "a^2"]:
        with pytest.raises(ParseError):
            EtaSpec.parse(bad)


def test_delta_small_values():
    tau = eta_product("1^24", 18)
    assert [tau[p] for p in (2, 3, 5, 7, 11, 13, 17)] == [-24, 252, 4830, -16744, 534612, -577738, -6905934]


def test_level_11_theta_lists():
    B = theta_series(QuadForm.direct_sum(QuadForm.binary(1, 1, 3), QuadForm.binary(1, 1, 3)), 18)
    C = theta_series(QuadForm(((4, 0, 2, 1), (0, 4, 1, -2), (2, 1, 4, 0), (1, -2, 0, 4))), 18)
    assert {n: B[n] for n in B_LIST} == B_LIST
    assert {n: C[n] for n in C_LIST} == C_LIST
    quarter = halved_difference(B, C, 4)
    assert quarter[13] == 4 and quarter[11] == 1 and quarter[5] == 1


def test_level_11_table():
    c = eta_product("1^2 11^2", 2000)
    assert {p: c[p] for p in C_P_TABLE} == C_P_TABLE


FORMS = [
    (QuadForm.binary(1, 1, 6), lambda x, y: x * x + x * y + 6 * y * y),
    (QuadForm.binary(2, 1, 3), lambda x, y: 2 * x * x + x * y + 3 * y * y),
    (QuadForm.binary(1, 1, 8), lambda x, y: x * x + x * y + 8 * y * y),
    (QuadForm.binary(2, 1, 4), lambda x, y: 2 * x * x + x * y + 4 * y * y),
    (QuadForm.binary(1, 0, 1), lambda x, y: x * x + y * y),
    (
        QuadForm.direct_sum(QuadForm.binary(1, 1, 3), QuadForm.binary(1, 1, 3)),
        lambda x, y, u, v: x * x + x * y + 3 * y * y + u * u + u * v + 3 * v * v,
    ),
    (
        QuadForm(((4, 0, 2, 1), (0, 4, 1, -2), (2, 1, 4, 0), (1, -2, 0, 4))),
        lambda x, y, u, v: 2 * (x * x + y * y + u * u + v * v) + 2 * x * u + x * v + y * u - 2 * y * v,
    ),
]


@pytest.mark.parametrize("form, poly", FORMS)
def test_theta_matches_box_enumeration(form, poly):
    T = 50
    # every form above has minimum eigenvalue > 1/4 of the identity, so radius 15 covers n < 50
    assert list(theta_series(form, T).coeffs) == theta_counts(poly, form.arity, T, 15)


def test_quadform_validation():
    with pytest.raises(DomainError):
        QuadForm.binary(1, 3, 1)
    with pytest.raises(ValueError):
        QuadForm(((1, 0), (0, 2)))


def test_halved_difference_reports_index():
    a = QSeries((1, 3, 2))
    b = QSeries((1, 0, 0))
    with pytest.raises(ArithmeticError, match="coefficient 1"):
        halved_difference(a, b, 2)


def test_rational_gf():
    gf = expand_rational_gf([0, 1, -1, -1, 1], [1, 0, 0, 0, 0, -1], 10)
    assert list(gf.coeffs) == [0, 1, -1, -1, 1, 0, 1, -1, -1, 1]


@pytest.mark.parametrize(
    "spec, w, level, chi",
    [("1^2 11^2", 2, 11, None), ("4^2 8^2", 2, 32, None), ("6^4", 2, 36, None), ("1^24", 12, 1, None), ("1^1 23^1", 1, 23, 23)],
)
def test_hecke_relations(spec, w, level, chi):
    c = eta_product(spec, 600)
    character = quadratic_character(chi) if chi else None
    assert check_hecke(c, w, level, character=character).passed


def test_weight1_recursion_needs_character():
    c = eta_product("1^1 23^1", 600)
    assert not check_hecke(c, 1, 23).passed


def test_hecke_detects_corruption():
    c = list(eta_product("1^2 11^2", 200).coeffs)
    c[6] += 1
    report = check_hecke(QSeries(tuple(c)), 2, 11)
    assert not report.passed and any(k == "2*3" for k, _, _ in report.violations)


def test_evaluate_needs_enough_terms():
    c = eta_product("1^2 11^2", 20)
    with pytest.raises(PrecisionError):
        evaluate_at_tau(c, 0.01j)
    assert required_truncation(1j, 1) > 0


def test_modularity_level_11_and_23():
    r2 = check_modularity(lambda T: eta_product("1^2 11^2", T), 11, 2)
    assert r2.passed and r2.summary["max_rel_error"] < 1e-8
    r1 = check_modularity(lambda T: eta_product("1^1 23^1", T), 23, 1, character=quadratic_character(23))
    assert r1.passed
    # d = 5 is a nonresidue mod 23, so the character matters here
    g = [(14, 3, 23, 5)]
    taus = [0.1 + 0.05j]
    chi = quadratic_character(23)
    assert check_modularity(lambda T: eta_product("1^1 23^1", T), 23, 1, chi, g, taus).passed
    assert not check_modularity(lambda T: eta_product("1^1 23^1", T), 23, 1, None, g, taus).passed


def test_modularity_rejects_bad_matrix():
    with pytest.raises(DomainError):
        check_modularity(eta_product("1^2 11^2", 100), 11, 2, matrices=[(1, 0, 5, 1)])


def test_to_csv():
    assert QSeries((0, 1, -1)).to_csv() == "0,0\n1,1\n2,-1\n"


def test_eta12_signed_theta_parity():
    from reciprocity.qseries import SignedThetaRule, signed_theta

    form = QuadForm.binary(1, 0, 1)
    target = eta_product("12^2", 400)
    odd = SignedThetaRule(form, (((1, 0), 3, 1), ((0, 1), 3, 0), ((1, 1), 2, 1)), sign=(0, 1))
    even = SignedThetaRule(form, (((1, 0), 3, 1), ((0, 1), 3, 0), ((1, 1), 2, 0)), sign=(0, 1))
    assert signed_theta(odd, 400) == target
    # with x + y even, x^2 + y^2 is even and the series picks up a q^4 term
    literal = signed_theta(even, 400)
    assert literal != target and literal[4] != 0
