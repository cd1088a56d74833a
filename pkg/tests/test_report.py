import math

import pytest

from reciprocity.report import Histogram, LawReport, semicircle_cdf


def test_passed_iff_no_violations():
    r = LawReport("x", (2, 10))
    assert r.passed
    r.fail(3, 1, 2)
    assert not r.passed


def test_json_round_trip_is_byte_identical():
    r = LawReport("x", (2, 10), checked=4, summary={"a": [1, 2], "b": {"c": 0.5}})
    r.fail(("theta", 7), 2, -1)
    text = r.to_json()
    assert LawReport.from_json(text).to_json() == text


def test_inconsistent_passed_flag():
    with pytest.raises(ValueError):
        LawReport.from_dict({"law_id": "x", "prime_range": [1, 2], "checked": 0, "violations": [], "passed": False})


def test_table_and_csv():
    r = LawReport("x", (2, 10), checked=1)
    r.fail(5, "a", "b")
    assert "FAIL" in r.to_table()
    assert r.to_csv().splitlines() == ["law_id,key,expected,got", "x,5,a,b"]


def test_semicircle_cdf():
    assert semicircle_cdf(-1) == 0 and semicircle_cdf(1) == pytest.approx(1)
    assert semicircle_cdf(0) == pytest.approx(0.5)
    # density (2/pi) sqrt(1 - x^2) by central difference
    h = 1e-6
    assert (semicircle_cdf(0.3 + h) - semicircle_cdf(0.3 - h)) / (2 * h) == pytest.approx(2 / math.pi * math.sqrt(0.91))


def test_histogram():
    h = Histogram.uniform([-1.0, -0.5, 0.0, 0.99, 1.0], bins=4)
    assert h.counts == (1, 1, 1, 2) and h.total == 5
    assert sum(h.expected()) == pytest.approx(5)
    lines = h.to_csv().splitlines()
    assert lines[0] == "bin_lo,bin_hi,count,expected" and len(lines) == 5
    with pytest.raises(ValueError):
        Histogram((0.0, 0.0), (1,), 1)
    with pytest.raises(ValueError):
        Histogram((0.0, 1.0), (1,), 2)
