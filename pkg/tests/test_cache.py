import logging

from reciprocity.cache import CoefficientCache


def test_miss_then_hit(tmp_path):
    cache = CoefficientCache(tmp_path)
    calls = []

    def compute():
        calls.append(1)
        return [0, 1, -1, 5]

    assert cache.get("eta", "1^2 11^2", 4, compute) == [0, 1, -1, 5]
    assert cache.get("eta", "1^2 11^2", 4, compute) == [0, 1, -1, 5]
    assert len(calls) == 1 and (cache.hits, cache.misses) == (1, 1)
    text = cache.path("eta", "1^2 11^2", 4).read_text()
    assert text.startswith("# recip-cache v1 kind=eta size=4 descriptor=1^2 11^2\n0,0\n1,1\n")


def test_corrupt_file_is_recomputed(tmp_path, caplog):
    cache = CoefficientCache(tmp_path)
    path = cache.path("theta", "d", 3)
    path.write_text("garbage\n1,2\n")
    with caplog.at_level(logging.WARNING):
        assert cache.get("theta", "d", 3, lambda: [7, 8, 9]) == [7, 8, 9]
    assert "unreadable" in caplog.text
    assert cache.get("theta", "d", 3, lambda: [0, 0, 0]) == [7, 8, 9]


def test_verify_mode_replaces_tampered_entry(tmp_path):
    CoefficientCache(tmp_path).get("trace", "E", 2, lambda: [1, 2])
    path = CoefficientCache(tmp_path).path("trace", "E", 2)
    header = path.read_text().splitlines()[0]
    path.write_text(f"{header}\n0,5\n1,6\n")  # every row wrong, so any 1% sample catches it
    checker = CoefficientCache(tmp_path, verify=True, seed=3)
    assert checker.get("trace", "E", 2, lambda: [1, 2]) == [1, 2]
    assert CoefficientCache(tmp_path).get("trace", "E", 2, lambda: [9, 9]) == [1, 2]


def test_unknown_kind(tmp_path):
    import pytest

    with pytest.raises(ValueError):
        CoefficientCache(tmp_path).get("other", "x", 1, lambda: [0])
