import pytest
from hypothesis import given, strategies as st

from targetset.graph import Digraph, gen_star
from targetset.thresholds import (
    STUDY_SCHEMES,
    ThresholdError,
    constant_thresholds,
    explicit_thresholds,
    parse_scheme,
    proportional_thresholds,
    random_thresholds,
)

from conftest import digraphs


def _in_star(k):
    """Node 0 receives arcs from k leaves; leaves have in-degree 0."""
    return Digraph.from_arcs(k + 1, [(i, 0) for i in range(1, k + 1)])


def test_random_degree_one_gives_one():
    g = Digraph.from_arcs(2, [(0, 1)])
    for seed in range(20):
        assert random_thresholds(g, seed)[1] == 1


def test_random_isolated_in_gets_one():
    g = Digraph.from_arcs(2, [(0, 1)])
    assert random_thresholds(g, 3)[0] == 1


def test_random_is_reproducible():
    g = gen_star(30)
    assert random_thresholds(g, 11) == random_thresholds(g, 11)
    assert any(random_thresholds(g, s) != random_thresholds(g, 11) for s in range(5))


@given(digraphs(max_nodes=10), st.integers(0, 2**32))
def test_random_within_range(g, seed):
    t = random_thresholds(g, seed)
    assert len(t) == g.n
    for v in range(g.n):
        assert 1 <= t[v] <= max(1, g.d_in(v))


@pytest.mark.parametrize("k, expected", [(10, 3), (2, 2), (0, 0)])
def test_constant_uses_min(k, expected):
    assert constant_thresholds(_in_star(k), 3)[0] == expected


def test_constant_rejects_zero():
    with pytest.raises(ThresholdError):
        constant_thresholds(gen_star(3), 0)


@pytest.mark.parametrize("alpha, k, expected", [(0.5, 4, 2), (0.5, 5, 3), (0.1, 0, 0), (0.3, 10, 3), (0.7, 10, 7), (0.1, 1, 1)])
def test_proportional_ceiling(alpha, k, expected):
    assert proportional_thresholds(_in_star(k), alpha)[0] == expected


@pytest.mark.parametrize("alpha", [0, 1, -0.2, 1.5])
def test_proportional_rejects_alpha(alpha):
    with pytest.raises(ThresholdError):
        proportional_thresholds(gen_star(3), alpha)


@given(digraphs(max_nodes=10), st.integers(1, 9), st.integers(1, 9))
def test_proportional_monotone_in_alpha(g, a, b):
    a, b = sorted((a, b))
    lo = proportional_thresholds(g, a / 10)
    hi = proportional_thresholds(g, b / 10)
    assert all(x <= y for x, y in zip(lo, hi))
    assert all((x == 0) == (g.d_in(v) == 0) for v, x in enumerate(lo))


def test_explicit():
    g = Digraph.from_arcs(3, [(0, 1), (1, 2)])
    assert tuple(explicit_thresholds([2, 1, 0], g)) == (2, 1, 0)
    with pytest.raises(ThresholdError):
        explicit_thresholds([-1], n=1)
    with pytest.raises(ThresholdError):
        explicit_thresholds([1, 1], g)


def test_parse_schemes():
    assert parse_scheme("random:7").param == "7"
    assert parse_scheme("const:3").name == "const:3"
    assert parse_scheme("majority").name == "prop:0.5"
    assert parse_scheme("file:/x/y").param == "/x/y"
    for bad in ["const:0", "prop:1", "prop:abc", "random:x", "weird:1", "file:"]:
        with pytest.raises(ThresholdError):
            parse_scheme(bad)


def test_file_scheme(tmp_path):
    g = Digraph.from_arcs(3, [(0, 1), (1, 2)])
    p = tmp_path / "t.txt"
    p.write_text("# thresholds\n1\n0\n2\n")
    assert tuple(parse_scheme(f"file:{p}").build(g)) == (1, 0, 2)
    p.write_text("1\n2\n")
    with pytest.raises(ThresholdError):
        parse_scheme(f"file:{p}").build(g)


def test_study_has_nineteen_settings():
    assert len(STUDY_SCHEMES) == 19
    assert sum(s.randomized for s in STUDY_SCHEMES) == 1
    assert [s.name for s in STUDY_SCHEMES][1:4] == ["const:2", "const:3", "const:4"]
