import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.core.combinatorics import (
    Hypergraph,
    PatternH,
    all_edges,
    binomial,
    complete_hypergraph,
    complete_minus,
    ell_value,
    enumerate_copies,
    extremal_candidate,
    extremal_candidate_with,
    is_copy_of,
    rank_edge,
    unrank_edge,
)
from src.core.errors import InvalidHypergraph
from tests.property.settings import QUICK_SETTINGS, STANDARD_SETTINGS


def test_binomial():
    assert binomial(5, 2) == 10
    assert binomial(3, 5) == 0
    assert binomial(60, 30) == 118264581564861424
    with pytest.raises(InvalidHypergraph):
        binomial(-1, 2)


def test_colex_order_and_ranks():
    assert list(all_edges(4, 2)) == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]
    assert rank_edge((0, 1, 2), 5) == 0
    assert rank_edge((2, 3, 4), 5) == 9
    assert unrank_edge(3, 4, 2) == (0, 3)


def test_colex_rank_does_not_depend_on_n():
    assert rank_edge((1, 3), 4) == rank_edge((1, 3), 40)


@st.composite
def ranked(draw):
    n = draw(st.integers(min_value=1, max_value=14))
    r = draw(st.integers(min_value=1, max_value=n))
    rank = draw(st.integers(min_value=0, max_value=binomial(n, r) - 1))
    return n, r, rank


@given(ranked())
@STANDARD_SETTINGS
def test_unrank_inverts_rank(args):
    n, r, rank = args
    e = unrank_edge(rank, n, r)
    assert len(e) == r and list(e) == sorted(set(e)) and e[-1] < n
    assert rank_edge(e, n) == rank


def test_unrank_out_of_range():
    with pytest.raises(InvalidHypergraph):
        unrank_edge(10, 5, 2)


@pytest.mark.parametrize(
    "edges",
    [
        [(0, 1), (0, 1)],
        [(1, 0)],
        [(0, 4)],
        [(0, 1, 2)],
    ],
)
def test_hypergraph_rejects_bad_edges(edges):
    with pytest.raises(InvalidHypergraph):
        Hypergraph(4, 2, edges)


def test_hypergraph_accessors():
    K = complete_hypergraph(5, 3)
    assert K.e == 10
    assert K.min_degree() == 6
    assert K.degree(0) == 6
    assert K.contains((1, 2, 4))
    assert K.sorted_edges()[0] == (0, 1, 2)
    assert K.edge_ids() == tuple(range(10))
    assert K.without([(0, 1, 2)]).e == 9


def test_complete_hypergraph_needs_n_at_least_r():
    with pytest.raises(InvalidHypergraph):
        complete_hypergraph(2, 3)


def test_complete_minus_drops_colex_largest():
    G = complete_minus(5, 2, 2)
    assert G.e == 8
    assert not G.contains((2, 4)) and not G.contains((3, 4))
    assert G.contains((1, 4))


def test_ell_value_and_candidates():
    assert ell_value(11, 2, 2) == 0
    assert ell_value(12, 2, 2) == 1
    assert ell_value(21, 2, 3) == 1
    assert extremal_candidate(11, 2, 2).e == 55
    assert extremal_candidate(21, 2, 3).e == 209
    for n, r, k in [(7, 3, 4), (9, 2, 5), (8, 4, 3)]:
        assert (extremal_candidate(n, r, k).e - (k - 1)) % k == 0


def test_extremal_candidate_with_explicit_deletions():
    G = extremal_candidate_with(21, 2, 3, [(0, 1)])
    assert G.e == 209 and not G.contains((0, 1))
    with pytest.raises(InvalidHypergraph):
        extremal_candidate_with(21, 2, 3, [(0, 1), (0, 2)])


@pytest.mark.parametrize(
    "build",
    [
        lambda: PatternH.two_edge(3, 3),
        lambda: PatternH.independent(2, 0),
        lambda: PatternH.common(3, 2, 3),
        lambda: PatternH.common(3, 0, 1),
    ],
)
def test_pattern_ranges(build):
    with pytest.raises(InvalidHypergraph):
        build()


def test_pattern_shape():
    p = PatternH.two_edge(3, 1)
    assert (p.edge_count, p.core_size, p.vertex_span) == (2, 1, 5)
    q = PatternH.independent(2, 3)
    assert (q.edge_count, q.core_size, q.vertex_span) == (3, 0, 6)
    s = PatternH.common(3, 3, 1)
    assert (s.edge_count, s.core_size, s.vertex_span) == (3, 1, 7)
    assert s.label() == "common-i(k=3,i=1)"


def test_is_copy_of():
    assert is_copy_of(PatternH.two_edge(3, 1), [(0, 1, 2), (2, 3, 4)])
    assert not is_copy_of(PatternH.two_edge(3, 1), [(0, 1, 2), (1, 2, 3)])
    assert is_copy_of(PatternH.independent(2, 3), [(0, 1), (2, 3), (4, 5)])
    assert not is_copy_of(PatternH.independent(2, 3), [(0, 1), (2, 3)])
    assert is_copy_of(PatternH.common(3, 3, 1), [(0, 1, 2), (0, 3, 4), (0, 5, 6)])
    # pairwise intersections of size 1 that are not one common vertex
    assert not is_copy_of(PatternH.common(3, 3, 1), [(0, 1, 2), (0, 3, 4), (1, 3, 5)])


def test_enumerate_copies_counts():
    K4 = complete_hypergraph(4, 2)
    assert len(enumerate_copies(K4, PatternH.independent(2, 2))) == 3
    assert len(enumerate_copies(K4, PatternH.two_edge(2, 1))) == 12
    assert len(enumerate_copies(K4, PatternH.common(2, 3, 1))) == 4
    with pytest.raises(InvalidHypergraph):
        enumerate_copies(K4, PatternH.two_edge(3, 1))


SAMPLE = Hypergraph(6, 2, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 5), (2, 5), (1, 4)])


@given(st.permutations(range(6)))
@QUICK_SETTINGS
def test_copy_counts_survive_relabeling(perm):
    image = SAMPLE.relabel(perm)
    for pattern in (PatternH.two_edge(2, 1), PatternH.independent(2, 2), PatternH.independent(2, 3)):
        assert len(enumerate_copies(image, pattern)) == len(enumerate_copies(SAMPLE, pattern))
