import numpy as np
import pytest

from src.bounds import (
    claim_degree_bound,
    degree_condition_inequality,
    degree_condition_sweep,
    frankl_bound,
    frankl_saturating_family,
    lower_bound_e,
    n_zero,
    ratio_inequality_check,
    ratio_sweep,
    residual_cap,
)
from src.core.combinatorics import PatternH, binomial, complete_hypergraph, complete_minus
from src.core.errors import InvalidHypergraph
from src.decomposition import phi
from src.engines.factors import hajnal_szemeredi_certificate
from src.engines.packing import matching_number
from src.graphs.intersection import disjointness_graph


def test_n_zero():
    assert n_zero(2, 2) == 11
    assert n_zero(3, 2) == 21
    for r in range(2, 7):
        assert n_zero(1, r) == r * (r - 1) + 2 * r - 1
    with pytest.raises(InvalidHypergraph):
        n_zero(2, 1)


def test_frankl_bound():
    assert frankl_bound(11, 2, 1) == (10, True)
    assert frankl_bound(21, 2, 2) == (39, True)
    assert frankl_bound(9, 4, 0).value == 0
    assert not frankl_bound(4, 2, 2).applies
    assert residual_cap(11, 2, 2) == frankl_bound(11, 2, 1)


@pytest.mark.parametrize("n,r,k", [(11, 2, 1), (9, 3, 2), (10, 2, 3)])
def test_saturating_family(n, r, k):
    F = frankl_saturating_family(n, r, k)
    assert F.e == frankl_bound(n, r, k).value
    assert matching_number(F) == k


def test_lower_bound_e():
    assert lower_bound_e(9, 3, 1) == binomial(9, 3)
    assert lower_bound_e(11, 2, 2) == 45
    assert lower_bound_e(21, 2, 3) == 132
    assert lower_bound_e(6, 3, 5) < 0


def test_degree_condition():
    assert degree_condition_inequality(11, 2, 2)
    assert all(degree_condition_inequality(n, 3, 1) for n in range(3, 30))
    for k in range(2, 7):
        for r in range(2, 7):
            assert degree_condition_inequality(n_zero(k, r), r, k)


def test_claim_degree_bound_holds_on_candidates():
    for j in range(4):
        G = complete_minus(11, 2, j)
        assert disjointness_graph(G).min_degree() >= claim_degree_bound(11, 2, G.e)


def test_ratio_inequality():
    assert ratio_inequality_check(11, 2, 0)
    assert ratio_inequality_check(11, 2, 2)
    assert ratio_inequality_check(6, 3, 3)
    with pytest.raises(InvalidHypergraph):
        ratio_inequality_check(5, 2, 4)
    with pytest.raises(InvalidHypergraph):
        ratio_inequality_check(3, 2, 2)


def test_sweeps_small():
    assert degree_condition_sweep(4, 4, 40) == []
    assert ratio_sweep(4, 40) == []


@pytest.mark.slow
def test_sweeps_full():
    assert degree_condition_sweep(6, 6, 1000) == []
    assert ratio_sweep(6, 200) == []


@pytest.mark.parametrize("n", [11, 12])
@pytest.mark.parametrize("seed", range(5))
def test_dense_subgraphs_split_into_t_plus_i(n, seed):
    rng = np.random.default_rng([seed, n])
    K = complete_hypergraph(n, 2)
    edges = K.sorted_edges()
    floor = lower_bound_e(n, 2, 2)
    for _ in range(6):
        drop = rng.choice(len(edges), size=int(rng.integers(0, K.e - floor + 1)), replace=False)
        G = K.without(edges[i] for i in drop)
        assert G.e >= floor
        L = disjointness_graph(G)
        assert hajnal_szemeredi_certificate(L, 2)
        assert L.min_degree() >= claim_degree_bound(n, 2, G.e)
        value, _ = phi(G, PatternH.independent(2, 2))
        assert value == G.e // 2 + G.e % 2
