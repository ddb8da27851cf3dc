from itertools import combinations

from src.core.combinatorics import complete_hypergraph
from src.engines.budget import SearchBudget, SearchClock
from src.engines.factors import FactorStatus, _repair, hajnal_szemeredi_certificate, kk_factor, validate_factor
from src.graphs.intersection import disjointness_graph, johnson_general
from tests.test_matching import make_graph


def complete_graph(n):
    return make_graph(n, combinations(range(n), 2))


def test_triangles_in_k9():
    g = complete_graph(9)
    result = kk_factor(g, 3)
    assert result.status is FactorStatus.FOUND
    assert len(result.cliques) == 3
    assert validate_factor(g, result)


def test_k2_is_matching():
    g = johnson_general(5, 3, 1)
    result = kk_factor(g, 2)
    assert result.complete and len(result.cliques) == 5
    assert validate_factor(g, result)

    L = disjointness_graph(complete_hypergraph(11, 2))
    result = kk_factor(L, 2)
    assert result.status is FactorStatus.FOUND and len(result.cliques) == 27


def test_certificate():
    for k in range(1, 6):
        assert hajnal_szemeredi_certificate(complete_graph(k), k)
    assert hajnal_szemeredi_certificate(disjointness_graph(complete_hypergraph(11, 2)), 2)
    assert not hajnal_szemeredi_certificate(johnson_general(5, 3, 1), 2)
    assert not hajnal_szemeredi_certificate(complete_graph(3), 0)


def test_repair_after_greedy_misstep():
    # greedy takes {1, 2, 3} first and strands 0
    g = make_graph(6, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5)])
    result = kk_factor(g, 3)
    assert result.status is FactorStatus.FOUND
    assert sorted(result.cliques) == [(0, 1, 2), (3, 4, 5)]
    assert validate_factor(g, result)


def test_triangle_free_is_infeasible():
    cycle = make_graph(6, [(v, (v + 1) % 6) for v in range(6)])
    assert kk_factor(cycle, 3).status is FactorStatus.INFEASIBLE


def test_budget_status():
    cycle = make_graph(6, [(v, (v + 1) % 6) for v in range(6)])
    result = kk_factor(cycle, 3, SearchBudget(max_nodes=1))
    assert result.status is FactorStatus.NOT_FOUND
    assert validate_factor(cycle, result)


def test_disjointness_factor_k6():
    L = disjointness_graph(complete_hypergraph(6, 2))
    result = kk_factor(L, 3)
    assert result.status is FactorStatus.FOUND and len(result.cliques) == 5
    assert validate_factor(L, result)


def test_degenerate_sizes():
    g = complete_graph(2)
    assert kk_factor(g, 1).cliques == ((0,), (1,))
    result = kk_factor(g, 3)
    assert result.status is FactorStatus.FOUND and result.cliques == () and result.target == 0


def test_validate_factor_rejects_non_clique():
    cycle = make_graph(6, [(v, (v + 1) % 6) for v in range(6)])
    bogus = kk_factor(complete_graph(6), 3)
    assert not validate_factor(cycle, bogus)


def test_repair_returns_swapped_vertices_to_the_pool():
    # (0, 1, 2) gives way to (0, 3, 4) and (1, 5, 6); vertex 2 is free again
    g = make_graph(7, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4), (1, 5), (1, 6), (5, 6)])
    cliques = [(0, 1, 2)]
    free = {3, 4, 5, 6}
    assert _repair(g.neighbor_sets, cliques, free, 3, SearchClock(None, "factor"))
    assert cliques == [(0, 3, 4), (1, 5, 6)]
    assert free == {2}
