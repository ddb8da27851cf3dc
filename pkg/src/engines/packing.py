"""Maximum edge-disjoint packing of H-copies, p_H(G), and the matching number.

Two-edge patterns reduce to a maximum matching in an intersection graph,
k independent edges to a K_k-factor of the disjointness graph. Anything the
fast routes cannot settle goes to a branch and bound over copies that
branches on the lowest-ranked undecided edge: cover it by a copy, or leave
it over.
"""
from __future__ import annotations

from dataclasses import dataclass

import structlog
from prometheus_client import Counter

from ..bounds import residual_cap
from ..core.codec import CertificateFile, edge_lists
from ..core.combinatorics import (
    Hypergraph,
    PatternH,
    PatternKind,
    REdge,
    copy_positions,
    edge_mask,
    enumerate_copies,
    is_copy_of,
)
from ..core.errors import BudgetExceeded, InvalidHypergraph
from ..graphs.intersection import disjointness_graph, intersection_graph
from .budget import OutOfBudget, SearchBudget, SearchClock
from .factors import FactorStatus, kk_factor
from .matching import max_matching

log = structlog.get_logger()
packing_counter = Counter("packing_searches", "packing searches by route and outcome", ["route", "outcome"])


@dataclass(frozen=True)
class PackingCertificate:
    """Edge-disjoint H-copies plus the leftover edges.

    ``certified_value`` is set when a K_k-factor is known to exist (degree
    condition) but was not constructed; the explicit copies are then only a
    lower bound.
    """

    copies: tuple[tuple[REdge, ...], ...]
    leftover: frozenset[REdge]
    optimal: bool
    certified_value: int | None = None

    @property
    def value(self) -> int:
        return len(self.copies)

    def to_json(self) -> str:
        body = CertificateFile(
            value=self.value,
            copies=[edge_lists(c) for c in self.copies],
            leftover=edge_lists(self.leftover),
            optimal=self.optimal,
        )
        return body.model_dump_json()


def _certificate(G: Hypergraph, copies, optimal: bool, certified_value: int | None = None) -> PackingCertificate:
    copies = tuple(sorted(tuple(c) for c in copies))
    covered = {e for c in copies for e in c}
    return PackingCertificate(copies, G.edges - covered, optimal, certified_value)


def validate_certificate(G: Hypergraph, pattern: PatternH, cert: PackingCertificate) -> bool:
    """Disjointness, pattern validity and partition of E(G); H-free leftover if optimal."""
    seen: set[REdge] = set()
    for c in cert.copies:
        if not is_copy_of(pattern, c) or seen.intersection(c) or not G.edges.issuperset(c):
            return False
        seen.update(c)
    if seen & cert.leftover or seen | cert.leftover != G.edges:
        return False
    if cert.optimal and cert.leftover:
        rest = Hypergraph(G.n, G.r, cert.leftover)
        return not enumerate_copies(rest, pattern)
    return True


def _matching_route(G: Hypergraph, pattern: PatternH, budget: SearchBudget | None) -> PackingCertificate:
    g = intersection_graph(G, pattern.core_size)
    try:
        m = max_matching(g, budget)
    except BudgetExceeded as e:
        best = _certificate(G, [(g.labels[u], g.labels[v]) for u, v in e.best.pairs], False)
        packing_counter.labels(route="matching", outcome="budget").inc()
        raise BudgetExceeded(str(e), best=best) from e
    packing_counter.labels(route="matching", outcome="optimal").inc()
    return _certificate(G, [(g.labels[u], g.labels[v]) for u, v in m.pairs], True)


class _BranchAndBound:
    def __init__(self, G: Hypergraph, pattern: PatternH, clock: SearchClock, seed: list[tuple[int, ...]]):
        self.edges = G.sorted_edges()
        self.m = len(self.edges)
        self.size = pattern.edge_count
        self.clock = clock
        self.by_min: list[list[tuple[int, int]]] = [[] for _ in range(self.m)]
        for c in copy_positions(self.edges, pattern):
            mask = 0
            for p in c:
                mask |= 1 << p
            self.by_min[c[0]].append((mask, c))
        self.cap = None
        if pattern.kind is PatternKind.K_MATCHING:
            cap = residual_cap(G.n, G.r, pattern.k)
            if cap.applies:
                self.cap = cap.value
        self.best = list(seed)
        self.chosen: list[tuple[int, ...]] = []

    def greedy(self) -> list[tuple[int, ...]]:
        used, out = 0, []
        for bucket in self.by_min:
            for mask, c in bucket:
                if mask & used == 0:
                    used |= mask
                    out.append(c)
                    break
        return out

    def run(self) -> None:
        greedy = self.greedy()
        if len(greedy) > len(self.best):
            self.best = greedy
        self._rec(0, 0, 0)

    def _rec(self, p: int, used: int, left: int) -> None:
        self.clock.tick()
        while p < self.m and used >> p & 1:
            p += 1
        if p == self.m:
            if len(self.chosen) > len(self.best):
                self.best = list(self.chosen)
            return
        undecided = self.m - p - (used >> p).bit_count()
        if len(self.chosen) + undecided // self.size <= len(self.best):
            return
        for mask, c in self.by_min[p]:
            if mask & used == 0:
                self.chosen.append(c)
                self._rec(p + 1, used | mask, left)
                self.chosen.pop()
        if self.cap is None or left < self.cap:
            self._rec(p + 1, used, left + 1)


def _branch_and_bound(
    G: Hypergraph, pattern: PatternH, budget: SearchBudget | None, seed_copies=()
) -> PackingCertificate:
    clock = SearchClock(budget, "packing")
    index = {e: p for p, e in enumerate(G.sorted_edges())}
    seed = [tuple(sorted(index[e] for e in c)) for c in seed_copies]
    bb = _BranchAndBound(G, pattern, clock, seed)
    as_edges = lambda found: [tuple(bb.edges[p] for p in c) for c in found]
    try:
        bb.run()
    except OutOfBudget as e:
        best = _certificate(G, as_edges(bb.best), False)
        log.warning("PACKING_BUDGET", edges=G.e, pattern=pattern.label(), best=best.value, nodes=clock.nodes)
        packing_counter.labels(route="branch-and-bound", outcome="budget").inc()
        raise BudgetExceeded(str(e), best=best) from e
    finally:
        clock.flush()
    packing_counter.labels(route="branch-and-bound", outcome="optimal").inc()
    return _certificate(G, as_edges(bb.best), True)


def max_edge_disjoint_copies(
    G: Hypergraph, pattern: PatternH, budget: SearchBudget | None = None
) -> PackingCertificate:
    """p_H(G) with an explicit packing; ``optimal`` is False only for certified values."""
    if pattern.r != G.r:
        raise InvalidHypergraph(f"pattern uniformity {pattern.r} != host uniformity {G.r}")
    if pattern.edge_count == 1:
        return _certificate(G, [(e,) for e in G.edges], True)
    if pattern.edge_count == 2:
        return _matching_route(G, pattern, budget)

    seed: list[tuple[REdge, ...]] = []
    if pattern.kind is PatternKind.K_MATCHING:
        L = disjointness_graph(G)
        factor = kk_factor(L, pattern.k, budget)
        found = [tuple(L.labels[v] for v in c) for c in factor.cliques]
        if factor.status is FactorStatus.FOUND:
            packing_counter.labels(route="factor", outcome="optimal").inc()
            return _certificate(G, found, True)
        if factor.status is FactorStatus.CERTIFIED:
            packing_counter.labels(route="factor", outcome="certified").inc()
            return _certificate(G, found, False, certified_value=factor.target)
        seed = found
    return _branch_and_bound(G, pattern, budget, seed)


def matching_number(G: Hypergraph) -> int:
    """nu(G) by branch and bound on the lowest-ranked edge: in or out."""
    masks = [edge_mask(e) for e in G.sorted_edges()]
    full = (1 << G.n) - 1
    r = max(G.r, 1)
    best = 0

    def rec(idx: int, used: int, count: int) -> None:
        nonlocal best
        if count > best:
            best = count
        if idx == len(masks):
            return
        if count + min(len(masks) - idx, (full & ~used).bit_count() // r) <= best:
            return
        e = masks[idx]
        if e & used == 0:
            rec(idx + 1, used | e, count + 1)
        rec(idx + 1, used, count)

    rec(0, 0, 0)
    return best


def residual_check(G: Hypergraph, cert: PackingCertificate, k: int) -> bool:
    """The leftover of an optimal k-independent-edges packing is H-free and within the Frankl cap."""
    rest = Hypergraph(G.n, G.r, cert.leftover)
    if matching_number(rest) > k - 1:
        return False
    cap = residual_cap(G.n, G.r, k)
    return not cap.applies or len(cert.leftover) <= cap.value

