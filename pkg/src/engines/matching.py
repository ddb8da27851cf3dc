"""Exact maximum-cardinality matching in general graphs (Edmonds' blossoms).

Vertices and neighbours are scanned in ascending order and a greedy pass
seeds the matching, so identical graphs always give identical matchings.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import structlog
from prometheus_client import Counter

from ..core.errors import BudgetExceeded, TheoryViolation
from ..graphs.intersection import IntersectionGraph
from .budget import OutOfBudget, SearchBudget, SearchClock

log = structlog.get_logger()
augment_counter = Counter("matching_augmentations", "augmenting paths applied")


@dataclass(frozen=True)
class Matching:
    pairs: frozenset[tuple[int, int]]
    exposed: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.pairs)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)

    @classmethod
    def from_mates(cls, mate: list[int]) -> Matching:
        pairs = frozenset((v, w) for v, w in enumerate(mate) if w > v)
        exposed = frozenset(v for v, w in enumerate(mate) if w == -1)
        return cls(pairs, exposed)


def validate_matching(g: IntersectionGraph, m: Matching) -> bool:
    seen: set[int] = set()
    for u, v in m.pairs:
        if u >= v or not g.adjacent(u, v) or u in seen or v in seen:
            return False
        seen.update((u, v))
    return m.exposed == frozenset(range(g.vertex_count)) - seen


class _Edmonds:
    def __init__(self, adjacency: tuple[tuple[int, ...], ...], clock: SearchClock):
        self.adj = adjacency
        self.n = len(adjacency)
        self.mate = [-1] * self.n
        self.clock = clock

    def greedy(self) -> None:
        mate = self.mate
        for v in range(self.n):
            self.clock.tick()
            if mate[v] != -1:
                continue
            for w in self.adj[v]:
                if mate[w] == -1:
                    mate[v], mate[w] = w, v
                    break

    def _lca(self, a: int, b: int) -> int:
        seen = [False] * self.n
        while True:
            a = self.base[a]
            seen[a] = True
            if self.mate[a] == -1:
                break
            a = self.parent[self.mate[a]]
        while True:
            b = self.base[b]
            if seen[b]:
                return b
            b = self.parent[self.mate[b]]

    def _mark_path(self, v: int, b: int, child: int) -> None:
        while self.base[v] != b:
            self.in_blossom[self.base[v]] = True
            self.in_blossom[self.base[self.mate[v]]] = True
            self.parent[v] = child
            child = self.mate[v]
            v = self.parent[self.mate[v]]

    def find_path(self, root: int) -> int:
        """BFS for an augmenting path from ``root``; returns its exposed end or -1."""
        n, mate = self.n, self.mate
        self.used = used = [False] * n
        self.parent = parent = [-1] * n
        self.base = base = list(range(n))
        used[root] = True
        queue = deque([root])
        while queue:
            self.clock.tick()
            v = queue.popleft()
            for to in self.adj[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                    cur = self._lca(v, to)
                    self.in_blossom = [False] * n
                    self._mark_path(v, cur, to)
                    self._mark_path(to, cur, v)
                    for i in range(n):
                        if self.in_blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if mate[to] == -1:
                        return to
                    used[mate[to]] = True
                    queue.append(mate[to])
        return -1

    def augment(self, end: int) -> None:
        v = end
        while v != -1:
            pv = self.parent[v]
            nxt = self.mate[pv]
            self.mate[v], self.mate[pv] = pv, v
            v = nxt
        augment_counter.inc()

    def run(self) -> list[int]:
        self.greedy()
        for v in range(self.n):
            if self.mate[v] == -1:
                end = self.find_path(v)
                if end != -1:
                    self.augment(end)
        return self.mate


def max_matching(g: IntersectionGraph, budget: SearchBudget | None = None) -> Matching:
    """Maximum-cardinality matching of ``g``; exact whenever it returns."""
    clock = SearchClock(budget, "matching")
    engine = _Edmonds(g.adjacency, clock)
    try:
        mate = engine.run()
    except OutOfBudget as e:
        log.warning("MATCHING_BUDGET", vertices=g.vertex_count, nodes=clock.nodes)
        raise BudgetExceeded(str(e), best=Matching.from_mates(engine.mate)) from e
    finally:
        clock.flush()
    return Matching.from_mates(mate)


def near_perfect_matching(g: IntersectionGraph, budget: SearchBudget | None = None) -> Matching:
    """A matching missing at most one vertex of a connected vertex-transitive graph."""
    m = max_matching(g, budget)
    if len(m.exposed) > 1:
        log.error("NEAR_PERFECT_FAILED", kind=g.kind, exposed=len(m.exposed))
        raise TheoryViolation(
            f"{g.kind}: maximum matching leaves {len(m.exposed)} vertices exposed"
        )
    return m
