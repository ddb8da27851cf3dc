"""K_k-factor search in simple graphs.

k = 2 is a maximum matching. For k >= 3 the search tries, in order:
construction through an equitable colouring of the complement when the
Hajnal-Szemeredi degree condition holds, greedy clique removal with swap
repair, and budgeted exact backtracking on a growing residue.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Sequence

import networkx as nx
import structlog

from ..core.errors import BudgetExceeded
from ..graphs.intersection import IntersectionGraph
from .budget import OutOfBudget, SearchBudget, SearchClock
from .matching import max_matching

log = structlog.get_logger()


class FactorStatus(str, Enum):
    FOUND = "found"
    CERTIFIED = "certified-exists-not-constructed"
    NOT_FOUND = "not-found-within-budget"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class FactorResult:
    cliques: tuple[tuple[int, ...], ...]
    status: FactorStatus
    k: int
    target: int

    @property
    def complete(self) -> bool:
        return self.status is FactorStatus.FOUND


def hajnal_szemeredi_certificate(g: IntersectionGraph, k: int) -> bool:
    """True iff k * delta(g) >= (k-1) * |V|; certifies a K_k-factor exists."""
    if k < 1:
        return False
    if g.vertex_count == 0:
        return True
    return k * g.min_degree() >= (k - 1) * g.vertex_count


def validate_factor(g: IntersectionGraph, result: FactorResult) -> bool:
    seen: set[int] = set()
    for clique in result.cliques:
        if len(clique) != result.k or seen.intersection(clique):
            return False
        if any(not g.adjacent(u, v) for u, v in combinations(clique, 2)):
            return False
        seen.update(clique)
    return result.status is not FactorStatus.FOUND or len(result.cliques) == result.target


def _find_clique(
    nbrs: Sequence[frozenset[int]], free: set[int], v: int, k: int, clock: SearchClock, order=None
) -> tuple[int, ...] | None:
    """A k-clique through ``v`` inside ``free``, or None."""
    cand = sorted(nbrs[v] & free, key=order) if order else sorted(nbrs[v] & free)

    def grow(chosen: list[int], pool: list[int]) -> tuple[int, ...] | None:
        if len(chosen) == k:
            return tuple(sorted(chosen))
        if len(chosen) + len(pool) < k:
            return None
        for idx, w in enumerate(pool):
            clock.tick()
            chosen.append(w)
            found = grow(chosen, [x for x in pool[idx + 1:] if x in nbrs[w]])
            if found:
                return found
            chosen.pop()
        return None

    return grow([v], cand)


def _greedy(g: IntersectionGraph, k: int, clock: SearchClock) -> list[tuple[int, ...]]:
    nbrs = g.neighbor_sets
    free = set(range(g.vertex_count))
    order = sorted(range(g.vertex_count), key=lambda v: (-g.degree(v), v))
    rank = {v: i for i, v in enumerate(order)}
    cliques = []
    for v in order:
        if v not in free:
            continue
        clique = _find_clique(nbrs, free - {v}, v, k, clock, order=rank.__getitem__)
        if clique:
            cliques.append(clique)
            free.difference_update(clique)
    return cliques


def _exact(
    nbrs: Sequence[frozenset[int]], pool: Sequence[int], k: int, target: int, clock: SearchClock
) -> list[tuple[int, ...]] | None:
    """``target`` disjoint k-cliques inside ``pool`` or None, by exhaustive backtracking."""
    pool = sorted(pool)
    slack = len(pool) - k * target
    if slack < 0:
        return None

    def rec(free: list[int], skipped: int, acc: list[tuple[int, ...]]):
        if len(acc) == target:
            return list(acc)
        if len(free) - k * (target - len(acc)) < 0:
            return None
        v, rest = free[0], free[1:]
        cand = [w for w in rest if w in nbrs[v]]
        for combo in combinations(cand, k - 1):
            clock.tick()
            if any(b not in nbrs[a] for a, b in combinations(combo, 2)):
                continue
            acc.append((v,) + combo)
            found = rec([w for w in rest if w not in combo], skipped, acc)
            if found:
                return found
            acc.pop()
        if skipped < slack:
            return rec(rest, skipped + 1, acc)
        return None

    return rec(pool, 0, [])


def _repair(
    nbrs: Sequence[frozenset[int]], cliques: list[tuple[int, ...]], free: set[int], k: int, clock: SearchClock
) -> bool:
    """Swap one clique against free vertices to gain a clique; True on progress."""
    for idx, clique in enumerate(cliques):
        pool = set(clique) | {w for w in free if any(w in nbrs[c] for c in clique)}
        if len(pool) < 2 * k:
            continue
        found = _exact(nbrs, sorted(pool), k, 2, clock)
        if found:
            cliques[idx:idx + 1] = found
            free.update(clique)
            for c in found:
                free.difference_update(c)
            return True
    return False


def _equitable(g: IntersectionGraph, k: int, target: int) -> list[tuple[int, ...]] | None:
    """K_k-factor from an equitable colouring of the complement graph."""
    kept = list(range(target * k))
    comp = nx.complement(g.to_networkx().subgraph(kept))
    try:
        colouring = nx.coloring.equitable_color(comp, target)
    except nx.NetworkXAlgorithmError as e:
        log.warning("EQUITABLE_COLOR_FAILED", err=str(e))
        return None
    classes: dict[int, list[int]] = {}
    for v, c in colouring.items():
        classes.setdefault(c, []).append(v)
    cliques = sorted(tuple(sorted(c)) for c in classes.values())
    if len(cliques) != target or any(len(c) != k for c in cliques):
        return None
    if any(not g.adjacent(u, v) for c in cliques for u, v in combinations(c, 2)):
        return None
    return cliques


def kk_factor(g: IntersectionGraph, k: int, budget: SearchBudget | None = None) -> FactorResult:
    """Search for floor(|V|/k) vertex-disjoint k-cliques in ``g``."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    n = g.vertex_count
    target = n // k
    if k == 1:
        return FactorResult(tuple((v,) for v in range(n)), FactorStatus.FOUND, k, target)
    if k == 2:
        try:
            m = max_matching(g, budget)
        except BudgetExceeded as e:
            return FactorResult(tuple(e.best.sorted_pairs()), FactorStatus.NOT_FOUND, k, target)
        status = FactorStatus.FOUND if m.size == target else FactorStatus.INFEASIBLE
        return FactorResult(tuple(m.sorted_pairs()), status, k, target)

    if target == 0:
        return FactorResult((), FactorStatus.FOUND, k, target)

    certified = hajnal_szemeredi_certificate(g, k)
    if certified:
        cliques = _equitable(g, k, target)
        if cliques is not None:
            log.info("FACTOR_EQUITABLE", vertices=n, k=k, cliques=len(cliques))
            return FactorResult(tuple(cliques), FactorStatus.FOUND, k, target)

    clock = SearchClock(budget, "factor")
    nbrs = g.neighbor_sets
    cliques: list[tuple[int, ...]] = []
    try:
        cliques = _greedy(g, k, clock)
        free = set(range(n)).difference(*map(set, cliques)) if cliques else set(range(n))
        while len(cliques) < target and _repair(nbrs, cliques, free, k, clock):
            pass
        released = 0
        while len(cliques) < target:
            released = min(len(cliques), max(released * 2, 3))
            kept = cliques[: len(cliques) - released]
            pool = set(range(n)).difference(*map(set, kept)) if kept else set(range(n))
            found = _exact(nbrs, sorted(pool), k, target - len(kept), clock)
            if found is not None:
                cliques = kept + found
                break
            if not kept:
                status = FactorStatus.CERTIFIED if certified else FactorStatus.INFEASIBLE
                return FactorResult(tuple(sorted(cliques)), status, k, target)
    except OutOfBudget:
        status = FactorStatus.CERTIFIED if certified else FactorStatus.NOT_FOUND
        log.warning("FACTOR_BUDGET", vertices=n, k=k, best=len(cliques), status=status.value)
        return FactorResult(tuple(sorted(cliques)), status, k, target)
    finally:
        clock.flush()
    return FactorResult(tuple(sorted(cliques)), FactorStatus.FOUND, k, target)
