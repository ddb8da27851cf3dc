"""Exact integer combinatorics, colex edge ranking and hypergraph construction.

Vertices are 0-based labels. Every edge is a strictly increasing tuple and
every enumeration in the package follows colexicographic order, which does
not change when ``n`` grows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import InvalidHypergraph

REdge = tuple[int, ...]
EdgeId = int


def binomial(n: int, r: int) -> int:
    """C(n, r) with arbitrary precision; 0 when r > n."""
    if n < 0 or r < 0:
        raise InvalidHypergraph(f"binomial needs non-negative arguments, got ({n}, {r})")
    return math.comb(n, r)


def edge_mask(e: Iterable[int]) -> int:
    mask = 0
    for v in e:
        mask |= 1 << v
    return mask


def check_edge(e: Sequence[int], n: int, r: int) -> REdge:
    """Return ``e`` as a tuple after validating it for the host (n, r)."""
    e = tuple(int(v) for v in e)
    if len(e) != r:
        raise InvalidHypergraph(f"edge {list(e)} has size {len(e)}, expected {r}")
    if any(a >= b for a, b in zip(e, e[1:])):
        raise InvalidHypergraph(f"edge {list(e)} is not strictly ascending")
    if e and (e[0] < 0 or e[-1] >= n):
        raise InvalidHypergraph(f"edge {list(e)} has a label outside [0, {n})")
    return e


def colex_key(e: REdge) -> tuple[int, ...]:
    return tuple(reversed(e))


def rank_edge(e: Sequence[int], n: int) -> EdgeId:
    """Colexicographic rank of ``e`` among the len(e)-subsets of [0, n)."""
    e = check_edge(e, n, len(e))
    return sum(math.comb(v, j + 1) for j, v in enumerate(e))


def unrank_edge(rank: EdgeId, n: int, r: int) -> REdge:
    """Inverse of :func:`rank_edge`."""
    total = math.comb(n, r)
    if not 0 <= rank < total:
        raise InvalidHypergraph(f"rank {rank} outside [0, C({n},{r})={total})")
    out = [0] * r
    top = n
    while r > 0:
        top -= 1
        offset = math.comb(top, r)
        if rank >= offset:
            rank -= offset
            r -= 1
            out[r] = top
    return tuple(out)


class PatternKind(str, Enum):
    TWO_EDGE = "two-edge"
    K_MATCHING = "k-matching"
    COMMON_I = "common-i"


@dataclass(frozen=True)
class PatternH:
    """The target subhypergraph H.

    ``TWO_EDGE``: two edges meeting in exactly ``k`` vertices.
    ``K_MATCHING``: ``k`` pairwise disjoint edges.
    ``COMMON_I``: ``k`` edges whose pairwise intersections are one common
    ``i``-set.
    """

    kind: PatternKind
    r: int
    k: int
    i: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", PatternKind(self.kind))
        if self.r < 1:
            raise InvalidHypergraph(f"pattern uniformity must be >= 1, got {self.r}")
        if self.kind is PatternKind.TWO_EDGE:
            if not 0 <= self.k <= self.r - 1:
                raise InvalidHypergraph(f"two-edge pattern needs 0 <= k <= r-1, got k={self.k}")
        elif self.kind is PatternKind.K_MATCHING:
            if self.k < 1:
                raise InvalidHypergraph(f"k-matching pattern needs k >= 1, got k={self.k}")
        else:
            if self.k < 1 or self.i is None or not 0 <= self.i <= self.r - 1:
                raise InvalidHypergraph(
                    f"common-i pattern needs k >= 1 and 0 <= i <= r-1, got k={self.k}, i={self.i}"
                )

    @classmethod
    def two_edge(cls, r: int, k: int) -> PatternH:
        return cls(PatternKind.TWO_EDGE, r, k)

    @classmethod
    def independent(cls, r: int, k: int) -> PatternH:
        return cls(PatternKind.K_MATCHING, r, k)

    @classmethod
    def common(cls, r: int, k: int, i: int) -> PatternH:
        return cls(PatternKind.COMMON_I, r, k, i)

    @property
    def edge_count(self) -> int:
        """e(H)."""
        return 2 if self.kind is PatternKind.TWO_EDGE else self.k

    @property
    def core_size(self) -> int:
        """Size every pairwise intersection of a copy must have."""
        if self.kind is PatternKind.TWO_EDGE:
            return self.k
        if self.kind is PatternKind.K_MATCHING:
            return 0
        return self.i

    @property
    def vertex_span(self) -> int:
        if self.kind is PatternKind.TWO_EDGE:
            return 2 * self.r - self.k
        c = self.core_size
        return c + self.edge_count * (self.r - c)

    def label(self) -> str:
        if self.kind is PatternKind.COMMON_I:
            return f"{self.kind.value}(k={self.k},i={self.i})"
        return f"{self.kind.value}(k={self.k})"


@dataclass(frozen=True)
class Hypergraph:
    n: int
    r: int
    edges: frozenset[REdge] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0 or self.r < 0:
            raise InvalidHypergraph(f"bad host parameters n={self.n}, r={self.r}")
        checked = [check_edge(e, self.n, self.r) for e in self.edges]
        uniq = frozenset(checked)
        if len(uniq) != len(checked):
            raise InvalidHypergraph("duplicate edges")
        object.__setattr__(self, "edges", uniq)

    @property
    def e(self) -> int:
        return len(self.edges)

    @cached_property
    def _sorted(self) -> tuple[REdge, ...]:
        return tuple(sorted(self.edges, key=colex_key))

    def sorted_edges(self) -> tuple[REdge, ...]:
        """Edges in colex order (equivalently, ascending EdgeId)."""
        return self._sorted

    def edge_ids(self) -> tuple[EdgeId, ...]:
        return tuple(rank_edge(e, self.n) for e in self._sorted)

    def contains(self, e: Sequence[int]) -> bool:
        return tuple(e) in self.edges

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def min_degree(self) -> int:
        if self.n == 0:
            return 0
        counts = [0] * self.n
        for e in self.edges:
            for v in e:
                counts[v] += 1
        return min(counts)

    def without(self, removed: Iterable[Sequence[int]]) -> Hypergraph:
        gone = {tuple(e) for e in removed}
        return Hypergraph(self.n, self.r, self.edges - gone)

    def relabel(self, perm: Sequence[int]) -> Hypergraph:
        """Image under the vertex bijection ``v -> perm[v]``."""
        return Hypergraph(self.n, self.r, frozenset(tuple(sorted(perm[v] for v in e)) for e in self.edges))


def all_edges(n: int, r: int) -> Iterator[REdge]:
    """All r-subsets of [0, n) in colex order."""
    for rank in range(math.comb(n, r)):
        yield unrank_edge(rank, n, r)


def complete_hypergraph(n: int, r: int) -> Hypergraph:
    if r < 1 or n < r:
        raise InvalidHypergraph(f"complete hypergraph needs n >= r >= 1, got n={n}, r={r}")
    return Hypergraph(n, r, frozenset(combinations(range(n), r)))


def complete_minus(n: int, r: int, j: int) -> Hypergraph:
    """K_n^r without its ``j`` colex-largest edges."""
    total = binomial(n, r)
    if not 0 <= j <= total:
        raise InvalidHypergraph(f"cannot delete {j} edges from C({n},{r})={total}")
    full = complete_hypergraph(n, r)
    return full.without(unrank_edge(rank, n, r) for rank in range(total - j, total))


def ell_value(n: int, r: int, k: int) -> int:
    """The unique l in [0, k-1] with C(n,r) - l = k-1 (mod k)."""
    if k <= 0:
        raise InvalidHypergraph(f"k must be positive, got {k}")
    return (binomial(n, r) - (k - 1)) % k


def extremal_candidate(n: int, r: int, k: int) -> Hypergraph:
    """Canonical member of the family K_n^r - le: the l colex-largest edges go."""
    if k < 1:
        raise InvalidHypergraph(f"k must be positive, got {k}")
    return complete_minus(n, r, ell_value(n, r, k))


def extremal_candidate_with(n: int, r: int, k: int, deleted: Iterable[Sequence[int]]) -> Hypergraph:
    """Member of the family K_n^r - le with an explicit deletion set."""
    gone = {check_edge(e, n, r) for e in deleted}
    ell = ell_value(n, r, k)
    if len(gone) != ell:
        raise InvalidHypergraph(f"family member needs exactly {ell} deleted edges, got {len(gone)}")
    return complete_hypergraph(n, r).without(gone)


def _pair_ok(pattern: PatternH, a: int, b: int) -> bool:
    return (a & b).bit_count() == pattern.core_size


def is_copy_of(pattern: PatternH, edges: Iterable[Sequence[int]]) -> bool:
    """True iff ``edges`` realizes ``pattern`` (see :class:`PatternH`)."""
    edges = [tuple(e) for e in edges]
    if len(set(edges)) != len(edges) or len(edges) != pattern.edge_count:
        return False
    if any(len(e) != pattern.r or len(set(e)) != pattern.r for e in edges):
        return False
    masks = [edge_mask(e) for e in edges]
    if not all(_pair_ok(pattern, a, b) for a, b in combinations(masks, 2)):
        return False
    if pattern.kind is PatternKind.COMMON_I and len(masks) >= 2:
        core = masks[0] & masks[1]
        return all(a & b == core for a, b in combinations(masks, 2))
    return True


def copy_positions(edges: Sequence[REdge], pattern: PatternH) -> list[tuple[int, ...]]:
    """All copies of ``pattern`` among ``edges``, as ascending index tuples."""
    masks = [edge_mask(e) for e in edges]
    m, size = len(masks), pattern.edge_count
    if size == 1:
        return [(p,) for p in range(m)]
    nbrs = [
        frozenset(j for j in range(p + 1, m) if _pair_ok(pattern, masks[p], masks[j]))
        for p in range(m)
    ]
    common = pattern.kind is PatternKind.COMMON_I
    out: list[tuple[int, ...]] = []

    def extend(chosen: list[int], cand: frozenset[int], core: int | None):
        if len(chosen) == size:
            out.append(tuple(chosen))
            return
        for j in sorted(cand):
            if common and core is not None and any(masks[j] & masks[c] != core for c in chosen):
                continue
            nxt_core = masks[chosen[0]] & masks[j] if common and core is None else core
            chosen.append(j)
            extend(chosen, cand & nbrs[j], nxt_core)
            chosen.pop()

    for p in range(m):
        extend([p], nbrs[p], None)
    return out


def enumerate_copies(G: Hypergraph, pattern: PatternH) -> list[tuple[REdge, ...]]:
    if pattern.r != G.r:
        raise InvalidHypergraph(f"pattern uniformity {pattern.r} != host uniformity {G.r}")
    edges = G.sorted_edges()
    return [tuple(edges[p] for p in c) for c in copy_positions(edges, pattern)]
