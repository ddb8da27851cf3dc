"""Generalized Johnson graphs J(n,r,k) and disjointness graphs L_G.

Graph vertices are positions ``0..N-1``; position ``p`` stands for the edge
``labels[p]`` whose colex rank is ``ids[p]``. Positions follow ascending
EdgeId, so for complete hosts position and EdgeId coincide.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Sequence

import networkx as nx
import structlog
from pydantic import BaseModel, ConfigDict, ValidationError

from ..core.combinatorics import (
    EdgeId,
    Hypergraph,
    REdge,
    all_edges,
    binomial,
    check_edge,
    edge_mask,
    rank_edge,
)
from ..core.errors import ConstructionOutOfRange, InvalidHypergraph, TheoryViolation

log = structlog.get_logger()


@dataclass(frozen=True)
class IntersectionGraph:
    adjacency: tuple[tuple[int, ...], ...]
    ids: tuple[EdgeId, ...]
    labels: tuple[REdge, ...]
    kind: str

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def min_degree(self) -> int:
        return min((len(a) for a in self.adjacency), default=0)

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nb in enumerate(self.adjacency) for v in nb if u < v]

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @cached_property
    def _position(self) -> dict[EdgeId, int]:
        return {eid: p for p, eid in enumerate(self.ids)}

    def position_of(self, eid: EdgeId) -> int:
        return self._position[eid]

    def label_of(self, eid: EdgeId) -> REdge:
        return self.labels[self._position[eid]]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self.neighbor_sets[u]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.vertex_count))
        g.add_edges_from(self.edges())
        return g


def johnson_general(n: int, r: int, k: int) -> IntersectionGraph:
    """J(n,r,k): all r-subsets of [0,n), adjacent iff they share exactly k vertices."""
    if not 0 <= k <= r <= n:
        raise InvalidHypergraph(f"J(n,r,k) needs 0 <= k <= r <= n, got ({n},{r},{k})")
    labels = tuple(all_edges(n, r))
    adjacency = []
    for e in labels:
        if k == r:
            adjacency.append(())
            continue
        rest = [v for v in range(n) if v not in e]
        nb = [
            rank_edge(tuple(sorted(keep + add)), n)
            for keep in combinations(e, k)
            for add in combinations(rest, r - k)
        ]
        adjacency.append(tuple(sorted(nb)))
    return IntersectionGraph(tuple(adjacency), tuple(range(len(labels))), labels, f"johnson({n},{r},{k})")


def intersection_graph(G: Hypergraph, k: int, kind: str | None = None) -> IntersectionGraph:
    """Graph on E(G) with e ~ f iff |e & f| = k; J(n,r,k) restricted to E(G)."""
    if not 0 <= k <= G.r:
        raise InvalidHypergraph(f"intersection size {k} outside [0, {G.r}]")
    labels = G.sorted_edges()
    masks = [edge_mask(e) for e in labels]
    adjacency: list[list[int]] = [[] for _ in labels]
    if k < G.r:
        for u, v in combinations(range(len(labels)), 2):
            if (masks[u] & masks[v]).bit_count() == k:
                adjacency[u].append(v)
                adjacency[v].append(u)
    return IntersectionGraph(
        tuple(tuple(a) for a in adjacency),
        G.edge_ids(),
        labels,
        kind or f"intersection(n={G.n},r={G.r},k={k})",
    )


def disjointness_graph(G: Hypergraph) -> IntersectionGraph:
    """L_G: vertex set E(G), adjacency = disjointness."""
    return intersection_graph(G, 0, kind="disjointness")


def is_connected(g: IntersectionGraph) -> bool:
    if g.vertex_count <= 1:
        return True
    return nx.is_connected(g.to_networkx())


def _bridge(e: REdge, f: REdge, n: int, r: int, k: int) -> REdge:
    """Middle vertex h of the walk e, h, f when |e & f| = r-1."""
    common = sorted(set(e) & set(f))
    used = set(e) | set(f)
    free = [v for v in range(n) if v not in used][: r - k]
    if len(free) < r - k:
        raise ConstructionOutOfRange(
            f"bridge needs {2 * r + 1 - k} labels, host has n={n}"
        )
    return tuple(sorted(common[:k] + free))


def connecting_walk(e: Sequence[int], f: Sequence[int], n: int, r: int, k: int) -> list[REdge]:
    """Walk from ``e`` to ``f`` in J(n,r,k) built by downward induction on |e & f|.

    Raises :class:`ConstructionOutOfRange` when the bridge at |e & f| = r-1
    would need a label >= n; :func:`find_walk` then falls back to BFS.
    """
    e, f = check_edge(e, n, r), check_edge(f, n, r)
    if e == f:
        return [e]
    if k >= r:
        raise InvalidHypergraph(f"J({n},{r},{r}) has no edges; cannot walk between distinct vertices")

    def walk(a: REdge, b: REdge) -> list[REdge]:
        shared = set(a) & set(b)
        i = len(shared)
        if i == r:
            return [a]
        if i == k:
            return [a, b]
        if i == r - 1:
            return [a, _bridge(a, b, n, r, k), b]
        only_a = sorted(set(a) - shared)
        only_b = sorted(set(b) - shared)
        h = tuple(sorted(list(shared) + only_a[:1] + only_b[: r - i - 1]))
        return walk(a, h) + walk(h, b)[1:]

    return walk(e, f)


def find_walk(e: Sequence[int], f: Sequence[int], n: int, r: int, k: int) -> list[REdge]:
    """:func:`connecting_walk`, or a BFS shortest path when the construction runs out of labels."""
    try:
        return connecting_walk(e, f, n, r, k)
    except ConstructionOutOfRange:
        log.info("WALK_FALLBACK_BFS", n=n, r=r, k=k)
    g = johnson_general(n, r, k)
    path = nx.shortest_path(g.to_networkx(), rank_edge(e, n), rank_edge(f, n))
    return [g.labels[p] for p in path]


def complement_isomorphism(n: int, r: int, k: int) -> dict[EdgeId, EdgeId]:
    """The map e -> [n] - e from J(n,r,k) onto J(n,n-r,n-2r+k), checked edge by edge."""
    k2 = n - 2 * r + k
    if not (0 <= k <= r <= n and k2 >= 0):
        raise InvalidHypergraph(f"complement isomorphism needs n >= r >= k and n-2r+k >= 0, got ({n},{r},{k})")
    src = johnson_general(n, r, k)
    dst = johnson_general(n, n - r, k2)
    everything = frozenset(range(n))
    mapping = {
        src.ids[p]: rank_edge(tuple(sorted(everything - set(e))), n) for p, e in enumerate(src.labels)
    }
    for p, nb in enumerate(src.adjacency):
        image = sorted(dst.position_of(mapping[src.ids[q]]) for q in nb)
        if tuple(image) != dst.adjacency[dst.position_of(mapping[src.ids[p]])]:
            raise TheoryViolation(f"complement map is not an isomorphism at {src.labels[p]}")
    return mapping


# ---------- export ----------

def to_dimacs(g: IntersectionGraph) -> str:
    """``p edge N M`` header, then ``e u v`` lines with 1-based vertices."""
    lines = [f"p edge {g.vertex_count} {g.edge_count()}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> tuple[int, list[tuple[int, int]]]:
    """Vertex count and 0-based edge list of a DIMACS edge file."""
    n = m = None
    edges: list[tuple[int, int]] = []
    for line in text.splitlines():
        tokens = line.split()
        if not tokens or tokens[0] == "c":
            continue
        if tokens[0] == "p":
            if len(tokens) != 4 or tokens[1].lower() != "edge":
                raise InvalidHypergraph(f"unknown problem line: {line!r}")
            n, m = int(tokens[2]), int(tokens[3])
        elif tokens[0] == "e":
            u, v = int(tokens[1]) - 1, int(tokens[2]) - 1
            edges.append((min(u, v), max(u, v)))
        else:
            raise InvalidHypergraph(f"unknown line format: {line!r}")
    if n is None or m != len(edges):
        raise InvalidHypergraph(f"header promises {m} edges, file has {len(edges)}")
    return n, edges


class GraphFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: str
    adjacency: list[list[int]]
    labels: dict[int, list[int]]


def to_json(g: IntersectionGraph) -> str:
    body = GraphFile(
        kind=g.kind,
        adjacency=[[g.ids[q] for q in nb] for nb in g.adjacency],
        labels={eid: list(e) for eid, e in zip(g.ids, g.labels)},
    )
    return body.model_dump_json()


def from_json(text: str) -> IntersectionGraph:
    try:
        body = GraphFile.model_validate_json(text)
    except ValidationError as e:
        raise InvalidHypergraph(f"malformed graph JSON: {e}") from e
    ids = tuple(sorted(body.labels))
    if len(ids) != len(body.adjacency):
        raise InvalidHypergraph("adjacency and label table disagree in size")
    pos = {eid: p for p, eid in enumerate(ids)}
    adjacency = tuple(tuple(sorted(pos[q] for q in nb)) for nb in body.adjacency)
    return IntersectionGraph(adjacency, ids, tuple(tuple(body.labels[i]) for i in ids), body.kind)


def expected_johnson_degree(n: int, r: int, k: int) -> int:
    """C(r,k) * C(n-r, r-k); zero for k = r since loops are excluded."""
    return 0 if k == r else binomial(r, k) * binomial(n - r, r - k)
