"""H-decompositions: phi_H(G) with explicit parts, closed forms and an oracle."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Union

import structlog
from pydantic import ValidationError

from .bounds import n_zero
from .core.codec import CopyPart, DecompositionFile, SinglePart, edge_lists
from .core.combinatorics import (
    Hypergraph,
    PatternH,
    REdge,
    all_edges,
    binomial,
    colex_key,
    complete_minus,
    copy_positions,
    is_copy_of,
)
from .core.errors import BudgetExceeded, InvalidHypergraph
from .engines.budget import SearchBudget
from .engines.matching import near_perfect_matching
from .engines.packing import PackingCertificate, max_edge_disjoint_copies
from .graphs.intersection import johnson_general
from .utils import ceil_div

log = structlog.get_logger()

ORACLE_MAX_EDGES = 24
EXHAUSTIVE_MAX_EDGES = 20


class Provenance(str, Enum):
    CONSTRUCTIVE = "constructive"
    FORMULA = "formula"
    ORACLE = "oracle"


@dataclass(frozen=True)
class Single:
    edge: REdge


@dataclass(frozen=True)
class Copy:
    edges: tuple[REdge, ...]


Part = Union[Single, Copy]


@dataclass(frozen=True)
class Decomposition:
    """Parts covering E(G), each a single edge or a copy of H.

    ``optimal`` is False for upper bounds (budget exhausted, or a factor that
    is certified to exist but was not built).
    """

    parts: tuple[Part, ...]
    source: Provenance
    optimal: bool = True

    @property
    def size(self) -> int:
        return len(self.parts)

    @property
    def copy_count(self) -> int:
        return sum(1 for p in self.parts if isinstance(p, Copy))

    @property
    def singles(self) -> list[REdge]:
        return [p.edge for p in self.parts if isinstance(p, Single)]

    def to_json(self, phi: int | None = None) -> str:
        parts = [
            CopyPart(edges=edge_lists(p.edges)) if isinstance(p, Copy) else SinglePart(edge=list(p.edge))
            for p in self.parts
        ]
        body = DecompositionFile(phi=self.size if phi is None else phi, source=self.source.value, parts=parts)
        return body.model_dump_json()

    @classmethod
    def from_json(cls, text: str) -> tuple[int, Decomposition]:
        try:
            body = DecompositionFile.model_validate_json(text)
        except ValidationError as e:
            raise InvalidHypergraph(f"malformed decomposition JSON: {e}") from e
        parts = tuple(
            Copy(tuple(tuple(e) for e in p.edges)) if isinstance(p, CopyPart) else Single(tuple(p.edge))
            for p in body.parts
        )
        return body.phi, cls(parts, Provenance(body.source))


def _assemble(copies: Iterable[Iterable[REdge]], leftover: Iterable[REdge], source: Provenance, optimal: bool) -> Decomposition:
    parts: list[Part] = []
    for c in copies:
        c = sorted(c, key=colex_key)
        parts.append(Copy(tuple(c)) if len(c) > 1 else Single(c[0]))
    parts.extend(Single(e) for e in sorted(leftover, key=colex_key))
    return Decomposition(tuple(parts), source, optimal)


def validate_decomposition(G: Hypergraph, pattern: PatternH, d: Decomposition) -> bool:
    """Exact partition of E(G) into singles and H-copies."""
    seen: list[REdge] = []
    for p in d.parts:
        if isinstance(p, Copy):
            if not is_copy_of(pattern, p.edges):
                return False
            seen.extend(p.edges)
        else:
            seen.append(p.edge)
    if len(seen) != len(set(seen)) or set(seen) != G.edges:
        return False
    return d.size == G.e - (pattern.edge_count - 1) * d.copy_count


def from_certificate(G: Hypergraph, pattern: PatternH, cert: PackingCertificate) -> tuple[int, Decomposition]:
    """phi = e(G) - (e(H) - 1) * p, with the decomposition the certificate realizes."""
    if cert.certified_value is not None:
        d = _assemble(cert.copies, cert.leftover, Provenance.FORMULA, optimal=False)
        return G.e - (pattern.edge_count - 1) * cert.certified_value, d
    d = _assemble(cert.copies, cert.leftover, Provenance.CONSTRUCTIVE, cert.optimal)
    return d.size, d


def phi(
    G: Hypergraph, pattern: PatternH, budget: SearchBudget | None = None, constructed_only: bool = False
) -> tuple[int, Decomposition]:
    """phi_H(G) through an optimal packing.

    With ``constructed_only`` a value that rests on a certificate rather
    than on constructed copies is refused with :class:`BudgetExceeded`.
    """
    try:
        cert = max_edge_disjoint_copies(G, pattern, budget)
    except BudgetExceeded as e:
        upper = _assemble(e.best.copies, e.best.leftover, Provenance.CONSTRUCTIVE, optimal=False)
        log.warning("PHI_BUDGET", edges=G.e, pattern=pattern.label(), upper=upper.size)
        raise BudgetExceeded(str(e), best=e.best, decomposition=upper) from e
    value, d = from_certificate(G, pattern, cert)
    if constructed_only and d.source is Provenance.FORMULA:
        raise BudgetExceeded(
            f"{pattern.label()}: factor certified but not constructed", best=cert, decomposition=d
        )
    log.debug("PHI_DONE", edges=G.e, pattern=pattern.label(), phi=value, source=d.source.value)
    return value, d


def phi_two_edge_constructive(n: int, r: int, k: int) -> tuple[int, Decomposition]:
    """ceil(C(n,r)/2) parts from a near-perfect matching of J(n,r,k)."""
    if not 0 <= k <= r - 1 or n < 2 * r - k:
        raise InvalidHypergraph(f"constructive two-edge route needs 0 <= k < r and n >= 2r-k, got n={n}, r={r}, k={k}")
    g = johnson_general(n, r, k)
    m = near_perfect_matching(g)
    copies = [(g.labels[u], g.labels[v]) for u, v in m.sorted_pairs()]
    leftover = [g.labels[v] for v in sorted(m.exposed)]
    d = _assemble(copies, leftover, Provenance.CONSTRUCTIVE, optimal=True)
    return d.size, d


def phi_matching_formula(n: int, r: int, k: int) -> int:
    """floor(C(n,r)/k) + k - 1 if C(n,r) = k-1 (mod k), else + k - 2."""
    if k < 1:
        raise InvalidHypergraph(f"k must be positive, got {k}")
    if r >= 2 and n < n_zero(k, r):
        log.warning("FORMULA_BELOW_N0", n=n, r=r, k=k, n0=n_zero(k, r))
    return two_branch_value(binomial(n, r), k)


def two_branch_value(total: int, k: int) -> int:
    if total % k == (k - 1) % k:
        return total // k + k - 1
    return total // k + k - 2


def oracle_phi(G: Hypergraph, pattern: PatternH) -> tuple[int, Decomposition]:
    """Minimum partition by dynamic programming over edge subsets.

    Shares nothing with the packing search except copy enumeration.
    """
    if pattern.r != G.r:
        raise InvalidHypergraph(f"pattern uniformity {pattern.r} != host uniformity {G.r}")
    if G.e > ORACLE_MAX_EDGES:
        raise InvalidHypergraph(f"oracle is limited to {ORACLE_MAX_EDGES} edges, got {G.e}")
    edges = G.sorted_edges()
    by_low: list[list[int]] = [[] for _ in edges]
    for c in copy_positions(edges, pattern):
        by_low[c[0]].append(sum(1 << p for p in c))

    @lru_cache(maxsize=None)
    def best(mask: int) -> int:
        if not mask:
            return 0
        low = mask & -mask
        out = 1 + best(mask ^ low)
        for cm in by_low[low.bit_length() - 1]:
            if cm & mask == cm:
                out = min(out, 1 + best(mask ^ cm))
        return out

    full = (1 << len(edges)) - 1
    value = best(full)
    copies, singles, mask = [], [], full
    while mask:
        low = mask & -mask
        p = low.bit_length() - 1
        nxt = next(
            (cm for cm in by_low[p] if cm & mask == cm and best(mask ^ cm) == best(mask) - 1), None
        )
        if nxt is None:
            singles.append(edges[p])
            mask ^= low
        else:
            copies.append([edges[q] for q in range(len(edges)) if nxt >> q & 1])
            mask ^= nxt
    best.cache_clear()
    return value, _assemble(copies, singles, Provenance.ORACLE, optimal=True)


def all_subgraphs(n: int, r: int) -> Iterable[Hypergraph]:
    edges = list(all_edges(n, r))
    for mask in range(1 << len(edges)):
        yield Hypergraph(n, r, frozenset(e for p, e in enumerate(edges) if mask >> p & 1))


def extremal_search(
    n: int, r: int, pattern: PatternH, budget: SearchBudget | None = None, family: Iterable[Hypergraph] | None = None
) -> list[Hypergraph]:
    """Maximizers of phi over ``family``.

    Without an explicit family every subgraph of K_n^r is searched when
    C(n,r) <= 20, otherwise the candidates K_n^r - je for 0 <= j <= e(H).
    """
    if family is None:
        total = binomial(n, r)
        if total <= EXHAUSTIVE_MAX_EDGES:
            family, name = all_subgraphs(n, r), "all-subgraphs"
        else:
            family = (complete_minus(n, r, j) for j in range(min(pattern.edge_count, total) + 1))
            name = "complete-minus"
        log.info("EXTREMAL_SEARCH", n=n, r=r, pattern=pattern.label(), family=name)
    best_value, winners = -1, []
    for G in family:
        value, _ = phi(G, pattern, budget)
        if value > best_value:
            best_value, winners = value, [G]
        elif value == best_value:
            winners.append(G)
    return winners


def lower_bound_phi(n: int, r: int, k: int) -> int:
    """ceil(C(n,r)/k): no decomposition of K_n^r into k-edge parts does better."""
    return ceil_div(binomial(n, r), k)

