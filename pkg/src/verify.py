"""Verification grids, property suites and the common-intersection probe.

Every check returns a :class:`VerificationReport`. Flags are exact integer
or set equalities; a False flag is a mismatch the CLI turns into exit 3.
"""
from __future__ import annotations

import time
from typing import Any, Callable, Iterable, Iterator, Literal

import numpy as np
import structlog
from prometheus_client import Counter, Histogram
from pydantic import BaseModel, ConfigDict, Field

from .bounds import (
    claim_degree_bound,
    degree_condition_sweep,
    lower_bound_e,
    n_zero,
    ratio_sweep,
)
from .core.combinatorics import (
    Hypergraph,
    PatternH,
    PatternKind,
    all_edges,
    binomial,
    complete_hypergraph,
    complete_minus,
    ell_value,
    extremal_candidate,
)
from .core.errors import BudgetExceeded, TheoryViolation
from .decomposition import (
    ORACLE_MAX_EDGES,
    all_subgraphs,
    from_certificate,
    lower_bound_phi,
    oracle_phi,
    phi,
    phi_matching_formula,
    phi_two_edge_constructive,
    two_branch_value,
    validate_decomposition,
)
from .engines.budget import SearchBudget
from .engines.factors import hajnal_szemeredi_certificate
from .engines.packing import max_edge_disjoint_copies, residual_check
from .graphs.intersection import disjointness_graph
from .utils import ceil_div

log = structlog.get_logger()

point_seconds = Histogram("verify_point_seconds", "wall time per verification point", ["check"])
mismatch_counter = Counter("verify_mismatches", "verification points with a failed flag", ["check"])

THEOREM1_ORACLE_EDGES = 12


class VerificationReport(BaseModel):
    """One grid point; serialized as one JSON line."""

    model_config = ConfigDict(extra="forbid")

    check: str
    n: int | None = None
    r: int | None = None
    k: int | None = None
    i: int | None = None
    pattern: str | None = None
    formula: int | None = None
    constructive: int | None = None
    oracle: int | None = None
    status: Literal["ok", "budget", "skipped", "error"] = "ok"
    flags: dict[str, bool] = Field(default_factory=dict)
    extras: dict[str, Any] = Field(default_factory=dict)
    timings: float | None = None

    @property
    def mismatch(self) -> bool:
        return self.status == "error" or not all(self.flags.values())

    @property
    def ok(self) -> bool:
        return not self.mismatch and self.status != "budget"


def _sample(n: int, r: int, rng: np.random.Generator) -> Hypergraph:
    edges = list(all_edges(n, r))
    keep = rng.random(len(edges)) < 0.5
    return Hypergraph(n, r, frozenset(e for e, x in zip(edges, keep) if x))


def theorem1_point(n: int, r: int, k: int, budget: SearchBudget | None = None) -> VerificationReport:
    total = binomial(n, r)
    pattern = PatternH.two_edge(r, k)
    report = VerificationReport(check="theorem1", n=n, r=r, k=k, pattern=pattern.label(), formula=ceil_div(total, 2))
    K = complete_hypergraph(n, r)
    try:
        value, d = phi_two_edge_constructive(n, r, k)
    except TheoryViolation as e:
        report.status, report.extras["error"] = "error", str(e)
        return report
    report.constructive = value
    report.flags["constructive_matches"] = value == report.formula
    report.flags["decomposition_valid"] = validate_decomposition(K, pattern, d)
    report.flags["at_most_one_single"] = len(d.singles) <= 1
    if total <= THEOREM1_ORACLE_EDGES:
        report.oracle, _ = oracle_phi(K, pattern)
        report.flags["oracle_matches"] = report.oracle == report.formula

    try:
        minus_one, _ = phi(complete_minus(n, r, 1), pattern, budget)
        candidate, _ = phi(extremal_candidate(n, r, 2), pattern, budget)
    except BudgetExceeded as e:
        report.status, report.extras["budget"] = "budget", str(e)
        return report
    report.extras["phi_minus_one"] = minus_one
    report.flags["candidate_extremal"] = candidate == report.formula
    report.flags["minus_one_extremal_iff_even"] = (minus_one == report.formula) == (total % 2 == 0)
    return report


def theorem2_point(n: int, r: int, k: int, budget: SearchBudget | None = None) -> VerificationReport:
    """Formula and extremal set over the candidates K_n^r - je, 0 <= j <= k."""
    pattern = PatternH.independent(r, k)
    report = VerificationReport(check="theorem2", n=n, r=r, k=k, pattern=pattern.label())
    if r >= 2 and n < n_zero(k, r):
        report.status, report.extras["n0"] = "skipped", n_zero(k, r)
        return report
    total = binomial(n, r)
    report.formula = phi_matching_formula(n, r, k)
    values: list[int] = []
    sources: list[str] = []
    valid = residual = hs = degree = True
    for j in range(min(k, total) + 1):
        G = complete_minus(n, r, j)
        try:
            cert = max_edge_disjoint_copies(G, pattern, budget)
        except BudgetExceeded as e:
            report.status = "budget"
            report.extras.update(budget_at=j, best_copies=e.best.value if e.best else None)
            return report
        value, d = from_certificate(G, pattern, cert)
        values.append(value)
        sources.append(d.source.value)
        valid &= validate_decomposition(G, pattern, d)
        if cert.certified_value is None:
            residual &= residual_check(G, cert, k)
        if G.e >= lower_bound_e(n, r, k):
            L = disjointness_graph(G)
            hs &= hajnal_szemeredi_certificate(L, k)
            degree &= L.min_degree() >= claim_degree_bound(n, r, G.e)

    ell = ell_value(n, r, k)
    expected = {ell} | ({0} if total % k == (k - 2) % k else set())
    achieved = {j for j, v in enumerate(values) if v == report.formula}
    report.constructive = max(values)
    report.extras.update(phi_candidates=values, sources=sources, ell=ell, extremal=sorted(achieved))
    report.flags.update(
        max_matches_formula=max(values) == report.formula,
        extremal_set=achieved == expected,
        lower_bound=values[0] >= lower_bound_phi(n, r, k),
        decomposition_valid=valid,
        residual=residual,
        claim_hs=hs,
        claim_degree=degree,
    )
    log.info("THEOREM2_POINT", n=n, r=r, k=k, values=values, sources=sources)
    return report


def verify_theorem1(grid: Iterable[tuple[int, int, int]], budget: SearchBudget | None = None) -> list[VerificationReport]:
    return [theorem1_point(n, r, k, budget) for n, r, k in grid]


def verify_theorem2(grid: Iterable[tuple[int, int, int]], budget: SearchBudget | None = None) -> list[VerificationReport]:
    return [theorem2_point(n, r, k, budget) for n, r, k in grid]


def monotonicity_check(
    n: int, r: int, k: int, samples: int = 200, seed: int = 0, budget: SearchBudget | None = None
) -> VerificationReport:
    """phi(G) <= ceil(C(n,r)/2) on seeded random subgraphs of K_n^r."""
    pattern = PatternH.two_edge(r, k)
    bound = ceil_div(binomial(n, r), 2)
    rng = np.random.default_rng([seed, n, r, k])
    worst = violations = 0
    for _ in range(samples):
        value, _ = phi(_sample(n, r, rng), pattern, budget)
        worst = max(worst, value)
        violations += value > bound
    report = VerificationReport(
        check="monotonicity", n=n, r=r, k=k, pattern=pattern.label(), formula=bound, constructive=worst
    )
    report.flags["monotone"] = violations == 0
    report.extras.update(samples=samples, violations=violations)
    return report


def oracle_equivalence_check(
    n: int,
    r: int,
    pattern: PatternH,
    samples: int | None = None,
    seed: int = 0,
    budget: SearchBudget | None = None,
) -> VerificationReport:
    """Packing-based phi against the subset oracle.

    ``samples=None`` runs over every subgraph of K_n^r.
    """
    if samples is None:
        family = all_subgraphs(n, r)
    else:
        kind = list(PatternKind).index(pattern.kind)
        rng = np.random.default_rng([seed, n, r, pattern.k, pattern.core_size, kind])
        family = (_sample(n, r, rng) for _ in range(samples))
    checked = mismatches = 0
    valid = residual = True
    for G in family:
        cert = max_edge_disjoint_copies(G, pattern, budget)
        value, d = from_certificate(G, pattern, cert)
        expected, _ = oracle_phi(G, pattern)
        checked += 1
        mismatches += value != expected
        valid &= validate_decomposition(G, pattern, d)
        if pattern.kind is PatternKind.K_MATCHING and cert.certified_value is None:
            residual &= residual_check(G, cert, pattern.k)
    report = VerificationReport(check="oracle", n=n, r=r, k=pattern.k, i=pattern.i, pattern=pattern.label())
    report.flags.update(oracle_matches=mismatches == 0, decomposition_valid=valid, residual=residual)
    report.extras.update(graphs=checked, mismatches=mismatches, exhaustive=samples is None)
    return report


def conjecture_probe(n: int, r: int, k: int, i: int, budget: SearchBudget | None = None) -> VerificationReport:
    """Compare phi for k edges through a common i-set with the two-branch value.

    The verdict lands in ``extras``; only internal cross-checks are flags.
    """
    pattern = PatternH.common(r, k, i)
    total = binomial(n, r)
    report = VerificationReport(
        check="probe", n=n, r=r, k=k, i=i, pattern=pattern.label(), formula=two_branch_value(total, k)
    )
    values = []
    try:
        for j in range(min(k, total) + 1):
            value, d = phi(complete_minus(n, r, j), pattern, budget)
            values.append(value)
        if i == 0:
            plain, _ = phi(complete_hypergraph(n, r), PatternH.independent(r, k), budget)
            report.flags["matches_independent_edges"] = plain == values[0]
    except BudgetExceeded as e:
        report.status = "budget"
        report.extras["upper"] = e.decomposition.size if e.decomposition else None
        return report
    report.constructive = max(values)
    if total <= ORACLE_MAX_EDGES:
        report.oracle, _ = oracle_phi(complete_hypergraph(n, r), pattern)
        report.flags["oracle_matches"] = report.oracle == values[0]
    agree = report.constructive == report.formula
    report.extras.update(phi_candidates=values, verdict="agree" if agree else "disagree")
    log.info("PROBE_POINT", n=n, r=r, k=k, i=i, exact=report.constructive, conjectured=report.formula, agree=agree)
    return report


def inequality_report(
    kind: str, kmax: int = 6, rmax: int = 6, nmax: int = 200, span: int = 1000, budget: SearchBudget | None = None
) -> VerificationReport:
    if kind == "6":
        bad = degree_condition_sweep(kmax, rmax, span)
        extras = dict(kmax=kmax, rmax=rmax, span=span)
    elif kind == "ratio":
        bad = ratio_sweep(rmax, nmax)
        extras = dict(rmax=rmax, nmax=nmax)
    else:
        raise ValueError(f"unknown inequality {kind!r}")
    report = VerificationReport(check=f"inequality-{kind}", extras=extras)
    report.flags["no_violations"] = not bad
    report.extras.update(violations=len(bad), first=[list(p) for p in bad[:10]])
    return report


CHECKS: dict[str, Callable[..., VerificationReport]] = {
    "theorem1": theorem1_point,
    "theorem2": theorem2_point,
    "monotonicity": monotonicity_check,
    "oracle": oracle_equivalence_check,
    "probe": conjecture_probe,
    "inequality": inequality_report,
}


def run_point(check: str, params: dict[str, Any], budget: SearchBudget | None = None) -> VerificationReport:
    """Run one grid point; top-level so worker processes can pickle it."""
    started = time.perf_counter()
    report = CHECKS[check](**params, budget=budget)
    elapsed = time.perf_counter() - started
    point_seconds.labels(check=check).observe(elapsed)
    if report.mismatch:
        mismatch_counter.labels(check=check).inc()
        log.warning("VERIFY_MISMATCH", check=report.check, n=report.n, r=report.r, k=report.k, flags=report.flags)
    report.timings = round(elapsed, 6)
    return report


def theorem1_grid(rmax: int, nmax: int) -> Iterator[tuple[int, int, int]]:
    for r in range(2, rmax + 1):
        for k in range(r):
            for n in range(2 * r - k, nmax + 1):
                yield n, r, k


def theorem2_grid(k: int, r: int, nmax: int) -> Iterator[tuple[int, int, int]]:
    for n in range(n_zero(k, r), nmax + 1):
        yield n, r, k


def oracle_grid(samples: int) -> Iterator[tuple[int, int, PatternH, int | None]]:
    """Exhaustive on K_4^2, sampled on K_6^2 and K_6^3."""
    for n, r, count in ((4, 2, None), (6, 2, samples), (6, 3, samples)):
        for k in range(r):
            yield n, r, PatternH.two_edge(r, k), count
        yield n, r, PatternH.independent(r, 2), count
