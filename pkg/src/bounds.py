"""Closed-form bounds behind the k-independent-edges formula.

Everything here is exact: integers for binomial expressions, ``Fraction`` for
the ratio inequality. No verdict is ever taken in floating point.
"""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

import structlog

from .core.combinatorics import Hypergraph, binomial, complete_hypergraph
from .core.errors import InvalidHypergraph

log = structlog.get_logger()


class FranklBound(NamedTuple):
    value: int
    applies: bool


def n_zero(k: int, r: int) -> int:
    """Threshold kr(k+r-2) + 2r - 1 above which the formula is proved."""
    if k < 1 or r < 2:
        raise InvalidHypergraph(f"n0 needs k >= 1 and r >= 2, got k={k}, r={r}")
    return k * r * (k + r - 2) + 2 * r - 1


def frankl_bound(n: int, r: int, k: int) -> FranklBound:
    """C(n,r) - C(n-k,r): edge cap for matching number k once n >= (2k+1)r - k."""
    return FranklBound(binomial(n, r) - binomial(max(n - k, 0), r), n >= (2 * k + 1) * r - k)


def residual_cap(n: int, r: int, k: int) -> FranklBound:
    """Edge cap for a k-independent-edges-free leftover (matching number <= k-1)."""
    return frankl_bound(n, r, k - 1)


def frankl_saturating_family(n: int, r: int, k: int) -> Hypergraph:
    """All r-subsets meeting {0, ..., k-1}; it has exactly frankl_bound(n,r,k).value edges."""
    full = complete_hypergraph(n, r)
    return Hypergraph(n, r, frozenset(e for e in full.edges if e[0] < k))


def lower_bound_e(n: int, r: int, k: int) -> int:
    """C(n,r) - (k-1)[C(n,r) - C(n-k+1,r)]; negative values are returned unchanged."""
    total = binomial(n, r)
    return total - (k - 1) * (total - binomial(max(n - k + 1, 0), r))


def claim_degree_bound(n: int, r: int, e: int) -> int:
    """Lower bound C(n-r,r) - [C(n,r) - e] on the minimum degree of L_G."""
    return binomial(max(n - r, 0), r) - (binomial(n, r) - e)


def degree_condition_inequality(n: int, r: int, k: int) -> bool:
    """k C(n-r,r) + (k-1) C(n-k+1,r) >= (2k-2) C(n,r)."""
    lhs = k * binomial(max(n - r, 0), r) + (k - 1) * binomial(max(n - k + 1, 0), r)
    return lhs >= (2 * k - 2) * binomial(n, r)


def ratio_inequality_check(n: int, r: int, t: int) -> bool:
    """C(n-t,r)/C(n,r) >= ((n-t-r+1)/(n-r+1))^r >= 1 - rt/(n-r+1), in exact rationals."""
    if not (r >= t >= 0 and n >= r + t):
        raise InvalidHypergraph(f"ratio inequality needs r >= t >= 0 and n >= r+t, got n={n}, r={r}, t={t}")
    ratio = Fraction(binomial(n - t, r), binomial(n, r))
    middle = Fraction(n - t - r + 1, n - r + 1) ** r
    lower = 1 - Fraction(r * t, n - r + 1)
    return ratio >= middle >= lower


def degree_condition_sweep(kmax: int, rmax: int, span: int) -> list[tuple[int, int, int]]:
    """Grid points n0(k,r) <= n <= n0(k,r)+span violating the degree condition.

    A violation is flagged and logged, not raised: it would point at a
    misread threshold rather than at the arithmetic.
    """
    bad = []
    for k in range(1, kmax + 1):
        for r in range(2, rmax + 1):
            start = n_zero(k, r)
            for n in range(start, start + span + 1):
                if not degree_condition_inequality(n, r, k):
                    log.warning("DEGREE_CONDITION_VIOLATED", n=n, r=r, k=k)
                    bad.append((n, r, k))
    return bad


def ratio_sweep(rmax: int, nmax: int) -> list[tuple[int, int, int]]:
    bad = []
    for r in range(1, rmax + 1):
        for t in range(0, r + 1):
            for n in range(r + t, nmax + 1):
                if not ratio_inequality_check(n, r, t):
                    log.warning("RATIO_INEQUALITY_VIOLATED", n=n, r=r, t=t)
                    bad.append((n, r, t))
    return bad
