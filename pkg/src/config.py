from __future__ import annotations

import os
import pathlib
from typing import Literal

from pydantic import BaseModel, ConfigDict, NonNegativeInt, PositiveFloat, PositiveInt, model_validator

from .core.combinatorics import PatternH, PatternKind
from .engines.budget import DEFAULT_MAX_NODES, SearchBudget
from .utils import safe_int

SEED = safe_int(os.getenv("HDECOMP_SEED"), 20180601)
JOBS = safe_int(os.getenv("HDECOMP_JOBS"), 1)
LOG_LEVEL = os.getenv("HDECOMP_LOG_LEVEL", "INFO").upper()


class RunConfig(BaseModel):
    """One CLI invocation, validated before dispatch."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Literal["gen", "phi", "verify", "probe"]
    n: NonNegativeInt | None = None
    r: NonNegativeInt | None = None
    k: NonNegativeInt | None = None
    i: NonNegativeInt | None = None
    pattern: PatternKind | None = None
    in_path: pathlib.Path | None = None
    out_path: pathlib.Path | None = None
    format: Literal["json", "text"] = "json"
    budget_nodes: PositiveInt = DEFAULT_MAX_NODES
    budget_seconds: PositiveFloat | None = None
    seed: int = SEED
    jobs: PositiveInt = max(JOBS, 1)
    theorem: Literal[1, 2] | None = None
    inequality: Literal["6", "ratio"] | None = None
    suite: Literal["monotonicity", "oracle"] | None = None
    rmax: PositiveInt | None = None
    nmax: PositiveInt | None = None
    kmax: PositiveInt | None = None
    span: NonNegativeInt | None = None
    samples: PositiveInt = 200
    metrics_out: pathlib.Path | None = None
    log_level: str = LOG_LEVEL
    timings: bool = False

    @model_validator(mode="after")
    def _per_command(self) -> RunConfig:
        if self.command == "gen":
            if self.n is None or self.r is None:
                raise ValueError("gen needs --n and --r")
            if self.r < 1 or self.n < self.r:
                raise ValueError(f"gen needs n >= r >= 1, got n={self.n}, r={self.r}")
            if self.k is not None and self.k < 1:
                raise ValueError("gen --k must be positive")
        elif self.command == "phi":
            if self.pattern is None or self.k is None:
                raise ValueError("phi needs --pattern and --k")
            if self.in_path is None and (self.n is None or self.r is None):
                raise ValueError("phi needs --in or both --n and --r")
            if self.pattern is PatternKind.COMMON_I and self.i is None:
                raise ValueError("common-i pattern needs --i")
        elif self.command == "verify":
            picked = [x for x in (self.theorem, self.inequality, self.suite) if x is not None]
            if len(picked) != 1:
                raise ValueError("verify needs exactly one of --theorem, --inequality, --property")
        elif self.command == "probe":
            if None in (self.n, self.r, self.k, self.i):
                raise ValueError("probe needs --n --r --k --i")
            if self.k < 1 or self.i > self.r - 1:
                raise ValueError(f"probe needs k >= 1 and 0 <= i <= r-1, got k={self.k}, i={self.i}")
        return self

    @property
    def budget(self) -> SearchBudget:
        return SearchBudget(max_nodes=self.budget_nodes, max_seconds=self.budget_seconds)

    def pattern_for(self, r: int) -> PatternH:
        return PatternH(self.pattern, r, self.k, self.i if self.pattern is PatternKind.COMMON_I else None)
