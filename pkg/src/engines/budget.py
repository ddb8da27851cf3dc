from __future__ import annotations

import os
import time

from prometheus_client import Counter
from pydantic import BaseModel, ConfigDict, PositiveFloat, PositiveInt

from ..utils import safe_int

DEFAULT_MAX_NODES = safe_int(os.getenv("HDECOMP_BUDGET_NODES"), 2_000_000)

nodes_counter = Counter("search_nodes", "search nodes expanded", ["engine"])


class SearchBudget(BaseModel):
    """Per-invocation search limits."""

    model_config = ConfigDict(frozen=True)

    max_nodes: PositiveInt = DEFAULT_MAX_NODES
    max_seconds: PositiveFloat | None = None


class OutOfBudget(Exception):
    """Internal signal; public entry points convert it to BudgetExceeded."""


class SearchClock:
    """Counts node expansions against a :class:`SearchBudget`."""

    def __init__(self, budget: SearchBudget | None, engine: str):
        self.budget = budget
        self.engine = engine
        self.nodes = 0
        self._deadline = (
            time.monotonic() + budget.max_seconds if budget and budget.max_seconds else None
        )

    def tick(self, count: int = 1) -> None:
        self.nodes += count
        if self.budget is None:
            return
        if self.nodes > self.budget.max_nodes:
            raise OutOfBudget(f"{self.engine}: node budget {self.budget.max_nodes} exhausted")
        if self._deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self._deadline:
            raise OutOfBudget(f"{self.engine}: time budget {self.budget.max_seconds}s exhausted")

    def flush(self) -> None:
        """Publish the node count to the metrics registry."""
        nodes_counter.labels(engine=self.engine).inc(self.nodes)
