from __future__ import annotations

from typing import Any


class HDecompError(RuntimeError):
    """Base class for every error raised by the library."""


class InvalidHypergraph(HDecompError, ValueError):
    """Malformed edge, duplicate, label out of range or bad parameter."""


class TheoryViolation(HDecompError):
    """An executable check of a proved statement failed.

    Signals a bug or a violated precondition; never accepted silently.
    """


class ConstructionOutOfRange(HDecompError):
    """The constructive walk needs a vertex label beyond ``n``."""


class BudgetExceeded(HDecompError):
    """Search budget exhausted before the search could finish.

    ``best`` holds the best object found so far (a matching or a packing
    certificate); ``decomposition`` is filled in by callers that can turn it
    into an upper-bound decomposition.
    """

    def __init__(self, message: str, best: Any = None, decomposition: Any = None):
        super().__init__(message)
        self.best = best
        self.decomposition = decomposition
