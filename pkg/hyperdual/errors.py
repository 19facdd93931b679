"""Exception hierarchy. Everything raised on purpose derives from HyperdualError."""

from __future__ import annotations

from typing import Any, Sequence


class HyperdualError(Exception):
    pass


class InvalidHypergraph(HyperdualError, ValueError):
    pass


class DuplicateEdges(InvalidHypergraph):
    pass


class HypergraphFormatError(HyperdualError, ValueError):
    """Malformed hypergraph text; ``line`` is 1-indexed when known."""

    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


class UnsupportedDims(HyperdualError, ValueError):
    pass


class DimensionMismatch(HyperdualError, ValueError):
    pass


class SearchBudgetExceeded(HyperdualError):
    """The self-duality search ran out of nodes. The answer is unknown, not "no"."""

    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"isomorphism search exceeded its budget of {budget} nodes")


class DependentEdges(HyperdualError, ValueError):
    def __init__(self, dependent: Sequence[int]):
        self.dependent = tuple(dependent)
        shown = ", ".join(str(i + 1) for i in self.dependent)
        super().__init__(f"edges {shown} are GF(2)-dependent on earlier edges; reduce with independent_set first")


class TooLarge(HyperdualError):
    pass


class NotConverged(HyperdualError):
    def __init__(self, msg: str, result: Any = None):
        self.result = result
        super().__init__(msg)


class SectorEmpty(HyperdualError):
    pass


class SectorNotInvariant(HyperdualError, ValueError):
    pass


class NoTransitionFound(HyperdualError):
    pass
