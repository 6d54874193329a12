"""
Exception types raised by the matchscale library.
"""

from __future__ import annotations


class MatchingError(Exception):
    """Base class for all library errors."""


class GraphError(MatchingError, ValueError):
    """The input graph violates a structural requirement."""


class SelfLoop(GraphError):
    pass


class NonPositiveWeight(GraphError):
    pass


class NonIntegerWeight(GraphError):
    pass


class VertexOutOfRange(GraphError):
    pass


class NonBipartiteEdge(GraphError):
    pass


class NotBipartite(GraphError):
    pass


class UnequalSides(GraphError):
    pass


class EpsOutOfRange(MatchingError, ValueError):
    pass


class Overflow(MatchingError, ArithmeticError):
    pass


class NoPerfectMatching(MatchingError):
    pass


class TooLarge(MatchingError, ValueError):
    pass


class Infeasible(MatchingError, ValueError):
    pass


class BlossomError(MatchingError):
    pass


class EvenCycle(BlossomError):
    pass


class NotAlternating(BlossomError):
    pass


class NonzeroZ(BlossomError):
    pass


class NotRoot(BlossomError):
    pass


class CyclicInput(MatchingError):
    pass


class InvariantViolation(MatchingError):
    """Raised in checking mode when a dual invariant fails."""

    def __init__(self, where: str, violations: list) -> None:
        self.where = where
        self.violations = list(violations)
        head = "; ".join(str(v) for v in self.violations[:3])
        more = len(self.violations) - 3
        if more > 0:
            head += f"; ... ({more} more)"
        super().__init__(f"{where}: {head}")


class ParseError(MatchingError, ValueError):
    """Malformed instance text. Carries the 1-based line number."""

    def __init__(self, message: str, line: int = 0) -> None:
        self.line = line
        if line:
            message = f"line {line}: {message}"
        super().__init__(message)
