"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ThetaGraphError(Exception):
    """Base class for all package errors."""


class Degenerate(ThetaGraphError):
    """Input violates general position (boundary point, projection or distance tie)."""

    def __init__(self, message: str, *, pair: tuple[int, int] | None = None, cone: int | None = None):
        super().__init__(message)
        self.pair = pair
        self.cone = cone


class AmbiguousPredicate(Degenerate):
    """A float-mode predicate value fell inside the epsilon guard band."""


class IdenticalPoints(Degenerate):
    """Two points that must differ coincide."""


class WrongCone(ThetaGraphError):
    """A point was claimed to lie in a cone that does not contain it."""


class Overlap(ThetaGraphError):
    """Two collinear segments overlap in more than one point."""


class DegenerateGeometry(ThetaGraphError):
    """Arc-enclosure construction is undefined for the given input."""


class NotAnEdge(ThetaGraphError):
    pass


class CycleDetected(ThetaGraphError):
    """An i-path revisited a vertex; only possible for a corrupted graph."""


class PreconditionUnmet(ThetaGraphError):
    pass


class Disconnected(ThetaGraphError):
    pass


class ExhaustedRetries(ThetaGraphError):
    pass


class UnknownProperty(ThetaGraphError):
    pass


class DuplicatePoint(ThetaGraphError):
    pass


class ParseError(ThetaGraphError):
    def __init__(self, message: str, *, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.field = field
