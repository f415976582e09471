"""Exception hierarchy shared by every mcop module."""

from __future__ import annotations


class McopError(Exception):
    """Base class for all library errors."""


# poset construction
class PosetError(McopError):
    pass


class CycleDetected(PosetError):
    pass


class UnknownElement(PosetError):
    pass


# marked posets
class MarkingError(McopError):
    """A marked-poset invariant does not hold.

    ``invariant`` names the violated condition so callers (the CLI) can
    report it verbatim.
    """

    def __init__(self, message: str, invariant: str | None = None):
        super().__init__(message)
        self.invariant = invariant or message


class InconsistentMarking(MarkingError):
    pass


class MarkingNotIntegral(MarkingError):
    pass


class NotRanked(MarkingError):
    pass


class NotRegular(MarkingError):
    pass


class NotRankMarking(MarkingError):
    pass


# polyhedra
class PolyhedronError(McopError):
    pass


class EmptyPolyhedron(PolyhedronError):
    pass


class Unbounded(PolyhedronError):
    pass


class NotFullDimensional(PolyhedronError):
    pass


class NotPointed(PolyhedronError):
    pass


class OriginNotInterior(PolyhedronError):
    pass


# decomposition
class DecompositionError(McopError):
    pass


class PointNotInPolyhedron(DecompositionError):
    pass


class NonIntegralInput(DecompositionError):
    pass


class MarkingsNotInCommonCell(DecompositionError):
    pass


# ehrhart
class InterpolationMismatch(McopError):
    pass


# documents
class DocumentError(McopError):
    pass
