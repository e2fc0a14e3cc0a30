"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class VrspError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(VrspError, ValueError):
    """Raised when a graph (or a request about a graph) is malformed."""


class CycleDetected(GraphError):
    def __init__(self, vertices):
        self.vertices = tuple(sorted(vertices))
        super().__init__(f"directed cycle through vertices {list(self.vertices)}")


class DanglingEnd(GraphError):
    def __init__(self, arc, vertex):
        self.arc = arc
        self.vertex = vertex
        super().__init__(f"arc {arc!r} references unknown vertex {vertex!r}")


class EmptyAction(GraphError):
    pass


class UnknownVertex(GraphError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"unknown vertex {vertex!r}")


class UnknownArc(GraphError):
    def __init__(self, arc):
        self.arc = arc
        super().__init__(f"arc {arc!r} is not part of the graph")


class OverlappingSets(GraphError):
    pass


class EmptySide(GraphError):
    pass


class BadPartition(GraphError):
    pass


class BadSubset(GraphError):
    pass


class NameClash(GraphError):
    pass


class CycleCreated(GraphError):
    """Contracting a vertex set produced a directed cycle."""


class HypothesesFailed(VrspError):
    """A decomposition was requested for an instance that fails the theorem's hypotheses.

    ``failed`` holds the names of the clauses that did not hold.
    """

    def __init__(self, theorem, failed):
        self.theorem = theorem
        self.failed = tuple(failed)
        super().__init__(f"{theorem}: hypotheses failed: {', '.join(self.failed)}")


class TooLarge(VrspError):
    def __init__(self, size, bound):
        self.size = size
        self.bound = bound
        super().__init__(f"graph has {size} vertices, brute-force bound is {bound}")


class InfeasibleBudget(VrspError, ValueError):
    pass


class ParseError(VrspError, ValueError):
    """Malformed graph document. ``line`` and ``field`` locate the problem when known."""

    def __init__(self, message, *, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
