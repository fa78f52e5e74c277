"""Exception hierarchy.

Everything derived from :class:`SandpileError` is a *domain* error (bad graph,
singular matrix, malformed program, ...).  The CLI maps those to exit code 2;
:class:`BadSpec` is a parse error and maps to exit code 1.
"""


class SandpileError(Exception):
    """Base class for all domain errors raised by this package."""


class GraphError(SandpileError, ValueError):
    pass


class DuplicateVertex(GraphError):
    pass


class LoopEdge(GraphError):
    pass


class SinkNotGlobal(GraphError):
    pass


class UnknownLabel(GraphError):
    pass


class BadSize(GraphError):
    pass


class NotRegular(GraphError):
    pass


class LinAlgError(SandpileError, ArithmeticError):
    pass


class NotSquare(LinAlgError):
    pass


class Singular(LinAlgError):
    pass


class DimensionMismatch(SandpileError, ValueError):
    pass


class MalformedLP(SandpileError, ValueError):
    pass


class OutOfRange(SandpileError, ValueError):
    pass


class CrossCheckMismatch(SandpileError, RuntimeError):
    """Two independent routes disagreed.  Indicates a bug, never expected."""


class BadSpec(ValueError):
    """A family spec string or command-line value could not be parsed."""
