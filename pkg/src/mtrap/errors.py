"""Exception hierarchy shared by every module."""

from __future__ import annotations


class MTError(Exception):
    """Base class for all library errors."""


class UsageError(MTError, ValueError):
    """Inputs with incompatible shapes or otherwise malformed arguments."""


class NotLorentzianPlane(MTError):
    """A 2-plane expected to carry a (1,1) metric is definite or degenerate."""


class ExprSyntaxError(MTError):
    """Malformed scalar-field expression.

    ``offset`` is a byte offset into the UTF-8 encoded source.
    """

    def __init__(self, offset: int, expected: str, found: str = ""):
        self.offset = offset
        self.expected = expected
        self.found = found
        msg = f"syntax error at offset {offset}: expected {expected}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg)


class UnknownSymbol(MTError):
    def __init__(self, name: str, offset: int):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown symbol {name!r} at offset {offset}")


class EvalDomain(MTError):
    """Expression evaluated outside its domain (division by ~0)."""


class DegenerateChartPoint(MTError):
    pass


class NoAdmissibleTau(MTError):
    pass


class IdenticallyZero(MTError):
    pass


class RootBranchLost(MTError):
    def __init__(self, point, message: str = ""):
        self.point = point
        super().__init__(message or f"root branch lost at chart point {point}")


class NotInNullHyperplane(MTError):
    pass


class NormalizationFailure(MTError):
    pass


class BoundaryMargin(MTError):
    pass


class DegenerateSample(MTError):
    pass


class NothingVerifiable(MTError):
    pass


class ConfigError(MTError):
    """Scenario configuration problem, with an optional source location."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
