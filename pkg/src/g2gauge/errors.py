"""Exception types shared across the package."""

from __future__ import annotations


class G2GaugeError(Exception):
    """Base class for all package errors."""


class MissingAssignment(G2GaugeError):
    pass


class NotACoordinate(G2GaugeError):
    pass


class RingMismatch(G2GaugeError):
    pass


class ParseError(G2GaugeError):
    """Raised by the text parsers; carries a 1-based line and column."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line = line
        self.column = col
        super().__init__(f"{message} (line {line}, column {col})")


class UnknownSymbol(ParseError):
    pass


class DegreeMismatch(G2GaugeError):
    pass


class ConstructionFailure(G2GaugeError):
    pass


class NotInSpan(G2GaugeError):
    pass


class WrongNullity(G2GaugeError):
    pass


class NonRealCoefficient(G2GaugeError):
    pass


class NotInG2(G2GaugeError):
    pass


class MismatchWithPrinted(G2GaugeError):
    def __init__(self, name: str, diffs):
        self.name = name
        self.diffs = diffs
        super().__init__(f"{name}: differing coefficients {diffs}")


class DegenerateSample(G2GaugeError):
    pass


class GradingMismatch(G2GaugeError):
    pass


class UnsupportedPattern(G2GaugeError):
    pass


class RuleFailure(G2GaugeError):
    pass


class DimensionMismatch(G2GaugeError):
    pass


class InvalidGaugeData(G2GaugeError):
    pass
