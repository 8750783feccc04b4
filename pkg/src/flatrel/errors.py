"""Exception hierarchy.  CLI exit codes are attached to the base classes."""
from __future__ import annotations


class FlatRelError(Exception):
    exit_code = 1


class ValidationError(FlatRelError):
    """A surface violates one of its invariants.

    ``half_edge`` names the offending half-edge (or the first half-edge of the
    offending triangle) when there is one.
    """

    def __init__(self, message, half_edge=None):
        super().__init__(message)
        self.half_edge = half_edge


class NonClosedTriangle(ValidationError):
    pass


class NonPositiveTriangle(ValidationError):
    pass


class TwinMismatch(ValidationError):
    pass


class Disconnected(ValidationError):
    pass


class BadCombinatorics(ValidationError):
    pass


class LabelMismatch(ValidationError):
    pass


class MixedBackend(ValidationError):
    pass


class FileFormatError(ValidationError):
    """Malformed surface file; ``line`` is set when the JSON itself is broken."""

    def __init__(self, message, half_edge=None, line=None):
        super().__init__(message, half_edge)
        self.line = line


class GaussBonnetMismatch(FlatRelError):
    pass


class NonConvexFlip(FlatRelError):
    pass


class NonPositiveDeterminant(FlatRelError):
    pass


class ChartMismatch(FlatRelError):
    pass


class NotHorizontal(FlatRelError):
    pass


class BudgetExceeded(FlatRelError):
    exit_code = 2


class EventBudgetExceeded(BudgetExceeded):
    pass


class FloatBackendUnsupported(FlatRelError):
    pass


class NoAdmissibleRelVector(FlatRelError):
    pass


class SlitHitsConePoint(FlatRelError):
    pass


class SlitTooLong(BudgetExceeded):
    pass


class NoCollapse(FlatRelError):
    """A flow asked to run to the boundary never degenerates."""
