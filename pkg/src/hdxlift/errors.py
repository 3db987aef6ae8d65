"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class HDXError(Exception):
    """Base class for all errors raised by hdxlift."""


class ComplexError(HDXError, ValueError):
    """Malformed simplicial complex input."""


class MultifaceError(ComplexError):
    pass


class SelfLoopError(ComplexError):
    pass


class PurityError(ComplexError):
    pass


class DimensionError(ComplexError):
    pass


class FaceNotFoundError(HDXError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class LevelError(HDXError, IndexError):
    pass


class OperatorError(HDXError, ValueError):
    pass


class ParameterError(HDXError, ValueError):
    pass


class HypothesisError(HDXError, ValueError):
    pass


class RegularityError(HDXError, ValueError):
    pass


class PartialSigningError(HDXError, ValueError):
    pass


class DomainError(HDXError, ValueError):
    pass


class SetError(HDXError, ValueError):
    pass


class StateError(HDXError, RuntimeError):
    pass


class NicenessError(HDXError, RuntimeError):
    pass


class AdmissibilityError(HDXError, RuntimeError):
    """The greedy potential's starting expectation is not below gamma."""

    def __init__(self, message: str, expected_q=None, gamma=None):
        super().__init__(message)
        self.expected_q = expected_q
        self.gamma = gamma


class NonTerminationError(HDXError, RuntimeError):
    def __init__(self, message: str, stats=None):
        super().__init__(message)
        self.stats = stats


class StructureViolation(HDXError, AssertionError):
    def __init__(self, message: str, edge=None):
        super().__init__(message)
        self.edge = edge


class SpectralViolation(HDXError, AssertionError):
    def __init__(self, message: str, index=None, expected=None, observed=None):
        super().__init__(message)
        self.index = index
        self.expected = expected
        self.observed = observed
