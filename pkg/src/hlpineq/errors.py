"""Exception hierarchy.

Every numeric failure raised by the library derives from ``HLPError`` so the
CLI can map it to exit code 3 and print the class name.
"""


class HLPError(ValueError):
    """Base class for all library errors."""


# spectral_core
class InvalidSpectrum(HLPError):
    pass


class EmptySpectrum(HLPError):
    pass


class NotSelfAdjoint(HLPError):
    pass


class DecompositionFailure(HLPError):
    pass


class BindingError(HLPError):
    """Element used with an operator it was not built for."""


class DomainViolation(HLPError):
    """Symbol is not finite at some spectral point."""


class EmptyBand(HLPError):
    """No spectral point inside the requested band (s, t]."""


# symbols
class InvalidOrder(HLPError):
    pass


class OutOfRange(HLPError):
    pass


class NotConcaveLink(HLPError):
    pass


# hlp / stechkin / classes / recovery
class ZeroElement(HLPError):
    pass


class InvalidDelta(HLPError):
    pass


class DegenerateCut(HLPError):
    pass


class LinkInconsistency(HLPError):
    pass


class BudgetUnreachable(HLPError):
    pass


class UnboundedSup(HLPError):
    pass


class ClassViolation(HLPError):
    pass


class BracketExhausted(HLPError):
    pass


class TheoremViolation(HLPError):
    """A proved identity failed numerically: this is an implementation bug."""
