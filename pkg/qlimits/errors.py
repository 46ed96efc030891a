"""
Exception hierarchy for qlimits.

Validation problems derive from ParameterError (a ValueError), numerical
breakdowns from NumericalError (an ArithmeticError). The CLI maps the first
family to exit code 2 and the second to exit code 3.
"""


class QLimitsError(Exception):
    """Base class for every error raised by the library."""


# ---------- Validation ----------
class ParameterError(QLimitsError, ValueError):
    """A parameter set violates the admissibility conditions of its family."""


class DegreeError(ParameterError):
    """Requested degree is outside the range where the family is defined."""


class CoincidentPoints(ParameterError):
    """Christoffel-Darboux quotient requested at two points with equal abscissa."""


# ---------- Numerical ----------
class NumericalError(QLimitsError, ArithmeticError):
    """A computation broke down for otherwise valid input."""


class PoleError(NumericalError):
    """A q-Gamma argument sits on a pole."""


class DenominatorZero(NumericalError):
    """A denominator Pochhammer symbol vanished."""


class NonConvergence(NumericalError):
    """An infinite sum or product did not meet its truncation criterion."""


class SingularModification(NumericalError):
    """Mass-point modification is not quasi-definite at this degree."""
