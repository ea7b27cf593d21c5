"""
Exception hierarchy for JucysWorkbench
Structural errors raised by the algebra engine and the verification suites
"""


class WorkbenchError(Exception):
    """Base class for every error raised by the workbench"""


class ConfigError(WorkbenchError, ValueError):
    """Invalid suite configuration or command-line usage"""


class GuardExhaustion(WorkbenchError):
    """Rejection sampling could not satisfy the guard set"""


class PoleError(WorkbenchError, ValueError):
    """A denominator vanished at the requested arguments"""

    def __init__(self, message: str, factor: str = ""):
        super().__init__(message)
        self.factor = factor


class DimensionOverflow(WorkbenchError):
    """Closure exceeded the allowed dimension"""

    def __init__(self, message: str, reached: int = 0):
        super().__init__(message)
        self.reached = reached


class NonAssociative(WorkbenchError):
    """Associativity audit of a closed algebra failed"""


class UnknownGenerator(WorkbenchError, KeyError):
    """A word uses a symbol that is not a generator of the presentation"""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class OwnerMismatch(WorkbenchError):
    """Binary operation on elements of different algebras"""


class SingularElement(WorkbenchError):
    """An algebra element has no two-sided inverse"""


class UnsupportedFamily(WorkbenchError, ValueError):
    """Commuting family not defined for the requested braid type"""


class InvolutionDomainError(WorkbenchError, ValueError):
    """Spectral involution applied at an excluded value"""


class FlipUnavailable(WorkbenchError):
    """The quotient does not admit the diagram flip"""


class InadmissiblePoint(WorkbenchError):
    """Cyclotomic parameters violate the admissibility constraint"""

    def __init__(self, message: str, constraint: str = ""):
        super().__init__(message)
        self.constraint = constraint


class SingularBoundary(WorkbenchError):
    """Boundary denominator element is not invertible"""


class NotProportional(WorkbenchError):
    """A sandwich element is not a multiple of the expected idempotent"""


class IncompatibleSubstitutions(WorkbenchError):
    """Connection operators composed to different substitution parts"""
