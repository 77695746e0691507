"""Exception hierarchy shared by all modules."""


class GkError(Exception):
    """Base class for all package errors."""


class DomainError(GkError, ValueError):
    """Parameter outside the region where the construction is defined."""


class PoleError(GkError, ValueError):
    """Argument too close to the period lattice of a Weierstrass function."""


class ConvergenceError(GkError, ArithmeticError):
    """Iterative solver, root polish or quadrature failed to reach tolerance."""


class QuadratureError(ConvergenceError):
    pass


class StepSizeError(ConvergenceError):
    pass


class BoundaryError(DomainError):
    """Moment-map point on (or numerically at) a face of the polygon."""


class InvalidCornerError(GkError, ValueError):
    pass


class ComposabilityError(GkError, ValueError):
    pass


class JacobianError(GkError, ArithmeticError):
    pass


class StencilError(DomainError):
    pass
