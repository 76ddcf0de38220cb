class WanderlabError(Exception):
    """Base class for all library errors."""


class DomainError(WanderlabError, ValueError):
    """An argument violates a documented precondition."""


class QuadratureError(WanderlabError, ArithmeticError):
    """A quadrature or contour rule hit a non-finite sample."""


class ConvergenceError(WanderlabError, RuntimeError):
    """An iterative procedure failed to converge."""
