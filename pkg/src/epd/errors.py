"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: domain-type errors exit 1, convergence
failures exit 2.
"""


class EPDError(Exception):
    """Base class for all package errors."""


class DomainError(EPDError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class PoleError(DomainError):
    """A Gamma-function pole was hit."""


class LightConeError(DomainError):
    """A kernel was evaluated inside the guard band around the light cone."""


class StencilDomainError(DomainError):
    """A finite-difference stencil leaves the admissible region."""


class NoConvergence(EPDError, ArithmeticError):
    """A series or iterative evaluation hit its term budget."""


class QuadratureFailure(NoConvergence):
    """A quadrature rule failed to reach its tolerance."""
