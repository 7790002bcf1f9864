"""Exception hierarchy shared by every ciltlab module.

Errors split into two families so the command line can map them onto exit
codes: ``ValidationError`` (bad input, exit code 2) and ``ConvergenceError``
(a numerical procedure failed, exit code 3).
"""


class CiltlabError(Exception):
    """Base class for all ciltlab errors."""


class ValidationError(CiltlabError):
    """Input rejected before or during evaluation."""


class ConvergenceError(CiltlabError):
    """A numerical procedure failed to reach its tolerance."""


class DomainError(ValidationError):
    """A parameter lies outside its admissible range."""


class CompactificationError(ValidationError):
    """An integrality condition tied to the compactification radius fails."""


class UnsupportedSurface(ValidationError):
    """The operation is not implemented for the given surface kind."""


class GeometryError(ValidationError):
    """A point or regularization circle leaves the surface."""


class PathError(ValidationError):
    """A path of integration crosses a cut or leaves the surface."""


class SingularityError(ValidationError):
    """A kernel was evaluated on its diagonal."""


class NeutralityError(ValidationError):
    """A screening term was requested outside the neutrality set."""


class ResolutionError(ValidationError):
    """The regularization scale is not resolved by the node set."""


class QuadratureError(ConvergenceError):
    """A quadrature produced non-finite values or did not converge."""


class NonConvergence(ConvergenceError):
    """An extrapolation ladder disagreed beyond tolerance."""


class FactorizationError(ConvergenceError):
    """A covariance matrix could not be factorized."""

    def __init__(self, message: str, pair: tuple[int, int] | None = None) -> None:
        super().__init__(message)
        self.pair = pair


class DivergenceError(ConvergenceError):
    """An integral is not absolutely convergent."""

    def __init__(self, message: str, exponent: float | None = None) -> None:
        super().__init__(message)
        self.exponent = exponent


class DivergenceWarning(UserWarning):
    """An exponent sits close to its integrability threshold."""


__all__ = [
    "CiltlabError",
    "ValidationError",
    "ConvergenceError",
    "DomainError",
    "CompactificationError",
    "UnsupportedSurface",
    "GeometryError",
    "PathError",
    "SingularityError",
    "NeutralityError",
    "ResolutionError",
    "QuadratureError",
    "NonConvergence",
    "FactorizationError",
    "DivergenceError",
    "DivergenceWarning",
]
