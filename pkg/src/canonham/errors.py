"""Exception types shared across the package."""


class CanonhamError(Exception):
    """Base class for all library errors."""


class NegativeDensity(CanonhamError):
    """A sampled density value fell below the negativity tolerance."""


class QuadratureFailure(CanonhamError):
    """Adaptive quadrature could not reach the requested tolerance."""


class EmptyPeriod(CanonhamError):
    """Restricting a measure to one period produced the zero measure."""


class InsufficientMoments(CanonhamError):
    """More moments were requested than the sequence provides."""


class NotPositiveDefinite(CanonhamError):
    """A moment matrix is not positive definite.

    ``max_order`` is the largest order at which positivity held, or -1 if
    even the 0x0 base case failed (non-positive gamma_0).
    """

    def __init__(self, message, max_order=-1):
        super().__init__(message)
        self.max_order = max_order


class NonRealResult(CanonhamError):
    """A functional that must be real came out with a large residual part."""


class BreakdownAtOrder(CanonhamError):
    """The Toeplitz recursion lost positive definiteness at ``order``.

    ``partial`` holds whatever results were valid before the breakdown
    (shape depends on the operation that raised).
    """

    def __init__(self, order, message=None, partial=None):
        super().__init__(message or f"positive definiteness lost at order {order}")
        self.order = order
        self.partial = partial


class LengthMismatch(CanonhamError):
    """Paired step sequences have different lengths."""


class NonDiagonalHamiltonian(CanonhamError):
    """The operation requires a diagonal (g = 0) step Hamiltonian."""


class DegenerateRatio(CanonhamError):
    """The orthogonal-polynomial ratio has a vanishing real part."""


class SingularSystem(CanonhamError):
    """The atom-system matrix is numerically singular."""


class DomainError(CanonhamError):
    """Evaluation outside the domain of a closed-form Hamiltonian."""


class SeriesDivergence(CanonhamError):
    """A power series failed to converge within the term budget."""


class PartialResultWarning(UserWarning):
    """Emitted when a job returns truncated results after a numerical breakdown."""
