"""Exception types raised by :mod:`stripembed`."""


class StripEmbedError(Exception):
    """Base class for every error raised by this package."""


class DomainError(StripEmbedError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class DimensionError(DomainError):
    """Tensor quadrature was requested in more dimensions than supported."""


class ConvergenceError(StripEmbedError, RuntimeError):
    """An iterative method did not reach its tolerance.

    Parameters
    ----------
    message : str
        Human readable description.
    iterate : object, optional
        The last iterate produced before giving up.
    residual : float, optional
        The last convergence measure (error estimate or relative change).
    """

    def __init__(self, message, iterate=None, residual=None):
        super().__init__(message)
        self.iterate = iterate
        self.residual = residual


class CertificationError(StripEmbedError):
    """A numerical certificate check exceeded its tolerance.

    ``violations`` maps the name of each failed check to its deviation.
    """

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = dict(violations or {})


class RefutationError(StripEmbedError):
    """A candidate net could not be refuted by the translation witness."""


class PreconditionError(RefutationError):
    """The witness is too small to refute any net of the requested radius."""
