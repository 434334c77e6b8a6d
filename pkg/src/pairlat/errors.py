"""Exception hierarchy shared by all modules."""


class PairlatError(Exception):
    """Base class for errors raised by pairlat."""


class InvalidParameterError(PairlatError, ValueError):
    pass


class ModeError(PairlatError, ValueError):
    """Operation requested for the wrong interaction mode."""


class SymmetryError(PairlatError, ValueError):
    pass


class ConvergenceError(PairlatError, RuntimeError):
    """An iterative kernel stopped without meeting its tolerance."""

    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class FitError(PairlatError, ValueError):
    pass


class DetectionError(PairlatError, LookupError):
    """A spectral feature (cluster, peak) was not found where expected."""
