"""Exception types shared across the toolkit."""


class SLGLError(Exception):
    """Base class for all toolkit errors."""


class InvalidArgumentError(SLGLError):
    """A parameter or input payload violates a documented precondition."""


class DegenerateSpectrumError(SLGLError):
    """Two eigenvalues coincide; regularized products are undefined."""


class SolverOverflowError(SLGLError):
    """ODE integration overflowed (extremely negative spectral parameter)."""

    def __init__(self, mu, message=None):
        self.mu = mu
        super().__init__(message or f"integration overflow at mu={mu!r}")


class BracketingError(SLGLError):
    """Eigenvalue search failed to isolate a root; carries diagnostics."""


class IllPosedDataError(SLGLError):
    """The discrete Gelfand-Levitan system is numerically singular."""


class SpectralDataError(SLGLError):
    """Candidate spectral data failed the hard validity checks."""
