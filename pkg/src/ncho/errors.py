"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the domain where a formula or operation is defined."""


class SolverError(RuntimeError):
    """An eigensolver failed to converge.

    ``index`` names the eigenvalue that failed (QL) and ``bracket`` carries the
    best available estimate when the truncation cap is hit.
    """

    def __init__(self, message, index=None, bracket=None):
        super().__init__(message)
        self.index = index
        self.bracket = bracket


class OracleError(RuntimeError):
    """A verification oracle (quadrature) could not reach its error target."""
