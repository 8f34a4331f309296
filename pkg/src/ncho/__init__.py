"""Spectral computations and gap certificates for the non-commutative harmonic oscillator."""

from .errors import DomainError, OracleError, SolverError
from .operator import (
    BandedSymmetricMatrix,
    BasisIndex,
    Params,
    Parity,
    apply_number,
    apply_V,
    assemble_sector,
    matrix_element,
)
from .eigensolve import (
    SpectrumResult,
    converged_spectrum,
    eigen_tridiagonal,
    sturm_bisection,
    tridiagonalize,
)

__version__ = "0.1.0"
