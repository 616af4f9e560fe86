"""Sturm-Liouville spectral toolkit: forward solve, validation, Gelfand-Levitan inversion."""

from .core import (
    BoundaryAngles,
    GridFunction,
    NormingB,
    ProductValue,
    SpectralData,
    arccot,
    extended_mu,
    integrate_trapezoid,
    regularized_product,
    uniform_grid,
)
from .errors import (
    BracketingError,
    DegenerateSpectrumError,
    IllPosedDataError,
    InvalidArgumentError,
    SLGLError,
    SolverOverflowError,
    SpectralDataError,
)
from .forward import (
    ForwardResult,
    SolutionTrace,
    characteristic_delta,
    compute_eigenvalues,
    forward,
    norming_constants,
    solve_phi,
    solve_psi,
)
from .inverse import InverseResult, b_from_a, inverse_solve
from .series import (
    AsymptoticDecomposition,
    TriangularKernel,
    build_F,
    decompose,
    eval_a_accelerated,
    eval_a_direct,
    f_diagonal,
)
from .validate import ValidationReport, validate

__version__ = "0.1.0"
