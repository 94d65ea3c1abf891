"""Finite truncations of Bergman-space Toeplitz operators and checks of their rank structure."""

from .analysis import (
    ExperimentReport,
    HypothesisViolation,
    OriginAtomError,
    TriangularResult,
    TupleGuardError,
    ZeroSetReport,
    ZeroSymbolError,
    determinant_identity,
    determinant_terms,
    f_eval,
    f_eval_bound,
    product_rank_experiment,
    triangular_reconstruction,
    zero_set_report,
)
from .linalg import SVDConvergenceError, gauss_legendre, jacobi_svd
from .moments import (
    EigenvalueSequence,
    eigenvalue_sequence,
    moment,
    omega,
    quadrature_moment,
)
from .operators import (
    RankReport,
    TruncatedOperator,
    apply,
    diagonal_operator,
    measure_matrix,
    multiply,
    numerical_rank,
    toeplitz_matrix,
)
from .symbols import (
    AtomicMeasure,
    InfeasibleZeroSet,
    RadialProfile,
    Symbol,
    conjugate_symbol,
    make_radial_polynomial,
    prescribe_zero_set,
    symbol_from_bipoly,
)

__version__ = "0.1.0"
