"""Gęsta algebra liniowa: rozkłady spektralne, funkcje macierzowe, równanie Sylvestra."""

from .decomposition import (
    ComplexMatrix,
    ComplexVector,
    DimensionMismatch,
    NoConvergence,
    NonNormal,
    SpectralDecomposition,
    as_matrix,
    commutator,
    dagger,
    eig_normal,
    is_hermitian,
    matrix_function,
    operator_norm,
    pseudo_inverse,
    pseudo_reciprocal,
)
from .functions import (
    HALF_PI_ROTATION,
    SQRT_COMPLEMENT,
    DifferentiableFunction,
    exponential,
    function_derivatives,
)
from .serialization import (
    load_matrix_file,
    matrix_from_json,
    matrix_to_json,
    vector_from_json,
    vector_to_json,
)
from .sylvester import SingularOperator, range_basis, sylvester_block_solve

__all__ = [
    "ComplexMatrix",
    "ComplexVector",
    "DifferentiableFunction",
    "DimensionMismatch",
    "HALF_PI_ROTATION",
    "NoConvergence",
    "NonNormal",
    "SQRT_COMPLEMENT",
    "SingularOperator",
    "SpectralDecomposition",
    "as_matrix",
    "commutator",
    "dagger",
    "eig_normal",
    "exponential",
    "function_derivatives",
    "is_hermitian",
    "load_matrix_file",
    "matrix_from_json",
    "matrix_function",
    "matrix_to_json",
    "operator_norm",
    "pseudo_inverse",
    "pseudo_reciprocal",
    "range_basis",
    "sylvester_block_solve",
    "vector_from_json",
    "vector_to_json",
]
