"""Robust dictionary-based data representation.

Represent data ``X`` over a dictionary ``D`` as ``X = D Z + E`` while a
column-sparse penalty on ``Z`` forces the coefficients of grossly corrupted
samples to zero, then detect those samples from the per-column coefficient
norms.
"""

from .detection import (
    AbsoluteThreshold,
    DetectionResult,
    LargestGap,
    RelativeMedian,
    detection_metrics,
    flag_corrupted,
    score_columns,
)
from .errors import (
    EmptyFileError,
    EmptyInputError,
    NonFiniteError,
    NonFiniteIterateError,
    ParseError,
    RaggedRowsError,
    RobustRepError,
    SingularSystemError,
    ZeroMatrixError,
)
from .matrix import (
    COLUMN_L21,
    ENTRYWISE_L1,
    ENTRYWISE_LINF,
    FROBENIUS,
    NormKind,
    as_matrix,
    column_lq1,
    column_norms,
    matrix_norm,
    spectral_norm,
)
from .matrix_io import read_matrix_csv, write_matrix_csv
from .problem import ProblemSpec, Variant, objective_value
from .prox import prox_l21_columns, prox_sparse_group, soft_threshold
from .solvers import (
    SolveReport,
    SolverOptions,
    ladmap_e_step,
    ladmap_z_step,
    solve_irls,
    solve_ladmap,
    solve_sparse_ladmap,
    solve_weighted_ladmap,
    sylvester_diag_solve,
    weighted_e_step,
)
from .synthetic import CorruptionGroundTruth, GenSpec, generate_dictionary, generate_instance

__version__ = "0.1.0"

__all__ = [
    "AbsoluteThreshold",
    "COLUMN_L21",
    "CorruptionGroundTruth",
    "DetectionResult",
    "ENTRYWISE_L1",
    "ENTRYWISE_LINF",
    "EmptyFileError",
    "EmptyInputError",
    "FROBENIUS",
    "GenSpec",
    "LargestGap",
    "NonFiniteError",
    "NonFiniteIterateError",
    "NormKind",
    "ParseError",
    "ProblemSpec",
    "RaggedRowsError",
    "RelativeMedian",
    "RobustRepError",
    "SingularSystemError",
    "SolveReport",
    "SolverOptions",
    "Variant",
    "ZeroMatrixError",
    "as_matrix",
    "column_lq1",
    "column_norms",
    "detection_metrics",
    "flag_corrupted",
    "generate_dictionary",
    "generate_instance",
    "ladmap_e_step",
    "ladmap_z_step",
    "matrix_norm",
    "objective_value",
    "prox_l21_columns",
    "prox_sparse_group",
    "read_matrix_csv",
    "score_columns",
    "soft_threshold",
    "solve_irls",
    "solve_ladmap",
    "solve_sparse_ladmap",
    "solve_weighted_ladmap",
    "spectral_norm",
    "sylvester_diag_solve",
    "weighted_e_step",
    "write_matrix_csv",
]
