"""narxiv: interval-verified NARX polynomial system identification.

Estimates NARX polynomial models with guaranteed-enclosure interval
arithmetic: structure selection by error reduction ratio and AIC, classical
point least squares, interval least squares through a verified solver, and
one-step-ahead / free-run validation with point and interval RMSE.
"""

from ._backend import backend_name
from .errors import NarxivError
from .estimation import EstimationResult, WideningPolicy, cover_point_estimate, estimate
from .interval import Interval, hull, intersect
from .linalg import (
    IntervalMatrix,
    IntervalVector,
    SolverConfig,
    interval_least_squares,
    mat_mul,
    mat_vec,
    point_least_squares,
    solve_verified,
)
from .metrics import rmse_interval, rmse_point
from .model import (
    Dataset,
    ModelStructure,
    RegressorTerm,
    build_interval_regressor_matrix,
    build_regressor_matrix,
    candidate_terms,
    free_run,
    free_run_interval,
    one_step_ahead,
    one_step_ahead_interval,
    read_dataset_csv,
    read_model_file,
    write_dataset_csv,
    write_model_file,
)
from .selection import SelectionReport, aic, err_rank, select_structure
from .signals import duffing_ueda_simulate, prbs

__version__ = "0.1.0"

__all__ = [
    "Interval",
    "hull",
    "intersect",
    "IntervalVector",
    "IntervalMatrix",
    "SolverConfig",
    "mat_mul",
    "mat_vec",
    "solve_verified",
    "point_least_squares",
    "interval_least_squares",
    "RegressorTerm",
    "ModelStructure",
    "Dataset",
    "candidate_terms",
    "build_regressor_matrix",
    "build_interval_regressor_matrix",
    "one_step_ahead",
    "one_step_ahead_interval",
    "free_run",
    "free_run_interval",
    "read_dataset_csv",
    "write_dataset_csv",
    "read_model_file",
    "write_model_file",
    "SelectionReport",
    "err_rank",
    "aic",
    "select_structure",
    "EstimationResult",
    "WideningPolicy",
    "estimate",
    "cover_point_estimate",
    "rmse_point",
    "rmse_interval",
    "duffing_ueda_simulate",
    "prbs",
    "NarxivError",
    "backend_name",
    "__version__",
]
