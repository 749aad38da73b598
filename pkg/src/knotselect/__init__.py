"""doc"""
from .config import (
    FitConfig,
    get_logger,
)
from .exceptions import (
    KnotSelectConfigurationError,
    KnotSelectDataError,
    KnotSelectDimensionError,
    KnotSelectDomainError,
    KnotSelectError,
    KnotSelectInstabilityError,
    KnotSelectKnotError,
    KnotSelectNumericalError,
    KnotSelectParameterError,
    KnotSelectRankError,
    KnotSelectSingularityError,
    KnotSelectSolverError,
)
from .basis import (
    KnotGrid,
    SplineModel,
    design_matrix,
    eval_basis,
    eval_spline,
    make_equispaced_grid,
    make_grid_from_interior,
)
from .difference import (
    DifferenceOperators,
    active_knots,
    delta_matrix,
    extend_and_invert,
    first_diff_matrices,
    higher_diff,
)
from .penalty import (
    prox_trimmed_l1,
    trimmed_l1,
)
from .reduction import (
    ReducedProblem,
    build_problem,
    exact_penalty_gamma,
    reduce,
)
from .gist import (
    GistParams,
    GistSolver,
    SolverResult,
    gist_solve,
)
from .aspline import (
    AsplineParams,
    adaptive_ridge_fit,
    aspline_fit,
    reestimate,
    select_lambda_by_bic,
)
from .dataset import (
    Dataset,
    knot_range,
    load_csv,
    load_model,
    save_model,
)
from .version import VERSION

__version__ = VERSION

__all__ = [
    'AsplineParams',
    'Dataset',
    'DifferenceOperators',
    'FitConfig',
    'GistParams',
    'GistSolver',
    'KnotGrid',
    'KnotSelectConfigurationError',
    'KnotSelectDataError',
    'KnotSelectDimensionError',
    'KnotSelectDomainError',
    'KnotSelectError',
    'KnotSelectInstabilityError',
    'KnotSelectKnotError',
    'KnotSelectNumericalError',
    'KnotSelectParameterError',
    'KnotSelectRankError',
    'KnotSelectSingularityError',
    'KnotSelectSolverError',
    'ReducedProblem',
    'SolverResult',
    'SplineModel',
    'active_knots',
    'adaptive_ridge_fit',
    'aspline_fit',
    'build_problem',
    'delta_matrix',
    'design_matrix',
    'eval_basis',
    'eval_spline',
    'exact_penalty_gamma',
    'extend_and_invert',
    'first_diff_matrices',
    'get_logger',
    'gist_solve',
    'higher_diff',
    'knot_range',
    'load_csv',
    'load_model',
    'make_equispaced_grid',
    'make_grid_from_interior',
    'prox_trimmed_l1',
    'reduce',
    'reestimate',
    'save_model',
    'select_lambda_by_bic',
    'trimmed_l1',
    '__version__',
]
