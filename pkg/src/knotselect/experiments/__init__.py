"""doc"""
from .synthetic import (
    BimodalGauss,
    SyntheticData,
    SyntheticSpec,
    evaluation_seed,
    gen_synthetic,
    mse_monte_carlo,
)
from .selection import (
    FitReport,
    KFit,
    select_K_by_bic,
)
from .benchmark import (
    BenchInstance,
    bench_monotone_vs_nonmonotone,
    compare_with_aspline,
    log_mse_summary,
    summarize_ratios,
    sweep,
    timing_ratio,
)

__all__ = [
    'BenchInstance',
    'BimodalGauss',
    'FitReport',
    'KFit',
    'SyntheticData',
    'SyntheticSpec',
    'bench_monotone_vs_nonmonotone',
    'compare_with_aspline',
    'evaluation_seed',
    'gen_synthetic',
    'log_mse_summary',
    'mse_monte_carlo',
    'select_K_by_bic',
    'summarize_ratios',
    'sweep',
    'timing_ratio',
]
