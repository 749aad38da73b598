"""
knotselect - B-spline regression with simultaneous knot selection

Licensed under the Apache License, Version 2.0 (the 'License');
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an 'AS IS' BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, replace
from functools import partial
from typing import (
    Any,
    Dict,
    List,
    Optional,
    Sequence,
    Tuple,
)

import pandas as pd

from knotselect.aspline import select_lambda_by_bic
from knotselect.config import (
    DEFAULT_MAX_ITER,
    DEFAULT_MC_SAMPLES,
    DEFAULT_ORDER,
    FitConfig,
    get_logger,
)
from knotselect.exceptions import (
    KnotSelectInstabilityError,
    KnotSelectParameterError,
    KnotSelectRankError,
)
from knotselect.gist import (
    GistParams,
    SolverResult,
    gist_solve,
)
from knotselect.reduction import build_problem
from knotselect.utils import run_jobs

from .selection import select_K_by_bic
from .synthetic import (
    SyntheticSpec,
    evaluation_seed,
    gen_synthetic,
    mse_monte_carlo,
)

log = get_logger('Benchmark')

MONOTONE_WINDOW = 1
NONMONOTONE_WINDOW = 10
DEFAULT_RETRIES = 10

# the three axes of the timing study, each varied around l=100, K=10, c=0
DEFAULT_SWEEPS: Dict[str, List[Any]] = {
    'l': [25, 50, 100, 200],
    'K': [5, 10, 15, 20],
    'c': [0.0, 1e-2, 1.0, 1e2],
}


@dataclass(frozen=True)
class BenchInstance:
    """one setting of the timing study on random_coef data"""
    n: int = 200
    l: int = 100  # noqa: E741
    K: int = 10
    c: float = 0.0
    p: int = DEFAULT_ORDER

    def __post_init__(self) -> None:
        if not 0 <= self.K <= self.l - 1:
            raise KnotSelectParameterError(
                f'K <{self.K}> must lie in [0, l-1] = [0, {self.l - 1}]')
        if self.c < 0:
            raise KnotSelectParameterError(f'smoothing weight c <{self.c}> must be nonnegative')


def sweep(axis: str, values: Optional[Sequence[Any]] = None,
          base: Optional[BenchInstance] = None) -> List[BenchInstance]:
    """instances that vary one of `l`, `K` or `c` of `base`"""
    if axis not in DEFAULT_SWEEPS:
        raise KnotSelectParameterError(
            f'unknown sweep axis <{axis}>, expected one of {list(DEFAULT_SWEEPS)}')
    base = base or BenchInstance()
    values = DEFAULT_SWEEPS[axis] if values is None else values
    return [replace(base, **{axis: value}) for value in values]


def timing_ratio(tau_mono: float, tau_non: float) -> float:
    """
    log2(tau_mono / tau_non), both clamped to the resolution of the process
    clock so that instant runs compare as equal
    """
    floor = time.get_clock_info('process_time').resolution
    return math.log2(max(tau_mono, floor) / max(tau_non, floor))


def _timed_pair(instance: BenchInstance, seed: int,
                max_iter: int) -> Tuple[SolverResult, SolverResult]:
    data = gen_synthetic(SyntheticSpec(kind='random_coef', n=instance.n, l=instance.l,
                                       p=instance.p, seed=seed))
    problem = build_problem(data.grid, data.xs, data.ys, c=instance.c)
    mono = gist_solve(problem, None, instance.K,
                      GistParams(M=MONOTONE_WINDOW, max_iter=max_iter))
    non = gist_solve(problem, None, instance.K,
                     GistParams(M=NONMONOTONE_WINDOW, max_iter=max_iter))
    return mono, non


def bench_monotone_vs_nonmonotone(instances: Sequence[BenchInstance],
                                  repetitions: int,
                                  seed: int = 0,
                                  max_iter: int = DEFAULT_MAX_ITER,
                                  ) -> pd.DataFrame:
    """
    CPU time of the monotone (M=1) and the nonmonotone (M=10) line search
    on the same data, one row per instance and repetition

    repetition r of every instance draws its data from seed + r; the runs
    are sequential so that timings do not compete for cores
    """
    if repetitions < 1:
        raise KnotSelectParameterError(f'repetitions <{repetitions}> must be positive')

    rows: List[Dict[str, Any]] = []
    for instance in instances:
        for repetition in range(repetitions):
            mono, non = _timed_pair(instance, seed + repetition, max_iter)
            rows.append({
                **asdict(instance),
                'repetition': repetition,
                'seed': seed + repetition,
                'tau_mono': mono.cpu_time,
                'tau_non': non.cpu_time,
                'wall_mono': mono.wall_time,
                'wall_non': non.wall_time,
                'iter_mono': mono.iterations,
                'iter_non': non.iterations,
                'converged_mono': mono.converged,
                'converged_non': non.converged,
                'log2_ratio': timing_ratio(mono.cpu_time, non.cpu_time),
            })
        log.info('bench_monotone_vs_nonmonotone() %s done', instance)
    return pd.DataFrame(rows)


def summarize_ratios(table: pd.DataFrame,
                     by: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """
    quartiles of log2(tau_mono / tau_non) with the share of instances where
    the nonmonotone search is faster (ratio > 0) and at least twice as fast
    (ratio >= 1)
    """
    def _summary(ratios: pd.Series) -> pd.Series:
        return pd.Series({
            'count': int(ratios.size),
            'q1': ratios.quantile(0.25),
            'median': ratios.median(),
            'q3': ratios.quantile(0.75),
            'faster': float((ratios > 0).mean()),
            'twice_as_fast': float((ratios >= 1).mean()),
        })

    if not by:
        return _summary(table['log2_ratio']).to_frame().T
    return table.groupby(list(by))['log2_ratio'].apply(_summary).unstack().reset_index()


def _compare_once(spec: SyntheticSpec, repetition: int, K_grid: Sequence[int],  # noqa: N803
                  lambdas: Optional[Sequence[float]], samples: int,
                  max_retries: int) -> Dict[str, Any]:
    config = FitConfig(p=spec.p, l=spec.l, K_grid=list(K_grid), M=NONMONOTONE_WINDOW)
    first = spec.seed + repetition * (max_retries + 1)
    discarded = 0
    for seed in range(first, first + max_retries + 1):
        data = gen_synthetic(spec.with_seed(seed))
        try:
            aspline = select_lambda_by_bic(data.grid, data.xs, data.ys, lambdas, workers=1)
        except (KnotSelectInstabilityError, KnotSelectRankError) as e:
            log.info('compare_with_aspline() seed=%d discarded: %s', seed, e.message)
            discarded += 1
            continue
        report = select_K_by_bic(data.xs, data.ys, data.grid, K_grid, config, workers=1)
        assert report.best.model is not None
        scoring = evaluation_seed(seed)
        return {
            'repetition': repetition,
            'seed': seed,
            'discarded': discarded,
            'K': report.K,
            'proposed_knots': len(report.best.selected),
            'proposed_log_mse': math.log(mse_monte_carlo(
                data.truth, report.best.model, samples, scoring)),
            'lambda': aspline.best.lam,
            'aspline_knots': len(aspline.best.selected),
            'aspline_log_mse': math.log(mse_monte_carlo(
                data.truth, aspline.best.model, samples, scoring)),
            'unstable_lambdas': aspline.unstable,
        }
    log.warning('compare_with_aspline() repetition=%d gave up after %d data sets',
                repetition, discarded)
    return {
        'repetition': repetition,
        'seed': None,
        'discarded': discarded,
        'K': None,
        'proposed_knots': None,
        'proposed_log_mse': math.nan,
        'lambda': None,
        'aspline_knots': None,
        'aspline_log_mse': math.nan,
        'unstable_lambdas': None,
    }


# pylint: disable=too-many-arguments
def compare_with_aspline(spec: SyntheticSpec,
                         repetitions: int,
                         K_grid: Sequence[int] = tuple(range(1, 21)),  # noqa: N803
                         lambdas: Optional[Sequence[float]] = None,
                         samples: int = DEFAULT_MC_SAMPLES,
                         max_retries: int = DEFAULT_RETRIES,
                         workers: Optional[int] = None,
                         ) -> pd.DataFrame:
    """
    natural log Monte Carlo MSE of the BIC selected fits of both methods

    a data set on which no lambda of the adaptive ridge is stable is
    discarded and drawn again from the next seed of the repetition's own
    stream, at most `max_retries` times
    """
    if repetitions < 1:
        raise KnotSelectParameterError(f'repetitions <{repetitions}> must be positive')
    ks = [k for k in K_grid if k <= spec.l - 1]
    if not ks:
        raise KnotSelectParameterError(f'no K of {list(K_grid)} fits l={spec.l}')

    rows = run_jobs(
        [partial(_compare_once, spec, repetition, ks, lambdas, samples, max_retries)
         for repetition in range(repetitions)],
        workers,
    )
    table = pd.DataFrame(rows)
    table.insert(0, 'l', spec.l)
    table.insert(0, 'n', spec.n)
    return table


def log_mse_summary(table: pd.DataFrame) -> pd.DataFrame:
    """median and quartiles of the log MSE of both methods"""
    columns = ['proposed_log_mse', 'aspline_log_mse']
    return table[columns].quantile([0.25, 0.5, 0.75]).rename_axis('quantile').reset_index()


__all__ = [
    'BenchInstance',
    'DEFAULT_SWEEPS',
    'bench_monotone_vs_nonmonotone',
    'compare_with_aspline',
    'log_mse_summary',
    'summarize_ratios',
    'sweep',
    'timing_ratio',
]
