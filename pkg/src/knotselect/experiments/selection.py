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
from dataclasses import dataclass, field, replace
from functools import partial
from typing import (
    Any,
    Dict,
    List,
    Optional,
    Sequence,
)

import numpy as np
import pandas as pd

from knotselect.aspline import (
    bic,
    reestimate,
    residual_sum_of_squares,
)
from knotselect.basis import (
    ArrayLike,
    KnotGrid,
    SplineModel,
)
from knotselect.config import (
    FitConfig,
    get_logger,
)
from knotselect.exceptions import (
    KnotSelectError,
    KnotSelectParameterError,
    KnotSelectRankError,
)
from knotselect.gist import (
    GistParams,
    SolverResult,
    gist_solve,
)
from knotselect.penalty import project_top_k
from knotselect.reduction import (
    ReducedProblem,
    build_problem,
)
from knotselect.utils import run_jobs

log = get_logger('Selection')

TABLE_COLUMNS = ['K', 'n_knots', 'ssr', 'bic', 'objective', 'iterations', 'converged', 'error']


@dataclass
class KFit:
    """the solver run for one K and its re-estimated spline"""
    K: int
    result: SolverResult
    selected: List[int]
    model: Optional[SplineModel]
    ssr: float
    bic: float
    error: Optional[str] = None

    def to_row(self) -> Dict[str, Any]:
        """one line of the selection table"""
        return {
            'K': self.K,
            'n_knots': len(self.selected),
            'ssr': self.ssr,
            'bic': self.bic,
            'objective': self.result.objective,
            'iterations': self.result.iterations,
            'converged': self.result.converged,
            'error': self.error,
        }


@dataclass
class FitReport:
    """the BIC minimizing K with the full per K table"""
    best: KFit
    table: pd.DataFrame
    problem: ReducedProblem
    fits: List[KFit] = field(default_factory=list)

    @property
    def K(self) -> int:  # noqa: N802
        """the selected knot budget"""
        return self.best.K


def _fit_one(problem: ReducedProblem, grid: KnotGrid, xs: np.ndarray, ys: np.ndarray,
             K: int, params: GistParams) -> KFit:  # noqa: N803
    try:
        result = gist_solve(problem, None, K, params)
    except KnotSelectError as e:
        e.params = {**(e.params or {}), 'K': K}
        raise

    selected = list(result.active_knots)
    try:
        model = reestimate(grid, xs, ys, selected)
    except KnotSelectRankError as e:
        log.warning('select_K_by_bic() K=%d re-estimation is rank deficient', K)
        return KFit(K=K, result=result, selected=selected, model=None,
                    ssr=math.nan, bic=math.inf, error=e.message)
    ssr = residual_sum_of_squares(model, xs, ys)
    score = bic(xs.size, ssr, len(selected) + grid.p + 1)
    return KFit(K=K, result=result, selected=selected, model=model, ssr=ssr, bic=score)


def _warm_path(problem: ReducedProblem, grid: KnotGrid, xs: np.ndarray, ys: np.ndarray,
               ks: Sequence[int], params: GistParams) -> List[KFit]:
    """increasing K, each solve starting from the previous solution"""
    fits: List[KFit] = []
    beta0: Optional[np.ndarray] = params.beta0
    for k in ks:
        start = None if beta0 is None else project_top_k(beta0, k)
        fit = _fit_one(problem, grid, xs, ys, k, replace(params, beta0=start))
        fits.append(fit)
        beta0 = fit.result.beta
    return fits


def select_K_by_bic(xs: ArrayLike,  # noqa: N802
                    ys: ArrayLike,
                    grid: KnotGrid,
                    K_grid: Sequence[int],  # noqa: N803
                    config: Optional[FitConfig] = None,
                    workers: Optional[int] = None,
                    warm_start: bool = True,
                    ) -> FitReport:
    """
    solve once per K, re-estimate on the knots each solution uses and keep
    the smallest BIC; ties go to the smaller K

    with `warm_start` the K values run in increasing order on one thread,
    each from the previous solution cut to its K largest entries; without
    it they run cold from beta = 0 on `workers` threads
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    ks = sorted(set(int(k) for k in K_grid))
    if not ks:
        raise KnotSelectParameterError('K grid can"t be empty')
    for k in ks:
        if not 0 <= k <= grid.l - 1:
            raise KnotSelectParameterError(
                f'K <{k}> must lie in [0, l-1] = [0, {grid.l - 1}]', params={'K': k})

    config = config or FitConfig(l=grid.l, p=grid.p, K_grid=ks)
    params = GistParams.from_config(config)
    problem = build_problem(grid, xs, ys, c=config.c, safety=config.gamma_safety)

    fits: List[KFit]
    if warm_start:
        fits = _warm_path(problem, grid, xs, ys, ks, params)
    else:
        fits = run_jobs(
            [partial(_fit_one, problem, grid, xs, ys, k, params) for k in ks],
            workers,
        )
    table = pd.DataFrame([fit.to_row() for fit in fits], columns=TABLE_COLUMNS)

    usable = [fit for fit in fits if fit.model is not None]
    if not usable:
        raise KnotSelectRankError(
            'every K of the grid gives a rank deficient re-estimation',
            params={'K_grid': ks})
    best = min(usable, key=lambda fit: (fit.bic, fit.K))
    log.info('select_K_by_bic() K=%d knots=%d bic=%.6g', best.K, len(best.selected), best.bic)
    return FitReport(best=best, table=table, problem=problem, fits=fits)
