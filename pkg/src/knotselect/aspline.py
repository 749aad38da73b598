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
from dataclasses import dataclass, field
from functools import partial
from typing import (
    Any,
    Dict,
    List,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np
import pandas as pd
from scipy import linalg
from scipy.linalg import lapack

from knotselect.basis import (
    ArrayLike,
    KnotGrid,
    SplineModel,
    design_matrix,
)
from knotselect.config import get_logger
from knotselect.difference import higher_diff
from knotselect.exceptions import (
    KnotSelectInstabilityError,
    KnotSelectKnotError,
    KnotSelectParameterError,
    KnotSelectRankError,
)
from knotselect.utils import run_jobs

log = get_logger('Aspline')

# smallest eigenvalue of a ridge system, relative to ||B'B||, below which it is near singular
NEAR_SINGULAR = 1e-8


@dataclass
class AsplineParams:
    """
    adaptive ridge settings: penalty weight `lam`, the weight regularizer
    `epsilon` and the fixed point iteration limits
    """
    lam: float
    epsilon: float = 1e-5
    max_iter: int = 100
    tol: float = 1e-6

    def __post_init__(self) -> None:
        if not self.lam > 0:
            raise KnotSelectParameterError(f'lambda <{self.lam}> must be positive')
        if not self.epsilon > 0:
            raise KnotSelectParameterError(f'epsilon <{self.epsilon}> must be positive')
        if self.max_iter < 1:
            raise KnotSelectParameterError(f'max_iter <{self.max_iter}> must be positive')
        if not self.tol > 0:
            raise KnotSelectParameterError(f'tol <{self.tol}> must be positive')


def default_lambda_grid() -> np.ndarray:
    """1^2 1e-4, 2^2 1e-4, ..., 100^2 1e-4"""
    return np.arange(1, 101) ** 2 * 1e-4


def _unit_rows(D: np.ndarray) -> np.ndarray:  # noqa: N803
    norms = np.linalg.norm(D, axis=1, keepdims=True)
    return D / np.where(norms > 0, norms, 1.0)


def _ridge_solve(system: np.ndarray, rhs: np.ndarray, data_scale: float,
                 iteration: int, lam: float) -> np.ndarray:
    """solve a symmetric ridge system, turning ill conditioning into an instability error"""
    params = {'iteration': iteration, 'lambda': lam}
    smallest = float(linalg.eigvalsh(system, subset_by_index=[0, 0])[0])
    if smallest <= NEAR_SINGULAR * data_scale:
        raise KnotSelectInstabilityError(
            f'ridge system is near singular, smallest eigenvalue {smallest:.3g}',
            params={**params, 'smallest': smallest})
    try:
        factor = linalg.cho_factor(system)
    except linalg.LinAlgError as e:
        raise KnotSelectInstabilityError(f'ridge system is singular: {e}', params=params) from e
    # the reciprocal condition estimate linalg.solve warns on
    rcond, _ = lapack.dpocon(factor[0], np.linalg.norm(system, 1))
    if rcond < np.finfo(float).eps:
        raise KnotSelectInstabilityError(
            f'ridge system is ill conditioned, reciprocal condition {rcond:.3g}',
            params={**params, 'rcond': float(rcond)})
    solution = linalg.cho_solve(factor, rhs)
    if not np.all(np.isfinite(solution)):
        raise KnotSelectInstabilityError('ridge solution is not finite', params=params)
    return solution


def adaptive_ridge_fit(B: np.ndarray, D: np.ndarray, y: ArrayLike,  # noqa: N803
                       params: AsplineParams) -> Tuple[np.ndarray, List[int]]:
    """
    adaptive ridge approximation of an l0 penalty on the differences D alpha

    alpha <- (B'B + lam D' W D)^{-1} B'y with W_ii = 1 / ((D alpha)_i^2 + eps^2),
    iterated to a fixed point; D is taken with unit rows so that epsilon is
    on the scale of the coefficients

    :return: the coefficients and the 1-based indices of the selected knots
    """
    y = np.asarray(y, dtype=float)
    D = _unit_rows(D)  # pylint: disable=invalid-name
    gram = B.T @ B
    rhs = B.T @ y
    data_scale = float(linalg.eigvalsh(gram, subset_by_index=[gram.shape[0] - 1] * 2)[0])
    weights = np.ones(D.shape[0])
    alpha: Optional[np.ndarray] = None

    for iteration in range(params.max_iter):
        system = gram + params.lam * (D.T * weights) @ D
        candidate = _ridge_solve(system, rhs, data_scale, iteration, params.lam)
        differences = D @ candidate
        weights = 1.0 / (differences ** 2 + params.epsilon ** 2)
        done = alpha is not None and \
            np.linalg.norm(candidate - alpha) <= params.tol * np.linalg.norm(alpha)
        alpha = candidate
        if done:
            break
    else:
        log.debug('adaptive_ridge_fit() lambda=%.4g stopped at max_iter=%d',
                  params.lam, params.max_iter)

    assert alpha is not None
    differences = D @ alpha
    selected = np.flatnonzero(weights * differences ** 2 > 0.5)
    return alpha, [int(i) + 1 for i in selected]


def reestimate(grid: KnotGrid, xs: ArrayLike, y: ArrayLike,
               selected_knots: Sequence[int]) -> SplineModel:
    """
    least squares fit on a grid keeping only the selected candidate knots
    t_i (1-based), with t_0, t_l and the exterior knots of `grid`
    """
    indices = sorted(set(int(i) for i in selected_knots))
    if any(not 1 <= i <= grid.l - 1 for i in indices):
        raise KnotSelectKnotError(
            f'selected knots {indices} are not candidate indices in [1, {grid.l - 1}]')
    p = grid.p
    knots = np.concatenate([
        grid.knots[:p + 1],
        grid.knots[[i + p for i in indices]],
        grid.knots[p + grid.l:],
    ])
    reduced = KnotGrid.from_knots(knots, p)
    matrix = design_matrix(reduced, xs)
    coefficients, _, rank, _ = linalg.lstsq(matrix, np.asarray(y, dtype=float))
    if rank < matrix.shape[1]:
        raise KnotSelectRankError(
            f'design on {len(indices)} selected knots has rank {rank} < {matrix.shape[1]}',
            params={'rank': int(rank), 'columns': int(matrix.shape[1])})
    return SplineModel(reduced, coefficients)


def bic(n: int, ssr: float, df: int) -> float:
    """n ln(ssr / n) + df ln(n); -inf for a perfect fit"""
    if n < 1 or df < 1:
        raise KnotSelectParameterError(f'invalid BIC arguments n={n}, df={df}')
    if ssr <= 0:
        return -math.inf
    return n * math.log(ssr / n) + df * math.log(n)


def residual_sum_of_squares(model: SplineModel, xs: ArrayLike, y: ArrayLike) -> float:
    """sum of squared residuals of a fitted spline"""
    residual = np.asarray(y, dtype=float) - model(xs)
    return float(residual @ residual)


@dataclass
class AsplineFit:
    """one adaptive ridge fit with its re-estimated spline and score"""
    lam: float
    alpha: np.ndarray
    selected: List[int]
    model: SplineModel
    ssr: float
    bic: float

    def to_dict(self) -> Dict[str, Any]:
        """json friendly summary"""
        return {
            'lambda': self.lam,
            'selected': list(self.selected),
            'ssr': self.ssr,
            'bic': self.bic,
        }


def aspline_fit(grid: KnotGrid, xs: ArrayLike, y: ArrayLike,
                params: AsplineParams) -> AsplineFit:
    """adaptive ridge on the full grid, then re-estimation on its knots"""
    xs = np.asarray(xs, dtype=float)
    y = np.asarray(y, dtype=float)
    _, _, D = higher_diff(grid)  # pylint: disable=invalid-name
    alpha, selected = adaptive_ridge_fit(design_matrix(grid, xs), D, y, params)
    model = reestimate(grid, xs, y, selected)
    ssr = residual_sum_of_squares(model, xs, y)
    return AsplineFit(
        lam=params.lam,
        alpha=alpha,
        selected=selected,
        model=model,
        ssr=ssr,
        bic=bic(xs.size, ssr, len(selected) + grid.p + 1),
    )


@dataclass
class AsplineSelection:
    """the BIC minimizing fit over a lambda grid, with the whole sweep"""
    best: AsplineFit
    table: pd.DataFrame
    unstable: int = 0
    fits: List[AsplineFit] = field(default_factory=list)


def _fit_lambda(grid: KnotGrid, xs: ArrayLike, y: ArrayLike, lam: float,
                epsilon: float) -> Tuple[Dict[str, Any], Optional[AsplineFit]]:
    try:
        fit = aspline_fit(grid, xs, y, AsplineParams(lam=lam, epsilon=epsilon))
    except (KnotSelectInstabilityError, KnotSelectRankError) as e:
        return {'lambda': lam, 'n_knots': None, 'ssr': None,
                'bic': math.inf, 'error': e.message}, None
    return {'lambda': fit.lam, 'n_knots': len(fit.selected), 'ssr': fit.ssr,
            'bic': fit.bic, 'error': None}, fit


def select_lambda_by_bic(grid: KnotGrid,
                         xs: ArrayLike,
                         y: ArrayLike,
                         lambdas: Optional[Sequence[float]] = None,
                         epsilon: float = 1e-5,
                         workers: Optional[int] = None,
                         ) -> AsplineSelection:
    """
    sweep lambda on `workers` threads, re-estimate on the selected knots and
    keep the smallest BIC; unstable lambdas are recorded with BIC = inf and
    their error
    """
    grid_values = default_lambda_grid() if lambdas is None else np.asarray(lambdas, dtype=float)
    if grid_values.size == 0:
        raise KnotSelectParameterError('lambda grid can"t be empty')

    outcomes = run_jobs(
        [partial(_fit_lambda, grid, xs, y, float(lam), epsilon) for lam in grid_values],
        workers,
    )
    rows = [row for row, _ in outcomes]
    fits = [fit for _, fit in outcomes if fit is not None]

    table = pd.DataFrame(rows, columns=['lambda', 'n_knots', 'ssr', 'bic', 'error'])
    if not fits:
        raise KnotSelectInstabilityError(
            'every lambda of the grid is numerically unstable',
            params={'lambdas': grid_values.tolist()})
    best = min(fits, key=lambda item: item.bic)
    unstable = int(table['error'].notna().sum())
    log.info('select_lambda_by_bic() lambda=%.4g knots=%d unstable=%d',
             best.lam, len(best.selected), unstable)
    return AsplineSelection(best=best, table=table, unstable=unstable, fits=fits)


__all__ = [
    'AsplineFit',
    'AsplineParams',
    'AsplineSelection',
    'adaptive_ridge_fit',
    'aspline_fit',
    'bic',
    'default_lambda_grid',
    'reestimate',
    'residual_sum_of_squares',
    'select_lambda_by_bic',
]
