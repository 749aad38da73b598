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
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import (
    Any,
    Callable,
    Deque,
    Dict,
    List,
    Optional,
    Tuple,
)

import numpy as np
from pyee import EventEmitter  # type: ignore

from knotselect.config import (
    DEFAULT_MAX_ITER,
    DEFAULT_NONMONOTONE_WINDOW,
    FitConfig,
    get_logger,
)
from knotselect.exceptions import (
    KnotSelectNumericalError,
    KnotSelectParameterError,
    KnotSelectSolverError,
)
from knotselect.penalty import (
    prox_with_penalty,
    trimmed_l1,
)
from knotselect.reduction import ReducedProblem

log = get_logger('Gist')

DEFAULT_MAX_BACKTRACKS = 200


def default_tolerance(K: int, l: int, n: int) -> float:  # noqa: N803,E741
    """sqrt(K (l-1) n) * 1e-6, with K = 0 counted as 1"""
    return math.sqrt(max(K, 1) * (l - 1) * n) * 1e-6


# pylint: disable=R0902
@dataclass
class GistParams:
    """
    step size and line search settings of the solver
    """
    rho: float = 2.0
    eta_min: float = 1e-6
    eta_max: float = 1e6
    sigma: float = 1e-2
    M: int = DEFAULT_NONMONOTONE_WINDOW
    beta0: Optional[np.ndarray] = None
    eta0: float = 1.0
    max_iter: int = DEFAULT_MAX_ITER
    tol_scale: Optional[float] = None
    max_backtracks: int = DEFAULT_MAX_BACKTRACKS

    def __post_init__(self) -> None:
        if not self.rho > 1:
            raise KnotSelectParameterError(f'rho <{self.rho}> must exceed 1')
        if not 0 < self.eta_min <= self.eta_max:
            raise KnotSelectParameterError(
                f'step bounds must satisfy 0 < eta_min <{self.eta_min}> '
                f'<= eta_max <{self.eta_max}>')
        if not 0 < self.sigma < 1:
            raise KnotSelectParameterError(f'sigma <{self.sigma}> must lie in (0, 1)')
        if self.M < 1:
            raise KnotSelectParameterError(f'window M <{self.M}> must be at least 1')
        if not self.eta0 > 0:
            raise KnotSelectParameterError(f'initial step eta0 <{self.eta0}> must be positive')
        if self.max_iter < 1:
            raise KnotSelectParameterError(f'max_iter <{self.max_iter}> must be positive')
        if self.tol_scale is not None and self.tol_scale < 0:
            raise KnotSelectParameterError(f'tol_scale <{self.tol_scale}> must be nonnegative')
        if self.max_backtracks < 1:
            raise KnotSelectParameterError(
                f'max_backtracks <{self.max_backtracks}> must be positive')

    @classmethod
    def from_config(cls, config: FitConfig, **overrides: Any) -> GistParams:
        """solver settings of a fit configuration"""
        values: Dict[str, Any] = dict(
            rho=config.rho,
            eta_min=config.eta_min,
            eta_max=config.eta_max,
            sigma=config.sigma,
            M=config.M,
            eta0=config.eta0,
            max_iter=config.max_iter,
            tol_scale=config.tol_scale,
        )
        values.update(overrides)
        return cls(**values)

    def tolerance(self, K: int, l: int, n: int) -> float:  # noqa: N803,E741
        """the stopping threshold on ||beta_t - beta_{t-1}||"""
        if self.tol_scale is not None:
            return self.tol_scale
        return default_tolerance(K, l, n)


@dataclass
class IterationRecord:
    """one accepted step"""
    iteration: int
    objective: float
    eta: float
    backtracks: int
    step_norm: float
    cpu_time: float

    def to_dict(self) -> Dict[str, Any]:
        """json friendly payload"""
        return asdict(self)


# pylint: disable=R0902
@dataclass
class SolverResult:
    """final iterate with its lift and the history of the run"""
    beta: np.ndarray
    alpha: np.ndarray
    objective_trace: np.ndarray
    iterations: int
    line_search_total: int
    converged: bool
    elapsed: float
    cpu_time: float
    gamma: float
    K: int
    active_knots: List[int] = field(default_factory=list)
    eta_trace: np.ndarray = field(default_factory=lambda: np.zeros(0))
    backtrack_trace: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    step_trace: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def objective(self) -> float:
        """F at the final iterate"""
        return float(self.objective_trace[-1])

    @property
    def wall_time(self) -> float:
        """wall clock seconds of the run"""
        return self.elapsed

    @property
    def cardinality(self) -> int:
        """number of nonzeros of beta"""
        return int(np.count_nonzero(self.beta))


def _check_finite(value: float, iteration: int, K: int) -> None:  # noqa: N803
    if not math.isfinite(value):
        raise KnotSelectNumericalError(
            f'objective is not finite at iteration {iteration}',
            params={'iteration': iteration, 'K': K})


def check_budget(beta: np.ndarray, K: int) -> None:  # noqa: N803
    """a stationary point under the exact penalty has at most K nonzeros"""
    used = int(np.count_nonzero(beta))
    if used > K:
        raise KnotSelectSolverError(
            f'solution uses {used} knots, more than the budget K={K}',
            params={'K': K, 'used': used})


def bb_ratio(grad_new: np.ndarray, grad_old: np.ndarray,
             beta_new: np.ndarray, beta_old: np.ndarray,
             eta_min: float = 1e-6) -> float:
    """
    (grad_new - grad_old)'(beta_new - beta_old) / ||beta_new - beta_old||^2,
    eta_min when the iterate did not move
    """
    displacement = beta_new - beta_old
    squared = float(displacement @ displacement)
    if squared == 0:
        return eta_min
    return float((grad_new - grad_old) @ displacement) / squared


class GistSolver(EventEmitter):
    """
    proximal gradient with a Barzilai-Borwein initial step and a
    nonmonotone backtracking line search on the reduced problem

    emits `iteration` with an `IterationRecord` after every accepted step
    and `done` with the `SolverResult`
    """

    def __init__(self, problem: ReducedProblem, params: Optional[GistParams] = None):
        super().__init__()
        self.problem = problem
        self.params = params or GistParams()

    def on(self, event: str, f: Optional[Callable[..., Any]] = None) -> Any:
        """
        listen solver event
        :param event: `iteration` or `done`
        :param f:
        :return:
        """
        log.debug('on() listen event <%s> with <%s>', event, f)
        if f is None:
            return super().on(event)
        super().on(event, f)
        return self

    def _trial(self, beta: np.ndarray, grad: np.ndarray, eta: float, gamma: float,
               K: int, iteration: int) -> Tuple[np.ndarray, float, np.ndarray]:  # noqa: N803
        """prox point of a gradient step with its objective value and gradient"""
        point = beta - grad / eta
        if gamma == 0:
            candidate, penalty = point, 0.0
        else:
            candidate, penalty = prox_with_penalty(point, gamma / eta, K)
        smooth, candidate_grad = self.problem.smooth(candidate)
        value = smooth + gamma * penalty
        _check_finite(value, iteration, K)
        return candidate, value, candidate_grad

    # pylint: disable=too-many-locals
    def solve(self, K: int, gamma: Optional[float] = None) -> SolverResult:  # noqa: N803
        """
        minimize F(beta) = h(beta) + gamma T_K(beta), gamma defaults to the
        exact penalty weight of the problem
        """
        rp = self.problem
        params = self.params
        gamma = rp.gamma if gamma is None else float(gamma)
        if not 0 <= K <= rp.dim:
            raise KnotSelectParameterError(
                f'K <{K}> must lie in [0, l-1] = [0, {rp.dim}]', params={'K': K})
        if gamma < 0:
            raise KnotSelectParameterError(f'gamma <{gamma}> must be nonnegative')
        tolerance = params.tolerance(K, rp.dim + 1, rp.n)

        wall_start = time.perf_counter()
        cpu_start = time.process_time()

        beta = np.zeros(rp.dim) if params.beta0 is None \
            else np.array(params.beta0, dtype=float)
        if beta.shape != (rp.dim,):
            raise KnotSelectParameterError(
                f'beta0 of shape {beta.shape} does not match {rp.dim} candidate knots')
        smooth, grad = rp.smooth(beta)
        value = smooth + gamma * trimmed_l1(beta, K)
        _check_finite(value, 0, K)
        eta = params.eta0
        traced = bool(self.listeners('iteration'))
        window: Deque[float] = deque([value], maxlen=params.M)

        objectives = [value]
        etas: List[float] = []
        backtracks: List[int] = []
        steps: List[float] = []
        converged = False

        for iteration in range(1, params.max_iter + 1):
            reference = max(window)
            count = 0
            while True:
                eta *= params.rho
                candidate, candidate_value, candidate_grad = self._trial(
                    beta, grad, eta, gamma, K, iteration)
                step = candidate - beta
                squared = float(step @ step)
                if candidate_value <= reference - 0.5 * params.sigma * eta * squared:
                    break
                count += 1
                if count > params.max_backtracks:
                    raise KnotSelectNumericalError(
                        f'line search did not terminate at iteration {iteration}',
                        params={'iteration': iteration, 'eta': eta, 'K': K})

            step_norm = math.sqrt(squared)
            objectives.append(candidate_value)
            etas.append(eta)
            backtracks.append(count)
            steps.append(step_norm)
            window.append(candidate_value)
            if traced:
                self.emit('iteration', IterationRecord(
                    iteration=iteration,
                    objective=candidate_value,
                    eta=eta,
                    backtracks=count,
                    step_norm=step_norm,
                    cpu_time=time.process_time() - cpu_start,
                ))

            ratio = bb_ratio(candidate_grad, grad, candidate, beta, params.eta_min)
            beta, grad = candidate, candidate_grad
            if step_norm <= tolerance:
                converged = True
                break
            eta = min(params.eta_max, max(params.eta_min, ratio)) / params.rho

        alpha = rp.lift(beta)
        result = SolverResult(
            beta=beta,
            alpha=alpha,
            objective_trace=np.array(objectives),
            iterations=len(steps),
            line_search_total=int(sum(backtracks)),
            converged=converged,
            elapsed=time.perf_counter() - wall_start,
            cpu_time=time.process_time() - cpu_start,
            gamma=gamma,
            K=K,
            active_knots=[int(i) + 1 for i in np.flatnonzero(beta)],
            eta_trace=np.array(etas),
            backtrack_trace=np.array(backtracks, dtype=int),
            step_trace=np.array(steps),
        )
        if not converged:
            log.warning('solve() K=%d stopped at max_iter=%d without convergence',
                        K, params.max_iter)
        if gamma > 0 and gamma >= rp.gamma:
            if converged:
                check_budget(beta, K)
            elif result.cardinality > K:
                log.warning('solve() K=%d unconverged iterate uses %d knots',
                            K, result.cardinality)
        log.debug('solve() K=%d gamma=%.6g iterations=%d objective=%.6g',
                  K, gamma, result.iterations, result.objective)
        self.emit('done', result)
        return result


def gist_solve(rp: ReducedProblem,
               gamma: Optional[float],
               K: int,  # noqa: N803
               params: Optional[GistParams] = None) -> SolverResult:
    """solve the reduced problem once without listeners"""
    return GistSolver(rp, params).solve(K, gamma)

