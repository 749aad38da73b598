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

from dataclasses import dataclass
from typing import (
    Optional,
    Sequence,
    Tuple,
)

import numpy as np
from scipy import linalg

from knotselect.basis import (
    ArrayLike,
    KnotGrid,
    design_matrix,
    smoothing_matrix,
)
from knotselect.config import (
    DEFAULT_GAMMA_SAFETY,
    get_logger,
)
from knotselect.difference import (
    DifferenceOperators,
    extend_and_invert,
)
from knotselect.exceptions import (
    KnotSelectDimensionError,
    KnotSelectParameterError,
    KnotSelectRankError,
)
from knotselect.penalty import trimmed_l1

log = get_logger('Reduction')

# ratio of extreme singular values of B Sigma2 below which it is rank deficient
RANK_RATIO = 1e-10


def check_assumption(B: np.ndarray, Sigma2: np.ndarray) -> Tuple[bool, float]:  # noqa: N803
    """
    whether B Sigma2 has full column rank p+1, i.e. a single polynomial of
    degree p is uniquely determined by the data

    :return: the decision and the ratio of extreme singular values
    """
    block = B @ Sigma2
    if block.shape[0] < block.shape[1]:
        return False, 0.0
    singular = linalg.svdvals(block)
    if singular[0] == 0:
        return False, 0.0
    ratio = float(singular[-1] / singular[0])
    return ratio > RANK_RATIO, ratio


def _penalty_bound(L1: np.ndarray, L2: np.ndarray,  # noqa: N803
                   z1: np.ndarray, z2: np.ndarray, c: float) -> float:
    """max_j (||L1_j|| + sqrt(c) ||L2_j||) * sqrt(||z1||^2 + c ||z2||^2)"""
    if L1.shape[1] == 0:
        return 0.0
    columns = np.linalg.norm(L1, axis=0) + np.sqrt(c) * np.linalg.norm(L2, axis=0)
    residual = np.sqrt(z1 @ z1 + c * (z2 @ z2))
    return float(columns.max() * residual)


# pylint: disable=R0902
@dataclass(frozen=True, eq=False)
class ReducedProblem:
    """
    the knot selection problem in beta = D alpha after the p+1 polynomial
    coordinates beta' have been minimized out:

        h(beta) = 1/2 ||z1 - L1 beta||^2 + c/2 ||z2 - L2 beta||^2
        F(beta) = h(beta) + gamma T_K(beta)

    and beta' = H1 y - H2 beta is the inner minimizer; the solver works with
    the Gram form h(beta) = 1/2 beta'Q beta - b'beta + h0 in l-1 dimensions
    """
    B: np.ndarray
    Dsm: np.ndarray
    ops: DifferenceOperators
    c: float
    y: np.ndarray
    H1: np.ndarray
    H2: np.ndarray
    z1: np.ndarray
    z2: np.ndarray
    L1: np.ndarray
    L2: np.ndarray
    gamma: float
    condition: float
    Q: np.ndarray
    b: np.ndarray
    h0: float

    @property
    def n(self) -> int:
        """number of observations"""
        return self.y.size

    @property
    def dim(self) -> int:
        """l - 1, the number of candidate knots"""
        return self.L1.shape[1]

    def h(self, beta: np.ndarray) -> float:
        """the smooth part of F"""
        r1 = self.z1 - self.L1 @ beta
        r2 = self.z2 - self.L2 @ beta
        return 0.5 * float(r1 @ r1) + 0.5 * self.c * float(r2 @ r2)

    def grad(self, beta: np.ndarray) -> np.ndarray:
        """gradient of h, Q beta - b"""
        return self.Q @ beta - self.b

    def smooth(self, beta: np.ndarray) -> Tuple[float, np.ndarray]:
        """h and its gradient from a single product with Q"""
        product = self.Q @ beta
        value = 0.5 * float(beta @ product) - float(self.b @ beta) + self.h0
        return value, product - self.b

    def objective(self, beta: np.ndarray, K: int,  # noqa: N803
                  gamma: Optional[float] = None) -> float:
        """F(beta) = h(beta) + gamma T_K(beta)"""
        weight = self.gamma if gamma is None else gamma
        return self.h(beta) + weight * trimmed_l1(beta, K)

    def g(self, beta: np.ndarray) -> np.ndarray:
        """polynomial coordinates minimizing the objective for a fixed beta"""
        return self.H1 @ self.y - self.H2 @ beta

    def lipschitz(self) -> float:
        """largest eigenvalue of the Hessian L1'L1 + c L2'L2 of h"""
        if self.Q.size == 0:
            return 0.0
        return float(linalg.eigvalsh(self.Q)[-1])

    def lift(self, beta: np.ndarray) -> np.ndarray:
        """spline coefficients alpha = Sigma (beta; g(beta))"""
        return lift(beta, self)

    def initial_alpha(self) -> np.ndarray:
        """the best single polynomial, the lift of beta = 0"""
        return self.lift(np.zeros(self.dim))


def reduce(B: np.ndarray,  # noqa: N803
           Dsm: np.ndarray,
           ops: DifferenceOperators,
           y: ArrayLike,
           c: float = 0.0,
           safety: float = DEFAULT_GAMMA_SAFETY,
           ) -> ReducedProblem:
    """
    change variables to beta = D alpha and eliminate the p+1 polynomial
    coordinates; the (p+1) x (p+1) inner system is factored once
    """
    y = np.asarray(y, dtype=float)
    if c < 0:
        raise KnotSelectParameterError(f'smoothing weight c <{c}> must be nonnegative')
    if safety <= 1:
        raise KnotSelectParameterError(f'gamma safety <{safety}> must exceed 1')
    size = ops.grid.n_basis
    if B.ndim != 2 or B.shape[1] != size or y.shape != (B.shape[0],):
        raise KnotSelectDimensionError(
            f'design matrix {B.shape} and response {y.shape} do not match {size} basis functions')
    if Dsm.ndim != 2 or Dsm.shape[1] != size:
        raise KnotSelectDimensionError(
            f'smoothing matrix {Dsm.shape} does not match {size} basis functions')

    holds, ratio = check_assumption(B, ops.Sigma2)
    if not holds:
        raise KnotSelectRankError(
            'a single polynomial of degree p is not uniquely determined by the data',
            params={'ratio': ratio, 'n': int(B.shape[0]), 'p': ops.grid.p})

    S1, S2 = B @ ops.Sigma1, B @ ops.Sigma2
    T1, T2 = Dsm @ ops.Sigma1, Dsm @ ops.Sigma2
    gram = S2.T @ S2 + c * (T2.T @ T2)
    try:
        factor = linalg.cho_factor(gram)
    except linalg.LinAlgError as e:
        raise KnotSelectRankError('the polynomial block is not positive definite',
                                  params={'ratio': ratio}) from e

    H1 = linalg.cho_solve(factor, S2.T)
    H2 = linalg.cho_solve(factor, S2.T @ S1 + c * (T2.T @ T1))
    polynomial = H1 @ y
    z1 = y - S2 @ polynomial
    z2 = T2 @ polynomial
    L1 = S1 - S2 @ H2
    L2 = T2 @ H2 - T1

    gamma = safety * _penalty_bound(L1, L2, z1, z2, c)
    log.debug('reduce() <n=%d, l=%d, p=%d, c=%s> gamma=%.6g',
              y.size, ops.grid.l, ops.grid.p, c, gamma)
    return ReducedProblem(
        B=B, Dsm=Dsm, ops=ops, c=float(c), y=y,
        H1=H1, H2=H2, z1=z1, z2=z2, L1=L1, L2=L2,
        gamma=gamma, condition=ratio,
        Q=L1.T @ L1 + c * (L2.T @ L2),
        b=L1.T @ z1 + c * (L2.T @ z2),
        h0=0.5 * float(z1 @ z1) + 0.5 * c * float(z2 @ z2),
    )


def exact_penalty_gamma(rp: ReducedProblem, safety: float = DEFAULT_GAMMA_SAFETY) -> float:
    """
    a penalty weight above which every local minimizer of F has at most K
    nonzeros; zero means the data is fit exactly and any gamma > 0 works
    """
    if safety <= 1:
        raise KnotSelectParameterError(f'gamma safety <{safety}> must exceed 1')
    return safety * _penalty_bound(rp.L1, rp.L2, rp.z1, rp.z2, rp.c)


def lift(beta: ArrayLike, rp: ReducedProblem) -> np.ndarray:
    """alpha = Sigma (beta; H1 y - H2 beta), so that D alpha = beta"""
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (rp.dim,):
        raise KnotSelectDimensionError(f'expected beta of length {rp.dim}, got {beta.shape}')
    return rp.ops.Sigma1 @ beta + rp.ops.Sigma2 @ rp.g(beta)


def objective_F(beta: np.ndarray, rp: ReducedProblem, K: int,  # noqa: N802,N803
                gamma: Optional[float] = None) -> float:
    """F(beta) with the problem's own gamma unless one is given"""
    return rp.objective(beta, K, gamma)


def grad_h(beta: np.ndarray, rp: ReducedProblem) -> np.ndarray:
    """exact gradient of the smooth part h"""
    return rp.grad(beta)


def build_problem(grid: KnotGrid,
                  xs: ArrayLike,
                  y: ArrayLike,
                  c: float = 0.0,
                  s: Optional[Sequence[float]] = None,
                  safety: float = DEFAULT_GAMMA_SAFETY,
                  ) -> ReducedProblem:
    """
    design matrix, second order smoothing difference and the difference
    operators of a grid, reduced in one call
    """
    B = design_matrix(grid, xs)  # pylint: disable=invalid-name
    size = grid.n_basis
    Dsm = smoothing_matrix(size, order=min(2, size - 1))  # pylint: disable=invalid-name
    ops = extend_and_invert(grid, s)
    return reduce(B, Dsm, ops, y, c=c, safety=safety)
