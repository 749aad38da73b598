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
from functools import reduce
from typing import (
    List,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from knotselect.basis import KnotGrid
from knotselect.config import get_logger
from knotselect.exceptions import (
    KnotSelectDimensionError,
    KnotSelectSingularityError,
)

log = get_logger('Difference')

DiffTriple = Tuple[np.ndarray, np.ndarray, np.ndarray]

# multiple of machine epsilon times |D||alpha| below which (D alpha)_i is roundoff
ROUNDOFF_FACTOR = 1e3


def first_diff_matrices(l: int) -> DiffTriple:  # noqa: E741
    """
    (D+, D-, D) of order one, each (l-1) x l; row i of D+ picks alpha_{i+1},
    row i of D- picks alpha_i
    """
    if l < 2:
        raise KnotSelectDimensionError(f'first differences need l >= 2, got {l}')
    eye = np.eye(l)
    d_plus = eye[1:]
    d_minus = eye[:-1]
    return d_plus, d_minus, d_plus - d_minus


def _spans(grid: KnotGrid, q: int) -> np.ndarray:
    """t_i - t_{i-q} for i = 1..l-1+q"""
    index = np.arange(1, grid.l + q)
    return grid.knots[index + grid.p] - grid.knots[index - q + grid.p]


def delta_matrix(grid: KnotGrid, q: int) -> np.ndarray:
    """
    the (l-1+q) x (l+q) scaled difference whose row i is
    (-1, 1) / (t_i - t_{i-q}); it adjusts for the spacing of the knots
    """
    if not 1 <= q <= grid.p:
        raise KnotSelectDimensionError(
            f'q <{q}> must lie in [1, p] = [1, {grid.p}]')
    spans = _spans(grid, q)
    _, _, plain = first_diff_matrices(grid.l + q)
    return plain / spans[:, None]


def higher_diff(grid: KnotGrid) -> DiffTriple:
    """(D+, D-, D) of order p+1, built as D(1) Delta(2) ... Delta(p+1)"""
    d_plus, d_minus, _ = first_diff_matrices(grid.l)
    deltas = [delta_matrix(grid, q) for q in range(1, grid.p + 1)]
    d_plus = reduce(np.matmul, deltas, d_plus)
    d_minus = reduce(np.matmul, deltas, d_minus)
    return d_plus, d_minus, d_plus - d_minus


def _factor_widths(grid: KnotGrid) -> List[np.ndarray]:
    return [np.ones(grid.l - 1)] + [_spans(grid, q) for q in range(1, grid.p + 1)]


def _extended_factor(widths: np.ndarray, scalar: float, size: int) -> np.ndarray:
    """square factor: scaled difference rows on top, scalar diagonal below"""
    rows = widths.size
    factor = np.zeros((size, size))
    factor[np.arange(rows), np.arange(rows)] = -1.0 / widths
    factor[np.arange(rows), np.arange(1, rows + 1)] = 1.0 / widths
    factor[np.arange(rows, size), np.arange(rows, size)] = scalar
    return factor


def _inverse_factor(widths: np.ndarray, scalar: float, size: int) -> np.ndarray:
    """closed form inverse of `_extended_factor`, upper triangular"""
    rows = widths.size
    inverse = np.zeros((size, size))
    inverse[:rows, :rows] = -np.triu(np.ones((rows, rows))) * widths[None, :]
    inverse[:rows, rows] = 1.0 / scalar
    inverse[np.arange(rows, size), np.arange(rows, size)] = 1.0 / scalar
    return inverse


def _apply_inverse_factor(widths: np.ndarray, scalar: float, matrix: np.ndarray) -> np.ndarray:
    """
    left multiply by the closed form inverse without forming it: the upper
    triangular block is a reverse cumulative sum of the width-scaled rows
    """
    rows = widths.size
    weighted = widths[:, None] * matrix[:rows]
    top = -np.cumsum(weighted[::-1], axis=0)[::-1] + matrix[rows] / scalar
    return np.vstack([top, matrix[rows:] / scalar])


# pylint: disable=R0902
@dataclass(frozen=True, eq=False)
class DifferenceOperators:
    """
    difference matrices of order p+1 of a grid, the invertible extension
    D_hat = (D; A) and its inverse Sigma = (Sigma1 Sigma2)
    """
    grid: KnotGrid
    D_plus: np.ndarray
    D_minus: np.ndarray
    D: np.ndarray
    D_hat: np.ndarray
    Sigma: np.ndarray
    Sigma1: np.ndarray
    Sigma2: np.ndarray
    A: np.ndarray
    s: np.ndarray

    def factor_widths(self) -> List[np.ndarray]:
        """row divisors of every factor, ones for the first difference"""
        return _factor_widths(self.grid)

    def inverse_factors(self) -> List[np.ndarray]:
        """
        dense closed form inverses of D_hat(1), Delta_hat(2), ..., Delta_hat(p+1)
        """
        size = self.grid.n_basis
        return [_inverse_factor(widths, float(scalar), size)
                for widths, scalar in zip(self.factor_widths(), self.s)]


def extend_and_invert(grid: KnotGrid,
                      s: Optional[Sequence[float]] = None) -> DifferenceOperators:
    """
    extend D(1) and every Delta(q+1) with a scalar diagonal s_q, so that
    D_hat = D_hat(1) Delta_hat(2) ... Delta_hat(p+1) is square and
    non-singular, and assemble Sigma = D_hat^{-1} from the closed form
    inverses of the factors
    """
    p = grid.p
    size = grid.n_basis
    scalars = np.ones(p + 1) if s is None else np.asarray(s, dtype=float)
    if scalars.shape != (p + 1,):
        raise KnotSelectDimensionError(
            f'expected {p + 1} expansion scalars, got {scalars.shape}')
    if np.any(scalars == 0):
        raise KnotSelectSingularityError(
            'expansion scalars must be nonzero', params={'s': scalars.tolist()})

    d_plus, d_minus, d = higher_diff(grid)

    widths = _factor_widths(grid)
    factors = [_extended_factor(width, float(scalar), size)
               for width, scalar in zip(widths, scalars)]
    d_hat = reduce(np.matmul, factors)

    # Sigma = Delta_hat(p+1)^{-1} ... Delta_hat(2)^{-1} D_hat(1)^{-1}
    sigma = np.eye(size)
    for width, scalar in zip(widths, scalars):
        sigma = _apply_inverse_factor(width, float(scalar), sigma)

    log.debug('extend_and_invert() <l=%d, p=%d>', grid.l, p)
    return DifferenceOperators(
        grid=grid,
        D_plus=d_plus,
        D_minus=d_minus,
        D=d,
        D_hat=d_hat,
        Sigma=sigma,
        Sigma1=sigma[:, :grid.l - 1],
        Sigma2=sigma[:, grid.l - 1:],
        A=d_hat[grid.l - 1:],
        s=scalars,
    )


def active_knots(D: np.ndarray, alpha: np.ndarray, tol: float = 1e-8) -> List[int]:  # noqa: N803
    """
    indices i in 1..l-1 of the candidate knots t_i where the polynomial pieces
    of the spline differ, i.e. (D alpha)_i != 0

    an entry counts as zero when it is below tol * ||D alpha||_inf or below
    the roundoff level of computing it
    """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.ndim != 1 or D.shape[1] != alpha.size:
        raise KnotSelectDimensionError(
            f'alpha of shape {alpha.shape} does not match D of shape {D.shape}')
    if tol < 0:
        raise KnotSelectDimensionError(f'tolerance <{tol}> must be nonnegative')

    values = np.abs(D @ alpha)
    if values.size == 0:
        return []
    roundoff = ROUNDOFF_FACTOR * np.finfo(float).eps * (np.abs(D) @ np.abs(alpha))
    threshold = np.maximum(tol * values.max(), roundoff)
    return [int(i) + 1 for i in np.flatnonzero(values > threshold)]


def piece_leading_coefficients(operators: DifferenceOperators,
                               alpha: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    degree-p coefficients of the polynomial pieces around every candidate knot

    Returns:
        right: right[i-1] is the coefficient on [t_i, t_{i+1})
        left: left[i-1] is the coefficient on [t_{i-1}, t_i)
    """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (operators.grid.n_basis,):
        raise KnotSelectDimensionError(
            f'expected {operators.grid.n_basis} coefficients, got {alpha.shape}')
    return operators.D_plus @ alpha, operators.D_minus @ alpha
