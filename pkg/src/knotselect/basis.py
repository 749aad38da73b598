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
    TYPE_CHECKING,
    List,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from knotselect.config import get_logger
from knotselect.exceptions import (
    KnotSelectDimensionError,
    KnotSelectDomainError,
    KnotSelectKnotError,
    KnotSelectParameterError,
)
from knotselect.types import Curve

if TYPE_CHECKING:
    from knotselect.difference import DifferenceOperators

log = get_logger('Basis')

ArrayLike = Union[Sequence[float], np.ndarray]


def _frozen(values: ArrayLike) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class KnotGrid:
    """
    strictly increasing knots t_{-p} < ... < t_0 < ... < t_l < ... < t_{l+p}

    `knots[i + p]` holds t_i, the data interval is [t_0, t_l)
    """
    order: int
    interior_count: int
    knots: np.ndarray

    def __post_init__(self) -> None:
        if self.order < 0:
            raise KnotSelectParameterError(f'order p <{self.order}> must be nonnegative')
        if self.interior_count < 1:
            raise KnotSelectKnotError(
                f'interior count l <{self.interior_count}> must be positive')
        knots = _frozen(self.knots)
        expected = self.interior_count + 2 * self.order + 1
        if knots.ndim != 1 or knots.size != expected:
            raise KnotSelectKnotError(
                f'expected {expected} knots for l={self.interior_count}, '
                f'p={self.order}, got {knots.size}')
        if not np.all(np.isfinite(knots)):
            raise KnotSelectKnotError('knots must be finite')
        if np.any(np.diff(knots) <= 0):
            raise KnotSelectKnotError('knots must be strictly increasing')
        object.__setattr__(self, 'knots', knots)

    @classmethod
    def from_knots(cls, knots: ArrayLike, p: int) -> KnotGrid:
        """build a grid from the full knot vector of length l + 2p + 1"""
        size = len(knots)
        interior_count = size - 2 * p - 1
        if interior_count < 1:
            raise KnotSelectKnotError(
                f'{size} knots are too few for order p={p}')
        return cls(order=p, interior_count=interior_count, knots=np.asarray(knots))

    @property
    def p(self) -> int:
        """order of the basis"""
        return self.order

    @property
    def l(self) -> int:  # noqa: E743
        """number of intervals of the data range"""
        return self.interior_count

    @property
    def n_basis(self) -> int:
        """number of basis functions, l + p"""
        return self.interior_count + self.order

    def knot(self, i: int) -> float:
        """t_i for i in -p..l+p"""
        if not -self.order <= i <= self.interior_count + self.order:
            raise KnotSelectKnotError(f'knot index <{i}> out of range')
        return float(self.knots[i + self.order])

    @property
    def interior(self) -> np.ndarray:
        """t_0, ..., t_l"""
        return self.knots[self.order:self.order + self.interior_count + 1]

    @property
    def candidates(self) -> np.ndarray:
        """the l - 1 candidate knots t_1, ..., t_{l-1}"""
        return self.knots[self.order + 1:self.order + self.interior_count]

    @property
    def t0(self) -> float:
        """left end of the data interval"""
        return float(self.knots[self.order])

    @property
    def tl(self) -> float:
        """right end of the data interval (excluded)"""
        return float(self.knots[self.order + self.interior_count])

    @property
    def domain(self) -> Tuple[float, float]:
        """the half-open data interval [t_0, t_l)"""
        return self.t0, self.tl


def make_equispaced_grid(t0: float, tl: float, l: int, p: int) -> KnotGrid:  # noqa: E741
    """
    equally spaced interior knots on [t0, tl], the 2p exterior knots continue
    the same spacing on both sides
    """
    if not t0 < tl:
        raise KnotSelectKnotError(
            f'invalid range [{t0}, {tl}): t0 must be smaller than tl',
            params={'t0': t0, 'tl': tl})
    if l < 1:
        raise KnotSelectKnotError(f'interior count l <{l}> must be positive')
    if p < 0:
        raise KnotSelectParameterError(f'order p <{p}> must be nonnegative')

    spacing = (tl - t0) / l
    interior = np.linspace(t0, tl, l + 1)
    left = t0 - spacing * np.arange(p, 0, -1)
    right = tl + spacing * np.arange(1, p + 1)
    return KnotGrid(order=p, interior_count=l,
                    knots=np.concatenate([left, interior, right]))


def make_grid_from_interior(interior: ArrayLike, p: int) -> KnotGrid:
    """
    build a grid from t_0 < ... < t_l; the exterior knots replicate the
    spacing of the first and the last interior interval
    """
    interior = np.asarray(interior, dtype=float)
    if interior.ndim != 1 or interior.size < 2:
        raise KnotSelectKnotError('at least two interior knots are required')
    if np.any(np.diff(interior) <= 0):
        raise KnotSelectKnotError('interior knots must be strictly increasing',
                                  params={'interior': interior.tolist()})
    if p < 0:
        raise KnotSelectParameterError(f'order p <{p}> must be nonnegative')

    left_spacing = interior[1] - interior[0]
    right_spacing = interior[-1] - interior[-2]
    left = interior[0] - left_spacing * np.arange(p, 0, -1)
    right = interior[-1] + right_spacing * np.arange(1, p + 1)
    return KnotGrid(order=p, interior_count=interior.size - 1,
                    knots=np.concatenate([left, interior, right]))


def check_domain(grid: KnotGrid, xs: np.ndarray) -> None:
    """raise a domain error naming the first x outside [t_0, t_l)"""
    inside = np.isfinite(xs) & (xs >= grid.t0) & (xs < grid.tl)
    if not np.all(inside):
        index = int(np.flatnonzero(~inside)[0])
        raise KnotSelectDomainError(
            f'x[{index}] = {xs[index]!r} is outside [{grid.t0}, {grid.tl})',
            params={'index': index, 'x': float(xs[index])})


def _guarded_div(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """num / den with the convention 0/0 = 0"""
    return np.divide(num, den, out=np.zeros_like(num), where=den != 0)


def basis_values(grid: KnotGrid, xs: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """
    the p+1 basis functions that do not vanish at each x

    Starting from the order-0 indicator of the interval [t_m, t_{m+1}) that
    holds x, the Cox-de Boor recursion is lifted order by order; only the
    entries of the recursion triangle that can be nonzero are computed.

    Returns:
        values: (n, p+1) array, values[k, r] = B_{m-p+r}(x_k)
        first: (n,) array, column of values[k, 0] in the design matrix (= m)
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    check_domain(grid, xs)

    p = grid.order
    knots = grid.knots
    first = np.searchsorted(grid.interior, xs, side='right') - 1
    span = first + p

    n = xs.size
    values = np.zeros((n, p + 1))
    values[:, 0] = 1.0
    left = np.zeros((n, p + 1))
    right = np.zeros((n, p + 1))
    for q in range(1, p + 1):
        left[:, q] = xs - knots[span + 1 - q]
        right[:, q] = knots[span + q] - xs
        saved = np.zeros(n)
        for r in range(q):
            temp = _guarded_div(values[:, r], right[:, r + 1] + left[:, q - r])
            values[:, r] = saved + right[:, r + 1] * temp
            saved = left[:, q - r] * temp
        values[:, q] = saved
    return values, first


def design_matrix(grid: KnotGrid, xs: ArrayLike) -> np.ndarray:
    """
    n x (l+p) matrix whose row i holds B_{-p}(x_i), ..., B_{l-1}(x_i)
    """
    values, first = basis_values(grid, xs)
    n = values.shape[0]
    matrix = np.zeros((n, grid.n_basis))
    columns = first[:, None] + np.arange(grid.order + 1)
    matrix[np.arange(n)[:, None], columns] = values
    return matrix


def eval_basis(grid: KnotGrid, x: float) -> np.ndarray:
    """all l+p basis values at a single point"""
    return design_matrix(grid, [x])[0]


def smoothing_matrix(size: int, order: int = 2) -> np.ndarray:
    """ordinary difference matrix of the given order, (size - order) x size"""
    if size <= order:
        raise KnotSelectDimensionError(
            f'a difference of order {order} needs more than {order} coefficients, got {size}')
    return np.diff(np.eye(size), n=order, axis=0)


@dataclass(frozen=True, eq=False)
class SplineModel(Curve):
    """
    s(x) = sum_j alpha_{j+p+1} B_j(x) over the l+p basis functions of a grid
    """
    grid: KnotGrid
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        coefficients = _frozen(self.coefficients)
        if coefficients.shape != (self.grid.n_basis,):
            raise KnotSelectDimensionError(
                f'expected {self.grid.n_basis} coefficients, got {coefficients.shape}')
        object.__setattr__(self, 'coefficients', coefficients)

    @property
    def domain(self) -> Tuple[float, float]:
        return self.grid.domain

    def __call__(self, xs: ArrayLike) -> np.ndarray:
        values, first = basis_values(self.grid, xs)
        columns = first[:, None] + np.arange(self.grid.order + 1)
        return np.sum(values * self.coefficients[columns], axis=1)

    def used_knots(self, operators: DifferenceOperators, tol: float = 1e-8) -> List[int]:
        """indices i of the candidate knots t_i the spline actually uses"""
        # pylint: disable=import-outside-toplevel
        from knotselect.difference import active_knots
        return active_knots(operators.D, self.coefficients, tol)


def eval_spline(model: SplineModel, x: float) -> float:
    """s(x) at a single point"""
    return float(model([x])[0])
