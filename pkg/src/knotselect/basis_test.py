"""
basis unit test
"""
from typing import Iterable

import numpy as np
import pytest
from scipy.interpolate import BSpline

from knotselect.exceptions import (
    KnotSelectDomainError,
    KnotSelectKnotError,
)

from .basis import (
    KnotGrid,
    SplineModel,
    design_matrix,
    eval_basis,
    eval_spline,
    make_equispaced_grid,
    make_grid_from_interior,
    smoothing_matrix,
)

# pylint: disable=redefined-outer-name


@pytest.fixture(name='cubic_grid', scope='module')
def fixture_cubic_grid() -> Iterable[KnotGrid]:
    """ cubic grid with ten intervals on [0, 1) """
    yield make_equispaced_grid(0.0, 1.0, 10, 3)


def test_equispaced_grid_examples() -> None:
    """uniform partitions and their spacing extension"""
    grid = make_equispaced_grid(0, 1, 2, 0)
    assert np.allclose(grid.knots, [0, 0.5, 1]), 'p=0 should be the plain partition'

    grid = make_equispaced_grid(0, 1, 2, 1)
    assert np.allclose(grid.knots, [-0.5, 0, 0.5, 1, 1.5]), 'p=1 extends by one spacing'

    grid = make_equispaced_grid(0, 1, 4, 3)
    assert grid.knots.size == 11, 'l + 2p + 1 knots'
    assert np.allclose(grid.knots, np.arange(-0.75, 1.76, 0.25))
    assert grid.domain == (0.0, 1.0)


def test_equispaced_grid_rejects_empty_range() -> None:
    """t0 >= tl is an invalid range"""
    with pytest.raises(KnotSelectKnotError):
        make_equispaced_grid(1.0, 1.0, 4, 3)


def test_grid_from_interior_examples() -> None:
    """exterior knots copy the boundary interval spacing"""
    grid = make_grid_from_interior([0, 0.4, 1], 1)
    assert np.allclose(grid.knots, [-0.4, 0, 0.4, 1, 1.6])

    grid = make_grid_from_interior([0, 1], 0)
    assert np.allclose(grid.knots, [0, 1])

    grid = make_grid_from_interior([0, 0.25, 0.5, 1], 3)
    assert grid.knots.size == 10
    assert np.allclose(grid.knots[:4], [-0.75, -0.5, -0.25, 0])
    assert np.allclose(grid.knots[-4:], [1, 1.5, 2, 2.5])


def test_grid_from_interior_rejects_non_increasing() -> None:
    """non increasing input is invalid"""
    with pytest.raises(KnotSelectKnotError):
        make_grid_from_interior([0, 0.5, 0.5, 1], 3)


def test_grid_from_knots() -> None:
    """explicit knot vector keeps its values"""
    grid = KnotGrid.from_knots([-1, 0, 0.3, 1, 2], 1)
    assert grid.l == 2 and grid.p == 1
    assert grid.knot(1) == pytest.approx(0.3)
    assert np.allclose(grid.candidates, [0.3])


def test_eval_basis_piecewise_constant() -> None:
    """order 0 basis is the indicator of the interval"""
    grid = make_equispaced_grid(0, 1, 2, 0)
    assert np.allclose(eval_basis(grid, 0.25), [1, 0])


def test_eval_basis_hat_function() -> None:
    """order 1 basis peaks at its center knot"""
    grid = make_equispaced_grid(0, 1, 2, 1)
    assert np.allclose(eval_basis(grid, 0.5), [0, 1, 0])
    assert np.allclose(eval_basis(grid, 0.25), [0.5, 0.5, 0])


def test_partition_of_unity(cubic_grid: KnotGrid) -> None:
    """basis values are nonnegative and sum to one"""
    xs = np.random.default_rng(0).uniform(0, 1, 100)
    matrix = design_matrix(cubic_grid, xs)
    assert matrix.shape == (100, 13)
    assert np.allclose(matrix.sum(axis=1), 1.0, atol=1e-10), 'rows must sum to one'
    assert np.all(matrix >= 0), 'basis values must be nonnegative'
    assert np.all(np.count_nonzero(matrix, axis=1) <= 4), 'at most p+1 nonzeros per row'


def test_local_support(cubic_grid: KnotGrid) -> None:
    """B_j vanishes outside [t_j, t_{j+p+1})"""
    xs = np.linspace(0, 1, 400, endpoint=False)
    matrix = design_matrix(cubic_grid, xs)
    p = cubic_grid.p
    for column in range(cubic_grid.n_basis):
        j = column - p
        outside = (xs < cubic_grid.knot(j)) | (xs >= cubic_grid.knot(j + p + 1))
        assert np.all(matrix[outside, column] == 0), f'B_{j} leaks outside its support'


def test_design_matrix_single_row() -> None:
    """n=1, p=0, l=2"""
    grid = make_equispaced_grid(0, 1, 2, 0)
    assert np.allclose(design_matrix(grid, [0.75]), [[0, 1]])


def test_design_matrix_names_offending_index(cubic_grid: KnotGrid) -> None:
    """the domain error points at the first bad x"""
    with pytest.raises(KnotSelectDomainError) as error:
        design_matrix(cubic_grid, [0.1, 0.2, 1.0, 0.3])
    assert error.value.params['index'] == 2


def test_right_end_is_excluded(cubic_grid: KnotGrid) -> None:
    """x = t_l is outside the half-open interval"""
    with pytest.raises(KnotSelectDomainError):
        eval_basis(cubic_grid, 1.0)


def test_constant_coefficients(cubic_grid: KnotGrid) -> None:
    """equal coefficients give a constant spline"""
    model = SplineModel(cubic_grid, np.full(cubic_grid.n_basis, 2.5))
    xs = np.linspace(0, 1, 50, endpoint=False)
    assert np.allclose(model(xs), 2.5)
    assert eval_spline(model, 0.37) == pytest.approx(2.5)


def test_piecewise_constant_spline() -> None:
    """p=0 returns the coefficient of the containing interval"""
    grid = make_equispaced_grid(0, 1, 4, 0)
    model = SplineModel(grid, np.array([1.0, -2.0, 3.0, 5.0]))
    assert eval_spline(model, 0.3) == -2.0
    assert eval_spline(model, 0.99) == 5.0


def test_matches_de_boor(cubic_grid: KnotGrid) -> None:
    """agrees with an independent de Boor evaluation"""
    rng = np.random.default_rng(3)
    alpha = rng.normal(size=cubic_grid.n_basis)
    xs = rng.uniform(0, 1, 200)
    oracle = BSpline(cubic_grid.knots, alpha, cubic_grid.p, extrapolate=False)
    assert np.allclose(SplineModel(cubic_grid, alpha)(xs), oracle(xs), atol=1e-12)


def test_continuity_across_knots() -> None:
    """left and right limits agree at interior knots for p >= 1"""
    grid = make_grid_from_interior([0, 0.1, 0.35, 0.4, 0.8, 1.0], 2)
    alpha = np.random.default_rng(5).normal(size=grid.n_basis)
    model = SplineModel(grid, alpha)
    for knot in grid.candidates:
        left = eval_spline(model, knot - 1e-12)
        right = eval_spline(model, knot)
        assert abs(left - right) < 1e-8, f'jump at knot {knot}'


def test_wrong_coefficient_count(cubic_grid: KnotGrid) -> None:
    """l+p coefficients are required"""
    with pytest.raises(ValueError):
        SplineModel(cubic_grid, np.zeros(cubic_grid.n_basis - 1))


def test_smoothing_matrix() -> None:
    """second order difference stencil"""
    matrix = smoothing_matrix(5)
    assert matrix.shape == (3, 5)
    assert np.allclose(matrix[0], [1, -2, 1, 0, 0])
