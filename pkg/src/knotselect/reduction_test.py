"""
reduced problem unit test
"""
from typing import Iterable, Tuple

import numpy as np
import pytest

from knotselect.basis import (
    SplineModel,
    design_matrix,
    make_equispaced_grid,
    smoothing_matrix,
)
from knotselect.difference import (
    active_knots,
    extend_and_invert,
)
from knotselect.exceptions import (
    KnotSelectParameterError,
    KnotSelectRankError,
)

from .reduction import (
    ReducedProblem,
    build_problem,
    check_assumption,
    exact_penalty_gamma,
    grad_h,
    lift,
    objective_F,
    reduce,
)

# pylint: disable=redefined-outer-name


def _sample(n: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    xs = np.sort(rng.uniform(0, 1, n))
    y = np.sin(2 * np.pi * xs) + rng.normal(scale=0.1, size=n)
    return xs, y


@pytest.fixture(name='problem', scope='module', params=[0.0, 0.1])
def fixture_problem(request: pytest.FixtureRequest) -> Iterable[ReducedProblem]:
    """ n=60, l=12, p=3 with and without smoothing """
    xs, y = _sample(60, seed=0)
    grid = make_equispaced_grid(0, 1, 12, 3)
    yield build_problem(grid, xs, y, c=request.param)


def _inner_minimum(rp: ReducedProblem, beta: np.ndarray) -> float:
    """min over beta' of the smooth terms, by a generic least squares solve"""
    S1 = rp.B @ rp.ops.Sigma1  # pylint: disable=invalid-name
    S2 = rp.B @ rp.ops.Sigma2  # pylint: disable=invalid-name
    T1 = rp.Dsm @ rp.ops.Sigma1  # pylint: disable=invalid-name
    T2 = rp.Dsm @ rp.ops.Sigma2  # pylint: disable=invalid-name
    root = np.sqrt(rp.c)
    lhs = np.vstack([S2, root * T2])
    rhs = np.concatenate([rp.y - S1 @ beta, -root * (T1 @ beta)])
    inner, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    alpha = rp.ops.Sigma @ np.concatenate([beta, inner])
    residual = rp.y - rp.B @ alpha
    return 0.5 * residual @ residual + 0.5 * rp.c * np.sum((rp.Dsm @ alpha) ** 2)


def test_check_assumption() -> None:
    """distinct x values determine a polynomial, repeated ones do not"""
    grid = make_equispaced_grid(0, 1, 10, 3)
    operators = extend_and_invert(grid)
    xs, _ = _sample(30, seed=1)
    holds, ratio = check_assumption(design_matrix(grid, xs), operators.Sigma2)
    assert holds and ratio > 1e-10

    holds, _ = check_assumption(design_matrix(grid, np.full(30, 0.4)), operators.Sigma2)
    assert not holds, 'repeated x must violate the assumption'

    holds, _ = check_assumption(design_matrix(grid, [0.1, 0.5, 0.9]), operators.Sigma2)
    assert not holds, 'fewer than p+1 rows'


def test_partial_minimization(problem: ReducedProblem) -> None:
    """h(beta) equals the inner minimum over the polynomial coordinates, 100 beta per c"""
    rng = np.random.default_rng(2)
    for _ in range(100):
        beta = rng.normal(size=problem.dim)
        value = objective_F(beta, problem, 3, gamma=0.0)
        expected = _inner_minimum(problem, beta)
        assert abs(value - expected) <= 1e-8 * (1 + abs(value))
        assert problem.smooth(beta)[0] == pytest.approx(value, rel=1e-8, abs=1e-10)


def test_zero_beta(problem: ReducedProblem) -> None:
    """F(0) = 1/2 ||z1||^2 + c/2 ||z2||^2 for every K"""
    zero = np.zeros(problem.dim)
    expected = 0.5 * problem.z1 @ problem.z1 + 0.5 * problem.c * problem.z2 @ problem.z2
    for k in (0, 3, problem.dim):
        assert objective_F(zero, problem, k) == pytest.approx(expected)
    assert problem.h(zero) == pytest.approx(_inner_minimum(problem, zero), rel=1e-8)


def test_no_smoothing_ignores_second_term() -> None:
    """c=0 leaves only the data residual"""
    xs, y = _sample(40, seed=3)
    rp = build_problem(make_equispaced_grid(0, 1, 8, 2), xs, y, c=0.0)
    beta = np.random.default_rng(4).normal(size=rp.dim)
    residual = rp.z1 - rp.L1 @ beta
    assert rp.h(beta) == pytest.approx(0.5 * residual @ residual)


def test_objective_is_nonnegative(problem: ReducedProblem) -> None:
    """F is a sum of nonnegative terms"""
    rng = np.random.default_rng(5)
    for _ in range(20):
        beta = rng.normal(scale=10, size=problem.dim)
        assert objective_F(beta, problem, 2) >= 0


def test_gradient_matches_finite_differences(problem: ReducedProblem) -> None:
    """central differences with step 1e-6 at 50 points per c"""
    rng = np.random.default_rng(6)
    for _ in range(50):
        beta = rng.normal(size=problem.dim)
        gradient = grad_h(beta, problem)
        assert np.array_equal(problem.smooth(beta)[1], gradient)
        numeric = np.zeros(problem.dim)
        for j in range(problem.dim):
            step = np.zeros(problem.dim)
            step[j] = 1e-6
            numeric[j] = (problem.h(beta + step) - problem.h(beta - step)) / 2e-6
        assert np.allclose(gradient, numeric, rtol=1e-5, atol=1e-5 * np.abs(gradient).max())


def test_exact_penalty_gamma_recomputed(problem: ReducedProblem) -> None:
    """agrees with an explicit loop over the columns"""
    best = 0.0
    for j in range(problem.dim):
        first = np.sqrt(sum(v * v for v in problem.L1[:, j]))
        second = np.sqrt(sum(v * v for v in problem.L2[:, j]))
        best = max(best, first + np.sqrt(problem.c) * second)
    residual = np.sqrt(problem.z1 @ problem.z1 + problem.c * problem.z2 @ problem.z2)
    assert exact_penalty_gamma(problem, 1.001) == pytest.approx(1.001 * best * residual)
    assert problem.gamma == pytest.approx(exact_penalty_gamma(problem))


def test_exact_penalty_gamma_perfect_fit() -> None:
    """a polynomial response leaves nothing to penalize"""
    xs, _ = _sample(50, seed=7)
    y = 1 - 2 * xs + 3 * xs ** 3
    rp = build_problem(make_equispaced_grid(0, 1, 10, 3), xs, y)
    assert exact_penalty_gamma(rp) == pytest.approx(0.0, abs=1e-8)

    with pytest.raises(KnotSelectParameterError):
        exact_penalty_gamma(rp, 1.0)


def test_lift_roundtrip(problem: ReducedProblem) -> None:
    """D lift(beta) = beta and the knots used are the support of beta"""
    rng = np.random.default_rng(8)
    beta = np.zeros(problem.dim)
    support = rng.choice(problem.dim, size=4, replace=False)
    beta[support] = rng.choice([-1, 1], size=4) * rng.uniform(0.5, 2, size=4)
    alpha = lift(beta, problem)
    assert np.allclose(problem.ops.D @ alpha, beta, atol=1e-10)
    assert active_knots(problem.ops.D, alpha) == sorted(int(i) + 1 for i in support)


def test_lift_zero_is_polynomial_fit() -> None:
    """beta = 0 lifts to the least squares cubic"""
    xs, y = _sample(60, seed=9)
    rp = build_problem(make_equispaced_grid(0, 1, 12, 3), xs, y)
    model = SplineModel(rp.ops.grid, rp.initial_alpha())
    expected = np.polyval(np.polyfit(xs, y, 3), xs)
    assert np.allclose(model(xs), expected, atol=1e-8)
    assert not active_knots(rp.ops.D, model.coefficients)


def test_lipschitz_bounds_curvature(problem: ReducedProblem) -> None:
    """no direction curves more than the largest eigenvalue"""
    bound = problem.lipschitz()
    rng = np.random.default_rng(10)
    for _ in range(10):
        direction = rng.normal(size=problem.dim)
        curvature = np.sum((problem.L1 @ direction) ** 2) \
            + problem.c * np.sum((problem.L2 @ direction) ** 2)
        assert curvature <= bound * (direction @ direction) * (1 + 1e-10)


def test_reduce_rejects_negative_smoothing() -> None:
    """c must be nonnegative"""
    grid = make_equispaced_grid(0, 1, 8, 2)
    xs, y = _sample(30, seed=11)
    with pytest.raises(KnotSelectParameterError):
        reduce(design_matrix(grid, xs), smoothing_matrix(10), extend_and_invert(grid), y, c=-1)


def test_reduce_rejects_degenerate_design() -> None:
    """equal x values cannot determine a cubic"""
    grid = make_equispaced_grid(0, 1, 8, 3)
    with pytest.raises(KnotSelectRankError):
        build_problem(grid, np.full(20, 0.3), np.arange(20.0))
