"""
synthetic data unit test
"""
from typing import Tuple

import numpy as np
import pytest

from knotselect.basis import SplineModel
from knotselect.difference import extend_and_invert
from knotselect.exceptions import (
    KnotSelectDomainError,
    KnotSelectParameterError,
)
from knotselect.types import Curve

from .synthetic import (
    BimodalGauss,
    SyntheticSpec,
    evaluation_seed,
    gen_synthetic,
    mse_monte_carlo,
)


class Affine(Curve):
    """a + b x on [low, high)"""

    def __init__(self, a: float, b: float = 0.0, low: float = 0.0, high: float = 1.0):
        self.a = a
        self.b = b
        self.bounds = (low, high)

    @property
    def domain(self) -> Tuple[float, float]:
        return self.bounds

    def __call__(self, xs: np.ndarray) -> np.ndarray:
        return self.a + self.b * np.asarray(xs, dtype=float)


def test_spec_validation() -> None:
    """kinds, rules and sizes are checked"""
    for bad in (dict(kind='wave'), dict(knot_rule='grid'), dict(n=0), dict(l=1),
                dict(noise=-1.0), dict(kind='sparse_truth', l=5)):
        with pytest.raises(KnotSelectParameterError):
            SyntheticSpec(**bad)  # type: ignore


def test_same_seed_same_data() -> None:
    """the seed fixes the whole stream"""
    for kind in ('random_coef', 'sparse_truth', 'bimodal_gauss'):
        spec = SyntheticSpec(kind=kind, n=50, l=20, seed=7)
        first, second = gen_synthetic(spec), gen_synthetic(spec)
        assert np.array_equal(first.xs, second.xs)
        assert np.array_equal(first.ys, second.ys)
        other = gen_synthetic(spec.with_seed(8))
        assert not np.array_equal(first.ys, other.ys), f'{kind} ignores the seed'


def test_noiseless_random_coef_reproduces_truth() -> None:
    """ys are the truth values exactly"""
    data = gen_synthetic(SyntheticSpec(kind='random_coef', n=40, l=10, noise=0.0, seed=1))
    assert isinstance(data.truth, SplineModel)
    assert np.array_equal(data.ys, data.truth(data.xs))
    assert data.truth.coefficients.size == 13
    assert np.array_equal(data.truth_knots, data.grid.candidates)


@pytest.mark.parametrize('rule', ['candidates', 'uniform'])
def test_sparse_truth_uses_five_knots(rule: str) -> None:
    """the truth is a spline on exactly five interior knots, all of them used"""
    data = gen_synthetic(SyntheticSpec(kind='sparse_truth', n=100, l=50, seed=2, knot_rule=rule))
    truth = data.truth
    assert isinstance(truth, SplineModel)
    assert truth.grid.l == 6
    assert data.truth_knots.size == 5
    assert np.all(np.diff(data.truth_knots) > 0)
    assert len(truth.used_knots(extend_and_invert(truth.grid))) == 5
    assert np.all((truth.coefficients >= 0) & (truth.coefficients < 1))
    if rule == 'candidates':
        assert np.all(np.isin(data.truth_knots, data.grid.candidates))


def test_bimodal_gauss() -> None:
    """two bumps of opposite sign, uniform nonnegative noise"""
    truth = BimodalGauss()
    assert truth(np.array([0.35]))[0] == pytest.approx(0.8, abs=1e-4)
    assert truth(np.array([0.65]))[0] == pytest.approx(-0.8, abs=1e-4)
    assert truth(np.array([0.5]))[0] == pytest.approx(0.0, abs=1e-12)

    data = gen_synthetic(SyntheticSpec(kind='bimodal_gauss', n=80, l=50, seed=3))
    noise = data.ys - truth(data.xs)
    assert np.all((noise >= 0) & (noise < 0.1))
    assert np.all((data.xs >= 0) & (data.xs < 1))
    assert list(data.to_frame().columns) == ['x', 'y']


def test_mse_of_identical_curves_is_zero() -> None:
    """truth = fitted"""
    data = gen_synthetic(SyntheticSpec(n=10, l=10, seed=4))
    assert mse_monte_carlo(data.truth, data.truth, samples=1000) == 0.0


def test_mse_of_constants() -> None:
    """0 against 1 is exactly 1 for any sample count"""
    for samples in (1, 10, 1000):
        assert mse_monte_carlo(Affine(0.0), Affine(1.0), samples=samples) == 1.0


def test_mse_of_linear_truth() -> None:
    """x against 0 integrates to 1/3"""
    samples = 100_000
    estimate = mse_monte_carlo(Affine(0.0, 1.0), Affine(0.0), samples=samples, seed=5)
    standard_error = np.sqrt(4 / 45 / samples)
    assert abs(estimate - 1 / 3) <= 3 * standard_error


def test_mse_standard_error_shrinks() -> None:
    """repeated estimates spread like 1 / sqrt(samples)"""
    def spread(samples: int) -> float:
        values = [mse_monte_carlo(Affine(0.0, 1.0), Affine(0.0), samples, seed)
                  for seed in range(30)]
        return float(np.std(values))

    ratio = spread(100) / spread(10_000)
    assert 5 < ratio < 20, f'spread ratio {ratio} should be close to 10'


def test_mse_domain_mismatch() -> None:
    """both curves must live on the same interval"""
    with pytest.raises(KnotSelectDomainError):
        mse_monte_carlo(Affine(0.0), Affine(0.0, low=0.0, high=2.0))
    with pytest.raises(KnotSelectParameterError):
        mse_monte_carlo(Affine(0.0), Affine(0.0), samples=0)


def test_evaluation_seed() -> None:
    """scoring points come from a stream independent of the training draw"""
    assert evaluation_seed(3) == evaluation_seed(3)
    assert evaluation_seed(3) != evaluation_seed(4)
    assert evaluation_seed(3) != 3

    data = gen_synthetic(SyntheticSpec(n=50, l=10, seed=3))
    points = np.random.default_rng(evaluation_seed(3)).uniform(0, 1, 50)
    assert not np.allclose(points, data.xs)
