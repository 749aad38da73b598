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
    Tuple,
)

import numpy as np
import pandas as pd

from knotselect.basis import (
    ArrayLike,
    KnotGrid,
    SplineModel,
    make_equispaced_grid,
)
from knotselect.config import (
    DEFAULT_MC_SAMPLES,
    DEFAULT_ORDER,
    get_logger,
)
from knotselect.exceptions import (
    KnotSelectDomainError,
    KnotSelectParameterError,
)
from knotselect.types import Curve

log = get_logger('Synthetic')

KINDS = ('random_coef', 'sparse_truth', 'bimodal_gauss')
KNOT_RULES = ('candidates', 'uniform')
TRUTH_KNOTS = 5
DEFAULT_NOISE = 0.1


# pylint: disable=R0903
class BimodalGauss(Curve):
    """
    0.8 exp(-[16(x - 0.35)]^2) - 0.8 exp(-[16(x - 0.65)]^2) on [0, 1)
    """
    height = 0.8
    width = 16.0
    centers = (0.35, 0.65)

    @property
    def domain(self) -> Tuple[float, float]:
        return 0.0, 1.0

    def __call__(self, xs: ArrayLike) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        left, right = self.centers
        return self.height * (np.exp(-(self.width * (xs - left)) ** 2)
                              - np.exp(-(self.width * (xs - right)) ** 2))


# pylint: disable=R0902
@dataclass(frozen=True)
class SyntheticSpec:
    """
    how a synthetic data set is drawn

    `noise` is the standard deviation of the normal noise of the spline
    truths and the upper end of the uniform noise of `bimodal_gauss`;
    `knot_rule` picks the true knots of `sparse_truth` among the candidates
    or as sorted uniform draws
    """
    kind: str = 'random_coef'
    n: int = 200
    l: int = 100  # noqa: E741
    p: int = DEFAULT_ORDER
    noise: float = DEFAULT_NOISE
    seed: int = 0
    knot_rule: str = 'candidates'

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise KnotSelectParameterError(
                f'unknown synthetic kind <{self.kind}>, expected one of {KINDS}')
        if self.knot_rule not in KNOT_RULES:
            raise KnotSelectParameterError(
                f'unknown knot rule <{self.knot_rule}>, expected one of {KNOT_RULES}')
        if self.n < 1:
            raise KnotSelectParameterError(f'sample count n <{self.n}> must be positive')
        if self.l < 2:
            raise KnotSelectParameterError(f'candidate count l <{self.l}> must be at least 2')
        if self.p < 0:
            raise KnotSelectParameterError(f'order p <{self.p}> must be nonnegative')
        if self.noise < 0:
            raise KnotSelectParameterError(f'noise <{self.noise}> must be nonnegative')
        if self.kind == 'sparse_truth' and self.knot_rule == 'candidates' \
                and self.l - 1 < TRUTH_KNOTS:
            raise KnotSelectParameterError(
                f'{TRUTH_KNOTS} true knots need at least {TRUTH_KNOTS + 1} intervals, '
                f'got l={self.l}')

    def with_seed(self, seed: int) -> SyntheticSpec:
        """the same design drawn from another stream"""
        return SyntheticSpec(kind=self.kind, n=self.n, l=self.l, p=self.p,
                             noise=self.noise, seed=seed, knot_rule=self.knot_rule)


@dataclass(frozen=True, eq=False)
class SyntheticData:
    """a drawn data set with its ground truth and the candidate grid on [0, 1)"""
    xs: np.ndarray
    ys: np.ndarray
    truth: Curve
    truth_knots: np.ndarray
    grid: KnotGrid
    spec: SyntheticSpec

    def to_frame(self) -> pd.DataFrame:
        """x, y columns ready for csv output"""
        return pd.DataFrame({'x': self.xs, 'y': self.ys})


def _sparse_truth(grid: KnotGrid, spec: SyntheticSpec,
                  rng: np.random.Generator) -> SplineModel:
    p = grid.p
    if spec.knot_rule == 'candidates':
        picked = np.sort(rng.choice(grid.l - 1, size=TRUTH_KNOTS, replace=False)) + 1
        interior = grid.knots[picked + p]
    else:
        interior = np.sort(rng.uniform(0, 1, TRUTH_KNOTS))
    knots = np.concatenate([grid.knots[:p + 1], interior, grid.knots[p + grid.l:]])
    truth_grid = KnotGrid.from_knots(knots, p)
    return SplineModel(truth_grid, rng.uniform(0, 1, truth_grid.n_basis))


def gen_synthetic(spec: SyntheticSpec) -> SyntheticData:
    """
    draw x ~ U(0, 1) and y = s(x) + noise; every draw comes from one
    generator seeded by `spec.seed`
    """
    rng = np.random.default_rng(spec.seed)
    grid = make_equispaced_grid(0.0, 1.0, spec.l, spec.p)
    xs = rng.uniform(0, 1, spec.n)

    truth: Curve
    if spec.kind == 'random_coef':
        truth = SplineModel(grid, rng.normal(0, 1, grid.n_basis))
        truth_knots = grid.candidates.copy()
    elif spec.kind == 'sparse_truth':
        truth = _sparse_truth(grid, spec, rng)
        truth_knots = truth.grid.candidates.copy()
    else:
        truth = BimodalGauss()
        truth_knots = np.zeros(0)

    if spec.kind == 'bimodal_gauss':
        noise = rng.uniform(0, spec.noise, spec.n)
    else:
        noise = rng.normal(0, spec.noise, spec.n)
    ys = truth(xs) + noise

    log.debug('gen_synthetic() kind=%s n=%d l=%d seed=%d',
              spec.kind, spec.n, spec.l, spec.seed)
    return SyntheticData(xs=xs, ys=ys, truth=truth, truth_knots=truth_knots,
                         grid=grid, spec=spec)


def evaluation_seed(seed: int) -> int:
    """
    seed of the Monte-Carlo points scoring a fit to the data drawn from
    `seed`, an independent child of the same seed sequence
    """
    child = np.random.SeedSequence(seed).spawn(2)[1]
    return int(child.generate_state(1)[0])


def mse_monte_carlo(truth: Curve, fitted: Curve,
                    samples: int = DEFAULT_MC_SAMPLES,
                    seed: Optional[int] = 0) -> float:
    """
    mean of (truth(u) - fitted(u))^2 over uniform draws u on the shared domain
    """
    if samples < 1:
        raise KnotSelectParameterError(f'sample count <{samples}> must be positive')
    low, high = truth.domain
    if not np.allclose(fitted.domain, (low, high), rtol=0, atol=1e-12):
        raise KnotSelectDomainError(
            f'domains differ: truth on {truth.domain}, fit on {fitted.domain}',
            params={'truth': list(truth.domain), 'fitted': list(fitted.domain)})
    rng = np.random.default_rng(seed)
    # rounding of low + (high - low) u may land on the open end
    points = np.minimum(rng.uniform(low, high, samples), np.nextafter(high, low))
    difference = truth(points) - fitted(points)
    return float(np.mean(difference ** 2))
