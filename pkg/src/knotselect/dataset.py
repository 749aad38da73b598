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

import json
import sys
from dataclasses import dataclass
from typing import (
    IO,
    Any,
    Dict,
    Optional,
    Tuple,
    Union,
)

import numpy as np
import pandas as pd

from knotselect.basis import (
    KnotGrid,
    SplineModel,
)
from knotselect.config import (
    DEFAULT_PLOT_POINTS,
    KNOT_RANGE_MARGIN,
    get_logger,
)
from knotselect.exceptions import KnotSelectDataError

log = get_logger('Dataset')

PathOrBuffer = Union[str, IO[str]]


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    paired samples; when `standardized`, ys = (raw - y_mean) / y_scale
    """
    xs: np.ndarray
    ys: np.ndarray
    standardized: bool = False
    y_mean: float = 0.0
    y_scale: float = 1.0

    def __post_init__(self) -> None:
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape:
            raise KnotSelectDataError(
                f'x and y must be vectors of equal length, got {xs.shape} and {ys.shape}')
        if xs.size == 0:
            raise KnotSelectDataError('data set is empty')
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise KnotSelectDataError('data contain non finite values')
        object.__setattr__(self, 'xs', xs)
        object.__setattr__(self, 'ys', ys)

    @property
    def n(self) -> int:
        """sample count"""
        return int(self.xs.size)

    @property
    def x_range(self) -> Tuple[float, float]:
        """(min x, max x)"""
        return float(self.xs.min()), float(self.xs.max())

    def check_size(self, p: int) -> None:
        """a fit of order p needs at least p+2 samples"""
        if self.n < p + 2:
            raise KnotSelectDataError(
                f'{self.n} samples are too few for order p={p}, need at least {p + 2}',
                params={'n': self.n, 'p': p})

    def to_frame(self) -> pd.DataFrame:
        """x, y columns"""
        return pd.DataFrame({'x': self.xs, 'y': self.ys})


def _numeric_column(frame: pd.DataFrame, column: str) -> np.ndarray:
    text = frame[column]
    parsed = pd.to_numeric(text, errors='coerce').to_numpy(dtype=float)
    bad = np.flatnonzero(~np.isfinite(parsed))
    if bad.size:
        row = int(bad[0])
        raise KnotSelectDataError(
            f'row {row + 1}: column <{column}> value {text.iloc[row]!r} is not a finite number',
            params={'row': row + 1, 'line': row + 2, 'column': column})
    # float() per cell keeps the values bit exact
    return text.astype(float).to_numpy()


def standardize_responses(ys: np.ndarray) -> Tuple[np.ndarray, float, float]:
    """zero mean, unit sample standard deviation"""
    if ys.size < 2:
        raise KnotSelectDataError('at least two responses are needed to standardize')
    mean = float(ys.mean())
    scale = float(ys.std(ddof=1))
    if scale == 0:
        raise KnotSelectDataError('responses have zero variance')
    return (ys - mean) / scale, mean, scale


def load_csv(path: PathOrBuffer, x_column: str = 'x', y_column: str = 'y',
             standardize: bool = True) -> Dataset:
    """
    read two columns of a csv file with a header row, `-` reads stdin

    rows are counted from 1 after the header in error messages
    """
    source = sys.stdin if path == '-' else path
    try:
        frame = pd.read_csv(source, dtype=str, skipinitialspace=True)
    except pd.errors.EmptyDataError as e:
        raise KnotSelectDataError(f'no data in <{path}>') from e
    except pd.errors.ParserError as e:
        raise KnotSelectDataError(f'malformed csv <{path}>: {e}') from e
    except FileNotFoundError as e:
        raise KnotSelectDataError(f'no such file <{path}>', params={'path': str(path)}) from e
    except UnicodeDecodeError as e:
        raise KnotSelectDataError(f'<{path}> is not utf-8 text: {e}',
                                  params={'path': str(path)}) from e
    except OSError as e:
        raise KnotSelectDataError(f'can"t read <{path}>: {e}', params={'path': str(path)}) from e

    for column in (x_column, y_column):
        if column not in frame.columns:
            raise KnotSelectDataError(
                f'missing column <{column}>, found {list(frame.columns)}',
                params={'column': column})
    if frame.empty:
        raise KnotSelectDataError(f'no rows in <{path}>')

    xs = _numeric_column(frame, x_column)
    ys = _numeric_column(frame, y_column)
    if not standardize:
        return Dataset(xs=xs, ys=ys)
    scaled, mean, scale = standardize_responses(ys)
    log.debug('load_csv() %d rows, y mean=%.6g sd=%.6g', xs.size, mean, scale)
    return Dataset(xs=xs, ys=scaled, standardized=True, y_mean=mean, y_scale=scale)


def knot_range(dataset: Dataset, synthetic: bool = False,
               margin: float = KNOT_RANGE_MARGIN) -> Tuple[float, float]:
    """
    [t_0, t_l) covering the data with a relative margin on both sides,
    [0, 1) for synthetic data
    """
    if synthetic:
        return 0.0, 1.0
    low, high = dataset.x_range
    width = high - low
    if width == 0:
        raise KnotSelectDataError(f'all x values equal {low}, the knot range is empty',
                                  params={'x': low})
    return low - margin * width, high + margin * width


def model_to_dict(model: SplineModel, meta: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """json friendly model: order, full knot vector and coefficients, then `meta`"""
    payload: Dict[str, Any] = {
        'p': model.grid.p,
        'knots': model.grid.knots.tolist(),
        'alpha': model.coefficients.tolist(),
        't0': model.grid.t0,
        'tl': model.grid.tl,
    }
    payload.update(meta or {})
    return payload


def model_from_dict(payload: Dict[str, Any]) -> SplineModel:
    """inverse of `model_to_dict`"""
    try:
        grid = KnotGrid.from_knots(np.asarray(payload['knots'], dtype=float), int(payload['p']))
        return SplineModel(grid, np.asarray(payload['alpha'], dtype=float))
    except KeyError as e:
        raise KnotSelectDataError(f'model is missing field {e}') from e


def save_model(path: PathOrBuffer, model: SplineModel,
               meta: Optional[Dict[str, Any]] = None) -> None:
    """write the model json, `-` writes stdout"""
    text = json.dumps(model_to_dict(model, meta), indent=2)
    if path == '-':
        sys.stdout.write(text + '\n')
    elif isinstance(path, str):
        try:
            with open(path, 'w', encoding='utf-8') as handle:
                handle.write(text + '\n')
        except OSError as e:
            raise KnotSelectDataError(f'can"t write model <{path}>: {e}',
                                      params={'path': path}) from e
    else:
        path.write(text + '\n')


def load_model(path: PathOrBuffer) -> Tuple[SplineModel, Dict[str, Any]]:
    """the model and the whole json payload"""
    try:
        if isinstance(path, str):
            with open(path, encoding='utf-8') as handle:
                payload = json.load(handle)
        else:
            payload = json.load(path)
    except (OSError, json.JSONDecodeError) as e:
        raise KnotSelectDataError(f'can"t read model <{path}>: {e}') from e
    return model_from_dict(payload), payload


def plot_frame(model: SplineModel, points: int = DEFAULT_PLOT_POINTS) -> pd.DataFrame:
    """(x, s(x)) on `points` equally spaced points of [t_0, t_l)"""
    xs = np.linspace(model.grid.t0, model.grid.tl, points, endpoint=False)
    return pd.DataFrame({'x': xs, 'fit': model(xs)})
