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

import logging
import os
from dataclasses import dataclass, field
from typing import (
    List,
    Optional,
)

from knotselect.exceptions import KnotSelectConfigurationError

_LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def get_logger(name: str) -> logging.Logger:
    """
    get a named logger writing to stderr

    the level is read from `KNOTSELECT_LOG` (default INFO), and an extra file
    sink is attached when `KNOTSELECT_LOG_FILE` is set
    :param name: logger name, usually the class or module name
    :return:
    """
    logger = logging.getLogger(f'knotselect.{name}')
    if logger.handlers:
        return logger

    level = os.environ.get('KNOTSELECT_LOG', 'INFO').upper()
    logger.setLevel(getattr(logging, level, logging.INFO))
    formatter = logging.Formatter(fmt=_LOG_FORMAT)

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    log_file = os.environ.get('KNOTSELECT_LOG_FILE', None)
    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logger.propagate = False
    return logger


log = get_logger('Config')

# defaults of the numerical experiments of the method
DEFAULT_ORDER = 3
DEFAULT_CANDIDATES = 50
DEFAULT_GAMMA_SAFETY = 1.001
DEFAULT_NONMONOTONE_WINDOW = 10
DEFAULT_MAX_ITER = 100_000
DEFAULT_MC_SAMPLES = 100_000
DEFAULT_PLOT_POINTS = 512
KNOT_RANGE_MARGIN = 1e-3


def default_workers() -> int:
    """
    default thread count of parallel sweeps, from `KNOTSELECT_WORKERS`
    """
    value = os.environ.get('KNOTSELECT_WORKERS', None)
    if value is None:
        return os.cpu_count() or 1
    try:
        workers = int(value)
    except ValueError as e:
        raise KnotSelectConfigurationError(
            f'KNOTSELECT_WORKERS <{value}> is not an integer') from e
    if workers < 1:
        raise KnotSelectConfigurationError(
            f'KNOTSELECT_WORKERS <{value}> must be positive')
    return workers


def _default_k_grid() -> List[int]:
    return list(range(1, 21))


# pylint: disable=R0902
@dataclass
class FitConfig:
    """
    store the fitting configuration shared by the library entry points and the cli
    """
    p: int = DEFAULT_ORDER
    l: int = DEFAULT_CANDIDATES
    K: Optional[int] = None
    K_grid: List[int] = field(default_factory=_default_k_grid)
    c: float = 0.0
    M: int = DEFAULT_NONMONOTONE_WINDOW
    gamma_safety: float = DEFAULT_GAMMA_SAFETY
    seed: int = 0
    max_iter: int = DEFAULT_MAX_ITER
    rho: float = 2.0
    eta_min: float = 1e-6
    eta_max: float = 1e6
    sigma: float = 1e-2
    eta0: float = 1.0
    tol_scale: Optional[float] = None
    synthetic: bool = False

    def __post_init__(self) -> None:
        if self.p < 0:
            raise KnotSelectConfigurationError(f'order p <{self.p}> must be nonnegative')
        if self.l < 2:
            raise KnotSelectConfigurationError(f'candidate count l <{self.l}> must be at least 2')
        for k in self.candidate_ks():
            if not 0 <= k <= self.l - 1:
                raise KnotSelectConfigurationError(
                    f'K <{k}> must lie in [0, l-1] = [0, {self.l - 1}]',
                    params={'K': k, 'l': self.l})
        if not self.K_grid:
            raise KnotSelectConfigurationError('K_grid can"t be empty')
        if self.c < 0:
            raise KnotSelectConfigurationError(f'smoothing weight c <{self.c}> must be nonnegative')
        if self.M < 1:
            raise KnotSelectConfigurationError(f'window M <{self.M}> must be at least 1')
        if self.gamma_safety <= 1:
            raise KnotSelectConfigurationError(
                f'gamma safety <{self.gamma_safety}> must exceed 1')
        if self.max_iter < 1:
            raise KnotSelectConfigurationError(f'max_iter <{self.max_iter}> must be positive')
        if self.tol_scale is not None and self.tol_scale < 0:
            raise KnotSelectConfigurationError(f'tol_scale <{self.tol_scale}> must be nonnegative')

    def candidate_ks(self) -> List[int]:
        """the K values this configuration asks for"""
        if self.K is not None:
            return [self.K]
        return list(self.K_grid)
