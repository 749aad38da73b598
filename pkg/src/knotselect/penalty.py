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
from typing import Tuple, Union, overload

import numpy as np

from knotselect.exceptions import KnotSelectParameterError


@dataclass(frozen=True)
class TrimmedSpec:
    """cardinality budget K of a vector of dimension d"""
    K: int
    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise KnotSelectParameterError(f'dimension d <{self.d}> must be positive')
        if not 0 <= self.K <= self.d:
            raise KnotSelectParameterError(
                f'K <{self.K}> must lie in [0, d] = [0, {self.d}]',
                params={'K': self.K, 'd': self.d})


@overload
def soft_threshold(a: float, lam: float) -> float: ...


@overload
def soft_threshold(a: np.ndarray, lam: float) -> np.ndarray: ...


def soft_threshold(a: Union[float, np.ndarray], lam: float) -> Union[float, np.ndarray]:
    """sign(a) * max(|a| - lam, 0), elementwise"""
    if lam < 0:
        raise KnotSelectParameterError(f'threshold <{lam}> must be nonnegative')
    values = np.sign(a) * np.maximum(np.abs(a) - lam, 0.0)
    if np.ndim(a) == 0:
        return float(values)
    return values


def top_k_indices(magnitudes: np.ndarray, K: int) -> np.ndarray:  # noqa: N803
    """
    indices of the K largest entries, lowest index first among ties at the
    K-th rank, found by partial selection
    """
    d = magnitudes.size
    if K <= 0:
        return np.zeros(0, dtype=int)
    if K >= d:
        return np.arange(d)
    kth = np.partition(magnitudes, d - K)[d - K]
    above = np.flatnonzero(magnitudes > kth)
    ties = np.flatnonzero(magnitudes == kth)[:K - above.size]
    return np.sort(np.concatenate([above, ties]))


def project_top_k(z: np.ndarray, K: int) -> np.ndarray:  # noqa: N803
    """z with every entry outside its K largest magnitudes set to zero"""
    z = np.asarray(z, dtype=float)
    projected = np.zeros_like(z)
    kept = top_k_indices(np.abs(z), K)
    projected[kept] = z[kept]
    return projected


def trimmed_l1(z: np.ndarray, K: int) -> float:  # noqa: N803
    """
    T_K(z): the sum of the d - K smallest absolute values, i.e. the l1 norm
    minus the largest-K norm; zero exactly when z has at most K nonzeros
    """
    z = np.asarray(z, dtype=float)
    TrimmedSpec(K=K, d=max(z.size, 1))
    if K >= z.size:
        return 0.0
    magnitudes = np.abs(z)
    return float(np.partition(magnitudes, z.size - K - 1)[:z.size - K].sum())


def prox_trimmed_l1(a: np.ndarray, lam: float, K: int) -> np.ndarray:  # noqa: N803
    """
    one member of argmin_z lam * T_K(z) + 1/2 ||z - a||^2

    the K largest |a_j| are kept as they are, every other entry is
    soft-thresholded by lam
    """
    a = np.asarray(a, dtype=float)
    TrimmedSpec(K=K, d=max(a.size, 1))
    result, _ = prox_with_penalty(a, lam, K)
    return result


def prox_with_penalty(a: np.ndarray, lam: float, K: int) -> Tuple[np.ndarray, float]:  # noqa: N803
    """
    the prox point of `prox_trimmed_l1` together with T_K at that point

    the kept entries stay the K largest in magnitude after thresholding,
    so T_K is the sum of the thresholded magnitudes outside them
    """
    if lam <= 0:
        raise KnotSelectParameterError(f'lambda <{lam}> must be positive')
    magnitudes = np.abs(a)
    if K >= a.size:
        return a.copy(), 0.0
    shrunk = np.maximum(magnitudes - lam, 0.0)
    kept = top_k_indices(magnitudes, K)
    penalty = float(shrunk.sum() - shrunk[kept].sum())
    result = np.copysign(shrunk, a)
    result[kept] = a[kept]
    return result, penalty
