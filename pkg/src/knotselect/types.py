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

from abc import ABC
from typing import Tuple

import numpy as np


# pylint: disable=R0903
class Curve(ABC):
    """
    univariate function defined on a half-open interval, e.g. a fitted spline
    or a synthetic ground truth
    """
    @property
    def domain(self) -> Tuple[float, float]:
        """
        derived classes must implement this property
        """
        raise NotImplementedError

    def __call__(self, xs: np.ndarray) -> np.ndarray:
        """
        derived classes must implement this function
        """
        raise NotImplementedError
