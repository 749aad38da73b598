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


from typing import Any


class KnotSelectError(Exception):
    """ knotselect error """

    def __init__(self, message: str, code: Any = None, params: Any = None):
        super().__init__(message, code, params)

        self.message = message
        self.code = code
        self.params = params

    def __str__(self) -> str:
        return repr(self)

    def to_dict(self) -> dict:
        """machine readable form, used by the command line driver"""
        return {
            'type': type(self).__name__,
            'message': self.message,
            'code': self.code,
            'params': self.params,
        }


class KnotSelectConfigurationError(KnotSelectError, ValueError):
    """ Raises when configuration out of expected case """


class KnotSelectParameterError(KnotSelectError, ValueError):
    """ A numeric parameter is outside its admissible range """


class KnotSelectKnotError(KnotSelectError, ValueError):
    """ Knot sequence or knot range is invalid """


class KnotSelectDomainError(KnotSelectError, ValueError):
    """ Evaluation point outside the data interval [t0, tl) """


class KnotSelectDimensionError(KnotSelectError, ValueError):
    """ Matrix dimensions do not allow the requested operator """


class KnotSelectSingularityError(KnotSelectError, ArithmeticError):
    """ Expansion scalar of the invertible difference operator is zero """


class KnotSelectRankError(KnotSelectError, ArithmeticError):
    """ Design is rank deficient (polynomial part or re-estimation) """


class KnotSelectNumericalError(KnotSelectError, ArithmeticError):
    """ Solver met a non-finite value """


class KnotSelectSolverError(KnotSelectNumericalError):
    """ Converged solution breaks the knot budget under the exact penalty """


class KnotSelectInstabilityError(KnotSelectNumericalError):
    """ Adaptive ridge system is singular or too ill-conditioned to trust """


class KnotSelectDataError(KnotSelectError, ValueError):
    """ Dataset can not be read or is degenerate """
