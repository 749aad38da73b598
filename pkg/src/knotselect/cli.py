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

import argparse
import json
import sys
from contextlib import ExitStack
from typing import (
    IO,
    Any,
    Callable,
    Dict,
    List,
    NoReturn,
    Optional,
    Sequence,
)

import pandas as pd

from knotselect.aspline import (
    AsplineParams,
    aspline_fit,
    reestimate,
    residual_sum_of_squares,
    select_lambda_by_bic,
)
from knotselect.basis import (
    KnotGrid,
    SplineModel,
    make_equispaced_grid,
)
from knotselect.config import (
    DEFAULT_CANDIDATES,
    DEFAULT_GAMMA_SAFETY,
    DEFAULT_MAX_ITER,
    DEFAULT_MC_SAMPLES,
    DEFAULT_NONMONOTONE_WINDOW,
    DEFAULT_ORDER,
    FitConfig,
    get_logger,
)
from knotselect.dataset import (
    Dataset,
    knot_range,
    load_csv,
    plot_frame,
    save_model,
)
from knotselect.exceptions import (
    KnotSelectConfigurationError,
    KnotSelectDataError,
    KnotSelectError,
)
from knotselect.experiments import (
    BenchInstance,
    SyntheticSpec,
    bench_monotone_vs_nonmonotone,
    compare_with_aspline,
    gen_synthetic,
    log_mse_summary,
    select_K_by_bic,
    summarize_ratios,
    sweep,
)
from knotselect.gist import (
    GistParams,
    GistSolver,
    IterationRecord,
)
from knotselect.reduction import build_problem
from knotselect.version import VERSION

log = get_logger('Cli')

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

KIND_ALIASES = {
    'random': 'random_coef',
    'random_coef': 'random_coef',
    'sparse': 'sparse_truth',
    'sparse_truth': 'sparse_truth',
    'bimodal': 'bimodal_gauss',
    'bimodal_gauss': 'bimodal_gauss',
}


class _Parser(argparse.ArgumentParser):
    """argument parser that raises instead of printing usage and exiting"""

    def error(self, message: str) -> NoReturn:
        raise KnotSelectConfigurationError(message, code='usage')


def parse_int_list(text: str) -> List[int]:
    """`1-20`, `3,5,8` or a mix such as `1-3,10`"""
    values: List[int] = []
    try:
        for part in text.split(','):
            part = part.strip()
            if '-' in part[1:]:
                start, stop = part.split('-', 1)
                values.extend(range(int(start), int(stop) + 1))
            elif part:
                values.append(int(part))
    except ValueError as e:
        raise KnotSelectConfigurationError(f'invalid integer list <{text}>', code='usage') from e
    if not values:
        raise KnotSelectConfigurationError(f'empty integer list <{text}>', code='usage')
    return values


def parse_float_list(text: str) -> List[float]:
    """comma separated reals"""
    try:
        return [float(part) for part in text.split(',') if part.strip()]
    except ValueError as e:
        raise KnotSelectConfigurationError(f'invalid number list <{text}>', code='usage') from e


def _add_data_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--data', required=True, help='csv file with a header row, - for stdin')
    parser.add_argument('--x-column', default='x')
    parser.add_argument('--y-column', default='y')
    parser.add_argument('--no-standardize', action='store_true',
                        help='keep the response as read instead of scaling it to mean 0, sd 1')
    parser.add_argument('--synthetic', action='store_true',
                        help='place the knots on [0, 1) instead of the padded data range')


def _add_fit_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--p', type=int, default=DEFAULT_ORDER, help='spline order')
    parser.add_argument('--l', type=int, default=DEFAULT_CANDIDATES,
                        help='number of intervals, l-1 candidate knots')
    parser.add_argument('--c', type=float, default=0.0, help='smoothing weight')
    parser.add_argument('--M', type=int, default=DEFAULT_NONMONOTONE_WINDOW,
                        help='nonmonotone line search window, 1 is monotone')
    parser.add_argument('--gamma-safety', type=float, default=DEFAULT_GAMMA_SAFETY)
    parser.add_argument('--max-iter', type=int, default=DEFAULT_MAX_ITER)
    parser.add_argument('--tol', type=float, default=None,
                        help='stopping threshold on the step, default sqrt(K(l-1)n) 1e-6')


def _add_output_option(parser: argparse.ArgumentParser, help_text: str) -> None:
    parser.add_argument('--output', default='-', help=f'{help_text}, - for stdout')


def build_parser() -> argparse.ArgumentParser:
    """the `knotselect` command line"""
    parser = _Parser(prog='knotselect',
                     description='B-spline regression with simultaneous knot selection')
    parser.add_argument('--version', action='version', version=f'%(prog)s {VERSION}')
    commands = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    fit = commands.add_parser('fit', help='fit a spline using at most K knots')
    _add_data_options(fit)
    _add_fit_options(fit)
    fit.add_argument('--K', type=int, required=True, help='knot budget')
    fit.add_argument('--trace', default=None, help='json lines file of solver iterations')
    fit.add_argument('--reestimate', action='store_true',
                     help='refit by least squares on the knots the solution uses')
    fit.add_argument('--plot', default=None, help='csv file of the fit on a dense grid')
    fit.add_argument('--residuals', default=None, help='csv file of x, y, fit, residual')
    fit.add_argument('--timing', action='store_true', help='add cpu and wall time to the output')
    _add_output_option(fit, 'model json file')

    select = commands.add_parser('select', help='choose K (or lambda) by BIC')
    _add_data_options(select)
    _add_fit_options(select)
    select.add_argument('--method', choices=['gist', 'aspline'], default='gist')
    select.add_argument('--K-grid', type=parse_int_list, default=list(range(1, 21)))
    select.add_argument('--lambdas', type=parse_float_list, default=None,
                        help='lambda grid of the adaptive ridge, default i^2 1e-4 for i=1..100')
    select.add_argument('--table', default=None, help='csv file of the whole sweep')
    select.add_argument('--workers', type=int, default=None)
    _add_output_option(select, 'model json file')

    synth = commands.add_parser('synth', help='draw a synthetic data set')
    synth.add_argument('--kind', choices=sorted(KIND_ALIASES), default='random_coef')
    synth.add_argument('--n', type=int, default=None)
    synth.add_argument('--l', type=int, default=100)
    synth.add_argument('--p', type=int, default=DEFAULT_ORDER)
    synth.add_argument('--noise', type=float, default=0.1)
    synth.add_argument('--seed', type=int, default=0)
    synth.add_argument('--knot-rule', choices=['candidates', 'uniform'], default='candidates')
    _add_output_option(synth, 'csv file')

    bench = commands.add_parser('bench', help='timing or accuracy study')
    bench.add_argument('--study', choices=['timing', 'mse'], default='timing')
    bench.add_argument('--axis', choices=['l', 'K', 'c'], default='l')
    bench.add_argument('--values', type=parse_float_list, default=None)
    bench.add_argument('--repetitions', type=int, default=100)
    bench.add_argument('--n', type=int, default=None)
    bench.add_argument('--l', type=int, default=100)
    bench.add_argument('--K', type=int, default=10)
    bench.add_argument('--c', type=float, default=0.0)
    bench.add_argument('--seed', type=int, default=0)
    bench.add_argument('--max-iter', type=int, default=DEFAULT_MAX_ITER)
    bench.add_argument('--kind', choices=sorted(KIND_ALIASES), default='sparse_truth')
    bench.add_argument('--knot-rule', choices=['candidates', 'uniform'], default='candidates')
    bench.add_argument('--K-grid', type=parse_int_list, default=list(range(1, 21)))
    bench.add_argument('--samples', type=int, default=DEFAULT_MC_SAMPLES)
    bench.add_argument('--workers', type=int, default=None)
    bench.add_argument('--summary', default=None, help='csv file of the aggregated table')
    _add_output_option(bench, 'csv file of the per instance table')

    aspline = commands.add_parser('aspline', help='adaptive ridge baseline fit')
    _add_data_options(aspline)
    aspline.add_argument('--p', type=int, default=DEFAULT_ORDER)
    aspline.add_argument('--l', type=int, default=DEFAULT_CANDIDATES)
    aspline.add_argument('--lambda', dest='lam', type=float, required=True)
    aspline.add_argument('--epsilon', type=float, default=1e-5)
    aspline.add_argument('--max-iter', type=int, default=100)
    _add_output_option(aspline, 'model json file')
    return parser


def _config(args: argparse.Namespace, **extra: Any) -> FitConfig:
    return FitConfig(p=args.p, l=args.l, c=args.c, M=args.M,
                     gamma_safety=args.gamma_safety, max_iter=args.max_iter, tol_scale=args.tol,
                     synthetic=args.synthetic, **extra)


def _load(args: argparse.Namespace, p: int) -> Dataset:
    dataset = load_csv(args.data, args.x_column, args.y_column,
                       standardize=not args.no_standardize)
    dataset.check_size(p)
    return dataset


def _grid(args: argparse.Namespace, dataset: Dataset) -> KnotGrid:
    t0, tl = knot_range(dataset, synthetic=args.synthetic)
    return make_equispaced_grid(t0, tl, args.l, args.p)


def _write_frame(frame: pd.DataFrame, path: str) -> None:
    if path == '-':
        frame.to_csv(sys.stdout, index=False)
        return
    try:
        frame.to_csv(path, index=False)
    except OSError as e:
        raise KnotSelectDataError(f'can"t write <{path}>: {e}', params={'path': path}) from e


def _open_trace(path: str) -> IO[str]:
    try:
        return open(path, 'w', encoding='utf-8')  # pylint: disable=consider-using-with
    except OSError as e:
        raise KnotSelectDataError(f'can"t write trace <{path}>: {e}', params={'path': path}) from e


def _knot_fields(grid: KnotGrid, indices: Sequence[int]) -> Dict[str, Any]:
    return {
        'active_knots': [grid.knot(i) for i in indices],
        'active_knot_indices': list(indices),
    }


def _data_fields(dataset: Dataset) -> Dict[str, Any]:
    return {
        'n': dataset.n,
        'standardized': dataset.standardized,
        'y_mean': dataset.y_mean,
        'y_scale': dataset.y_scale,
    }


def _write_extras(args: argparse.Namespace, model: SplineModel, dataset: Dataset) -> None:
    if getattr(args, 'plot', None):
        _write_frame(plot_frame(model), args.plot)
    if getattr(args, 'residuals', None):
        fitted = model(dataset.xs)
        _write_frame(pd.DataFrame({'x': dataset.xs, 'y': dataset.ys,
                                   'fit': fitted, 'residual': dataset.ys - fitted}),
                     args.residuals)


def _trace_writer(handle: IO[str], timing: bool) -> Callable[[IterationRecord], None]:
    def write(record: IterationRecord) -> None:
        payload = record.to_dict()
        if not timing:
            payload.pop('cpu_time')
        handle.write(json.dumps(payload) + '\n')
    return write


def run_fit(args: argparse.Namespace) -> int:
    """`fit`"""
    config = _config(args, K=args.K)
    dataset = _load(args, config.p)
    grid = _grid(args, dataset)
    problem = build_problem(grid, dataset.xs, dataset.ys, c=config.c,
                            safety=config.gamma_safety)
    solver = GistSolver(problem, GistParams.from_config(config))

    with ExitStack() as stack:
        if args.trace:
            handle = stack.enter_context(_open_trace(args.trace))
            solver.on('iteration', _trace_writer(handle, args.timing))
        result = solver.solve(args.K)

    if args.reestimate:
        model = reestimate(grid, dataset.xs, dataset.ys, result.active_knots)
    else:
        model = SplineModel(grid, result.alpha)

    meta: Dict[str, Any] = {
        **_knot_fields(grid, result.active_knots),
        'K': result.K,
        'c': config.c,
        'gamma': result.gamma,
        'objective': result.objective,
        'converged': result.converged,
        'iterations': result.iterations,
        'line_search_total': result.line_search_total,
        'reestimated': bool(args.reestimate),
        'ssr': residual_sum_of_squares(model, dataset.xs, dataset.ys),
        **_data_fields(dataset),
    }
    if args.timing:
        meta.update(cpu_time=result.cpu_time, wall_time=result.wall_time)
    save_model(args.output, model, meta)
    _write_extras(args, model, dataset)
    return EXIT_OK


def run_select(args: argparse.Namespace) -> int:
    """`select`"""
    ks = [k for k in args.K_grid if k <= args.l - 1]
    if not ks:
        raise KnotSelectConfigurationError(
            f'no K of {args.K_grid} fits l={args.l}', code='usage')
    config = _config(args, K_grid=ks)
    dataset = _load(args, config.p)
    grid = _grid(args, dataset)

    if args.method == 'aspline':
        selection = select_lambda_by_bic(grid, dataset.xs, dataset.ys, args.lambdas,
                                         workers=args.workers)
        model = selection.best.model
        table = selection.table
        meta: Dict[str, Any] = {
            'method': 'aspline',
            'lambda': selection.best.lam,
            'selected_knots': [grid.knot(i) for i in selection.best.selected],
            'selected_knot_indices': list(selection.best.selected),
            'bic': selection.best.bic,
            'ssr': selection.best.ssr,
            'unstable': selection.unstable,
        }
    else:
        report = select_K_by_bic(dataset.xs, dataset.ys, grid, ks, config, args.workers)
        assert report.best.model is not None
        model = report.best.model
        table = report.table
        meta = {
            'method': 'gist',
            'K': report.K,
            'selected_knots': [grid.knot(i) for i in report.best.selected],
            'selected_knot_indices': list(report.best.selected),
            'bic': report.best.bic,
            'ssr': report.best.ssr,
            'converged': report.best.result.converged,
            'iterations': report.best.result.iterations,
        }
    meta.update(_data_fields(dataset))
    save_model(args.output, model, meta)
    if args.table:
        _write_frame(table, args.table)
    return EXIT_OK


def run_synth(args: argparse.Namespace) -> int:
    """`synth`"""
    kind = KIND_ALIASES[args.kind]
    n = args.n if args.n is not None else (80 if kind == 'bimodal_gauss' else 200)
    spec = SyntheticSpec(kind=kind, n=n, l=args.l, p=args.p, noise=args.noise,
                         seed=args.seed, knot_rule=args.knot_rule)
    _write_frame(gen_synthetic(spec).to_frame(), args.output)
    return EXIT_OK


def _integer_values(axis: str, values: Sequence[float]) -> List[int]:
    for value in values:
        if not float(value).is_integer():
            raise KnotSelectDataError(
                f'axis <{axis}> takes integers, got {value}',
                params={'axis': axis, 'value': value})
    return [int(value) for value in values]


def run_bench(args: argparse.Namespace) -> int:
    """`bench`"""
    if args.study == 'timing':
        base = BenchInstance(n=args.n or 200, l=args.l, K=args.K, c=args.c)
        values = args.values
        if values is not None and args.axis != 'c':
            values = _integer_values(args.axis, values)
        table = bench_monotone_vs_nonmonotone(sweep(args.axis, values, base),
                                              args.repetitions, args.seed, args.max_iter)
        summary = summarize_ratios(table, by=[args.axis])
    else:
        spec = SyntheticSpec(kind=KIND_ALIASES[args.kind], n=args.n or 100, l=args.l,
                             seed=args.seed, knot_rule=args.knot_rule)
        table = compare_with_aspline(spec, args.repetitions, args.K_grid,
                                     samples=args.samples, workers=args.workers)
        summary = log_mse_summary(table)
    log.info('run_bench() summary\n%s', summary.to_string(index=False))
    _write_frame(table, args.output)
    if args.summary:
        _write_frame(summary, args.summary)
    return EXIT_OK


def run_aspline(args: argparse.Namespace) -> int:
    """`aspline`"""
    dataset = _load(args, args.p)
    grid = _grid(args, dataset)
    fit = aspline_fit(grid, dataset.xs, dataset.ys,
                      AsplineParams(lam=args.lam, epsilon=args.epsilon, max_iter=args.max_iter))
    meta = {
        'method': 'aspline',
        **fit.to_dict(),
        'selected_knots': [grid.knot(i) for i in fit.selected],
        **_data_fields(dataset),
    }
    save_model(args.output, fit.model, meta)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    'fit': run_fit,
    'select': run_select,
    'synth': run_synth,
    'bench': run_bench,
    'aspline': run_aspline,
}


def _report(error: KnotSelectError) -> None:
    sys.stderr.write(json.dumps({'error': error.to_dict()}, default=str) + '\n')


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """
    run one command; 0 on success, 1 on a failure of the run, 2 on a usage error
    with a json error object on stderr
    """
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except KnotSelectError as e:
        _report(e)
        if isinstance(e, KnotSelectConfigurationError) and e.code == 'usage':
            return EXIT_USAGE
        return EXIT_FAILURE
    except SystemExit as e:
        # --help and --version
        return int(e.code or 0)


def main() -> None:
    """console script entry"""
    sys.exit(run_cli())


if __name__ == '__main__':
    main()
