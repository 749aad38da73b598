"""
timing and accuracy study unit test
"""
import math

import pandas as pd
import pytest

from knotselect.exceptions import KnotSelectParameterError

from .benchmark import (
    BenchInstance,
    bench_monotone_vs_nonmonotone,
    compare_with_aspline,
    log_mse_summary,
    summarize_ratios,
    sweep,
    timing_ratio,
)
from .synthetic import SyntheticSpec


def test_timing_ratio() -> None:
    """self comparison is 0, twice as slow is 1"""
    assert timing_ratio(0.5, 0.5) == 0.0
    assert timing_ratio(2.0, 1.0) == pytest.approx(1.0)
    assert timing_ratio(0.0, 0.0) == 0.0


def test_sweep() -> None:
    """one axis varies, the others keep the base values"""
    instances = sweep('K', [2, 4], BenchInstance(n=50, l=20))
    assert [(i.n, i.l, i.K, i.c) for i in instances] == [(50, 20, 2, 0.0), (50, 20, 4, 0.0)]
    assert [i.l for i in sweep('l')] == [25, 50, 100, 200]
    with pytest.raises(KnotSelectParameterError):
        sweep('n')
    with pytest.raises(KnotSelectParameterError):
        BenchInstance(l=10, K=10)


def test_bench_table_shape() -> None:
    """one row per instance and repetition"""
    instances = sweep('c', [0.0, 0.1], BenchInstance(n=60, l=15, K=3))
    table = bench_monotone_vs_nonmonotone(instances, repetitions=2, max_iter=2000)
    assert len(table) == 4
    assert list(table['c']) == [0.0, 0.0, 0.1, 0.1]
    assert list(table['seed']) == [0, 1, 0, 1]
    assert (table[['tau_mono', 'tau_non']] >= 0).all().all()
    for row in table.itertuples():
        assert row.log2_ratio == pytest.approx(timing_ratio(row.tau_mono, row.tau_non))
    with pytest.raises(KnotSelectParameterError):
        bench_monotone_vs_nonmonotone(instances, repetitions=0)


def test_summarize_ratios() -> None:
    """quartiles and the share of faster nonmonotone runs"""
    table = pd.DataFrame({'l': [50] * 4 + [100] * 4,
                          'log2_ratio': [-1.0, 0.5, 1.0, 2.0, 0.0, 0.0, 0.0, 3.0]})
    overall = summarize_ratios(table)
    assert overall['count'].iloc[0] == 8
    assert overall['faster'].iloc[0] == pytest.approx(4 / 8)
    assert overall['twice_as_fast'].iloc[0] == pytest.approx(3 / 8)

    by_l = summarize_ratios(table, by=['l']).set_index('l')
    assert by_l.loc[50, 'median'] == pytest.approx(0.75)
    assert by_l.loc[50, 'faster'] == pytest.approx(0.75)
    assert by_l.loc[100, 'faster'] == pytest.approx(0.25)


def test_compare_with_aspline() -> None:
    """both methods are scored on the same data set"""
    spec = SyntheticSpec(kind='sparse_truth', n=100, l=20, seed=0)
    table = compare_with_aspline(spec, repetitions=2, K_grid=[2, 5, 8],
                                 lambdas=[1e-2, 1e-1, 1.0], samples=2000, workers=1)
    assert len(table) == 2
    assert list(table['n']) == [100, 100] and list(table['l']) == [20, 20]
    assert set(table['K']) <= {2, 5, 8}
    for column in ('proposed_log_mse', 'aspline_log_mse'):
        assert table[column].map(math.isfinite).all(), column
    summary = log_mse_summary(table)
    assert list(summary['quantile']) == [0.25, 0.5, 0.75]


def test_compare_discards_unstable_data() -> None:
    """a lambda grid that is unstable on every data set exhausts the retries"""
    spec = SyntheticSpec(kind='sparse_truth', n=20, l=60, seed=1)
    table = compare_with_aspline(spec, repetitions=1, K_grid=[2], lambdas=[1e-12],
                                 samples=100, max_retries=2, workers=1)
    assert table['discarded'].iloc[0] == 3
    assert math.isnan(table['proposed_log_mse'].iloc[0])
