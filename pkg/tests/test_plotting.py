import pytest

matplotlib = pytest.importorskip('matplotlib')
matplotlib.use('Agg')

from substream.bench import AggregateRecord, write_csv
from substream.bench.plotting import plot_aggregates, plot_file
from substream.math.theory import McOdeRow

AGGREGATES = [
    AggregateRecord('oja', n, 0.5 / n, 1.0 / n, 2.0 / n, 1000 * n)
    for n in (10, 20, 30)
] + [
    AggregateRecord('grouse', n, 0.1 / n, 0.2 / n, 0.4 / n, 500 * n)
    for n in (10, 20, 30)
]

def test_plot_aggregates_draws_one_line_per_tracker():
    ax = plot_aggregates(AGGREGATES)
    assert len(ax.get_lines()) == 2
    assert ax.get_yscale() == 'log'
    ax = plot_aggregates(AGGREGATES, x = 'time')
    assert ax.get_xlabel() == 'wall time (s)'
    with pytest.raises(ValueError):
        plot_aggregates(AGGREGATES, x = 'snapshots')

def test_plot_file(tmp_path):
    bench_csv = tmp_path / 'run.csv'
    with open(bench_csv, 'w', newline='') as f:
        write_csv(f, AGGREGATES)
    plot_file(str(bench_csv), str(tmp_path / 'run.png'))
    assert (tmp_path / 'run.png').stat().st_size > 0

    mc_csv = tmp_path / 'mc.csv'
    with open(mc_csv, 'w', newline='') as f:
        write_csv(f, [McOdeRow('oja', 0.1 * i, 0.9 - 0.1 * i, 0.01, 0.9 - 0.1 * i) for i in range(5)])
    plot_file(str(mc_csv), str(tmp_path / 'mc.png'))
    assert (tmp_path / 'mc.png').stat().st_size > 0

def test_plot_file_rejects_other_csv(tmp_path):
    other = tmp_path / 'other.csv'
    other.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        plot_file(str(other), str(tmp_path / 'other.png'))
