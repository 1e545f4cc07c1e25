import csv
import os

import numpy as np
import pytest

from substream.bench.cli import main, parse_grid
from substream.bench import read_aggregates_csv, read_records_csv
from substream.core.errors import ConfigError

SMALL_BENCH = [
    'bench', '--d', '20', '--k', '2', '--trials', '2', '--snapshots', '40',
    '--trackers', 'grouse,oja', '--workers', '1', '--no-timing',
]

def test_bench_writes_both_files(tmp_path):
    out = str(tmp_path / 'run.csv')
    assert main(SMALL_BENCH + ['--out', out]) == 0
    aggregates = read_aggregates_csv(out)
    records = read_records_csv(str(tmp_path / 'run.records.csv'))
    assert {agg.tracker for agg in aggregates} == {'grouse', 'oja'}
    assert {rec.trial for rec in records} == {0, 1}
    assert all(rec.wall_ns == 0 for rec in records)

def test_bench_reruns_match(tmp_path):
    outs = [str(tmp_path / name) for name in ('a.csv', 'b.csv')]
    for out in outs:
        assert main(SMALL_BENCH + ['--out', out]) == 0
    with open(outs[0], 'rb') as fa, open(outs[1], 'rb') as fb:
        assert fa.read() == fb.read()

def test_bench_to_stdout(capsys):
    assert main(SMALL_BENCH + ['--trials', '1']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 'tracker,n,q25,median,q75,median_wall_ns'
    assert len(lines) == 1 + 2 * 4

def test_bench_tracker_param(tmp_path):
    out = str(tmp_path / 'run.csv')
    assert main(SMALL_BENCH + ['--param', 'oja.step=0.05', '--out', out]) == 0
    # parameters for a tracker outside the panel
    assert main(SMALL_BENCH + ['--param', 'brand.discount=0.9', '--out', out]) == 1
    assert main(SMALL_BENCH + ['--param', 'nodot=0.9', '--out', out]) == 1
    assert main(SMALL_BENCH + ['--param', 'oja.discount=0.9', '--out', out]) == 1

def test_config_file_and_flag_precedence(tmp_path):
    config = tmp_path / 'bench.cfg'
    config.write_text(
        "# small run\n"
        "d = 20\n"
        "k = 2\n"
        "trials = 1\n"
        "snapshots = 30\n"
        "record-every = 5\n"
        "trackers = grouse,petrels\n"
        "petrels.discount = 0.95\n"
        "workers = 1\n"
        "timing = False\n"
    )
    out = str(tmp_path / 'run.csv')
    assert main(['bench', '--config', str(config), '--trials', '3', '--out', out]) == 0
    records = read_records_csv(str(tmp_path / 'run.records.csv'))
    assert {rec.trial for rec in records} == {0, 1, 2}
    assert sorted({rec.n for rec in records}) == [5, 10, 15, 20, 25, 30]
    assert {rec.tracker for rec in records} == {'grouse', 'petrels'}

def test_unknown_config_key(tmp_path):
    config = tmp_path / 'bad.cfg'
    config.write_text("d = 20\nbogus = 1\n")
    assert main(['bench', '--config', str(config)]) == 1
    assert main(['bench', '--config', str(tmp_path / 'missing.cfg')]) == 1

def test_usage_errors():
    assert main([]) == 1
    assert main(['bench', '--d', 'twenty']) == 1
    assert main(['nonsense']) == 1
    assert main(['bench', '--d', '20', '--k', '20', '--trials', '1']) == 1

def test_version(capsys):
    assert main(['--version']) == 0
    assert 'substream' in capsys.readouterr().out

def test_ode_csv(tmp_path):
    out = tmp_path / 'ode.csv'
    args = ['ode', '--alpha', '0.5', '--sigma', '0.1', '--tau', '1', '--t-max', '1', '--samples', '5']
    assert main(args + ['--out', str(out)]) == 0
    with open(out, newline='') as f:
        rows = list(csv.DictReader(f))
    assert list(rows[0].keys()) == ['t', 's', 'g', 'error']
    assert [float(row['t']) for row in rows] == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])
    assert float(rows[0]['s']) == pytest.approx(0.1)
    assert all(row['g'] == '' for row in rows)

def test_ode_petrels_has_g(tmp_path):
    out = tmp_path / 'ode.csv'
    args = ['ode', '--model', 'petrels', '--alpha', '0.5', '--sigma', '0.2', '--mu', '10',
        '--t-max', '1', '--h', '1e-3', '--samples', '3', '--out', str(out)]
    assert main(args) == 0
    with open(out, newline='') as f:
        rows = list(csv.DictReader(f))
    assert float(rows[0]['g']) == pytest.approx(1.0)
    assert all(np.isfinite(float(row['g'])) for row in rows)

def test_ode_errors():
    assert main(['ode', '--sigma', '0.1', '--tau', '1']) == 1
    assert main(['ode', '--alpha', '0.5', '--sigma', '0.1']) == 1
    assert main(['ode', '--alpha', '0.5', '--sigma', '0.1', '--tau', '1', '--samples', '1']) == 1
    # a step far beyond the stable range diverges while running
    diverging = ['ode', '--model', 'petrels', '--alpha', '0.5', '--sigma', '0.2', '--mu', '200',
        '--h', '0.5', '--t-max', '5']
    assert main(diverging) == 2

def test_phase_csv(tmp_path):
    out = tmp_path / 'phase.csv'
    args = ['phase', '--sigma', '0.5', '--alpha-grid', '0.5', '--mu-grid', '1,100',
        '--d', '50', '--t-max', '1', '--workers', '1', '--out', str(out)]
    assert main(args) == 0
    with open(out, newline='') as f:
        rows = list(csv.DictReader(f))
    assert [float(row['mu']) for row in rows] == [1.0, 100.0]
    assert rows[0]['informative'] == '1'
    assert rows[1]['informative'] == '0'
    assert main(['phase', '--sigma', '0.5']) == 1

def test_mc_vs_ode_csv(tmp_path):
    out = tmp_path / 'mc.csv'
    args = ['mc-vs-ode', '--alpha', '0.5', '--sigma', '0.1', '--tau', '1', '--d', '40',
        '--trials', '2', '--t-max', '0.5', '--workers', '1', '--out', str(out)]
    assert main(args) == 0
    with open(out, newline='') as f:
        rows = list(csv.DictReader(f))
    assert list(rows[0].keys()) == ['tracker', 't', 'mc_mean', 'mc_std', 'ode']
    assert {row['tracker'] for row in rows} == {'oja', 'grouse'}

def test_plot_needs_paths(tmp_path):
    assert main(['plot', '--out', str(tmp_path / 'x.png')]) == 1
    assert main(['plot', '--in', str(tmp_path / 'x.csv')]) == 1

def test_parse_grid():
    assert parse_grid('0.1:0.5:5', 'alpha_grid') == pytest.approx([0.1, 0.2, 0.3, 0.4, 0.5])
    assert parse_grid('1, 10,100', 'mu_grid') == pytest.approx([1.0, 10.0, 100.0])
    with pytest.raises(ConfigError) as e:
        parse_grid('0:1', 'mu_grid')
    assert e.value.field == 'mu_grid'
    with pytest.raises(ConfigError):
        parse_grid('0:1:0', 'mu_grid')
    with pytest.raises(ConfigError):
        parse_grid('a,b', 'mu_grid')
