"""
Matplotlib views of the bench and mc-vs-ode CSV files. Needs the
`viz` extra; importing this module without matplotlib is fine,
calling into it is not.
"""
import logging
from typing import Sequence

import numpy as np

from .records import AggregateRecord, read_aggregates_csv

logger = logging.getLogger(__name__)

__all__ = [
    'plot_aggregates',
    'plot_mc_vs_ode',
    'plot_file',
]

def _pyplot():
    try:
        import matplotlib
        import matplotlib.pyplot as plt
    except ImportError as e:
        raise ImportError("Plotting needs matplotlib. Install with 'pip install substream[viz]'.") from e
    return plt

def plot_aggregates(aggregates : Sequence[AggregateRecord], x : str = 'n', ax = None):
    """
    Median projection error per tracker with a 25-75% ribbon, on a
    log y-axis.

    Arguments
    ---------

    x : str

        'n' for snapshot index, 'time' for median cumulative wall
        time in seconds.

    ax : matplotlib Axes

        Drawn into if given, otherwise a new figure is made.

    Returns the Axes.
    """
    if x not in ('n', 'time'):
        raise ValueError(f"x must be 'n' or 'time', got {x!r}")
    plt = _pyplot()
    if ax is None:
        _, ax = plt.subplots()

    by_tracker : dict[str, list[AggregateRecord]] = {}
    for agg in aggregates:
        by_tracker.setdefault(agg.tracker, []).append(agg)

    for tracker, rows in by_tracker.items():
        rows = sorted(rows, key = lambda row : row.n)
        if x == 'n':
            xs = np.array([row.n for row in rows], dtype=float)
        else:
            xs = np.array([row.median_wall_ns for row in rows], dtype=float) * 1e-9
        med = np.array([row.median for row in rows])
        line, = ax.plot(xs, med, label = tracker)
        ax.fill_between(
            xs,
            [row.q25 for row in rows],
            [row.q75 for row in rows],
            color = line.get_color(),
            alpha = 0.25,
            linewidth = 0,
        )
    ax.set_yscale('log')
    ax.set_xlabel('snapshot' if x == 'n' else 'wall time (s)')
    ax.set_ylabel('projection error')
    ax.legend()
    return ax

def plot_mc_vs_ode(rows : Sequence, ax = None):
    """ Monte Carlo mean +- std against the ODE curve, one color per tracker """
    plt = _pyplot()
    if ax is None:
        _, ax = plt.subplots()

    by_tracker : dict[str, list] = {}
    for row in rows:
        by_tracker.setdefault(row.tracker, []).append(row)

    for tracker, trows in by_tracker.items():
        ts = np.array([float(row.t) for row in trows])
        mean = np.array([float(row.mc_mean) for row in trows])
        std = np.array([float(row.mc_std) for row in trows])
        line, = ax.plot(ts, [float(row.ode) for row in trows], label = f"{tracker} (ODE)")
        ax.errorbar(ts, mean, yerr = std, fmt = 'o', markersize = 3,
            color = line.get_color(), label = f"{tracker} (simulation)")
    ax.set_xlabel('t')
    ax.set_ylabel('cosine similarity')
    ax.legend()
    return ax

def _read_mc_rows(path : str)->list:
    from ..math.theory import McOdeRow
    import csv
    with open(path, 'r', newline='', encoding='utf-8') as f:
        reader = csv.DictReader(f)
        return [
            McOdeRow(line['tracker'], float(line['t']), float(line['mc_mean']),
                float(line['mc_std']), float(line['ode']))
            for line in reader
        ]

def plot_file(in_path : str, out_path : str, x : str = 'n'):
    """ Recognizes a bench aggregate or an mc-vs-ode CSV by its header and saves a figure """
    plt = _pyplot()
    with open(in_path, 'r', encoding='utf-8') as f:
        header = f.readline().strip().split(',')
    if tuple(header) == AggregateRecord._fields:
        ax = plot_aggregates(read_aggregates_csv(in_path), x = x)
    elif 'mc_mean' in header:
        ax = plot_mc_vs_ode(_read_mc_rows(in_path))
    else:
        raise ValueError(f"{in_path} is neither a bench aggregate nor an mc-vs-ode file (header {header})")
    ax.figure.savefig(out_path)
    plt.close(ax.figure)
    logger.info("Saved %s", out_path)
