import numpy as np
from typing import Sequence

from ..core.errors import EmptyInput
from .records import RunRecord, AggregateRecord

__all__ = [
    'aggregate_quantiles',
    'aggregate_records',
]

def aggregate_quantiles(values : Sequence[float], qs : Sequence[float])->list[float]:
    """
    Linear-interpolation quantiles of `values` at the levels `qs`
    (numpy's 'linear' method: position q (n - 1) in the sorted data).

    Raises EmptyInput for no values, ValueError for levels outside [0, 1].
    """
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise EmptyInput("Cannot take quantiles of an empty sequence.")
    qs = np.asarray(qs, dtype=float).ravel()
    if np.any((qs < 0) | (qs > 1)):
        raise ValueError(f"Quantile levels must lie in [0, 1], got {qs}")
    return [float(v) for v in np.quantile(values, qs, method='linear')]

def aggregate_records(records : Sequence[RunRecord])->list[AggregateRecord]:
    """
    One AggregateRecord per (tracker, n), in order of first
    appearance. NaN errors (failed updates) are left out of the
    quantiles; a group with nothing but NaNs aggregates to NaN.
    """
    groups : dict[tuple[str, int], list] = {}
    for rec in records:
        groups.setdefault((rec.tracker, rec.n), []).append(rec)

    out = []
    for (tracker, n), recs in groups.items():
        errors = np.array([rec.proj_error for rec in recs], dtype=float)
        errors = errors[np.isfinite(errors)]
        if errors.size:
            q25, median, q75 = aggregate_quantiles(errors, (0.25, 0.5, 0.75))
        else:
            q25 = median = q75 = float('nan')
        wall = int(np.median([rec.wall_ns for rec in recs]))
        out.append(AggregateRecord(tracker, n, q25, median, q75, wall))
    return out
