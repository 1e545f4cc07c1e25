"""
Benchmark harness: the multi-trial protocol, CSV records and
their quantile aggregation, the command line and plots.
"""
from .records import (
    RunRecord, DebugRunRecord, AggregateRecord,
    write_csv, read_aggregates_csv, read_records_csv,
)
from .aggregate import aggregate_quantiles, aggregate_records
from .runner import (
    DEFAULT_PANEL, BenchConfig, run_trial, run_bench, records_path_for, write_outputs,
)
