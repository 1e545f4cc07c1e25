"""
Row types of the benchmark CSV files and their readers/writers.

    records     tracker,trial,n,proj_error,det_sim,wall_ns[,stream_checksum]
    aggregates  tracker,n,q25,median,q75,median_wall_ns

Floats are written with repr() so a file read back gives the
same doubles, and rows always end in '\\n' so two runs with the
same seed produce byte-identical files.
"""
import csv
from typing import NamedTuple, Sequence

__all__ = [
    'RunRecord',
    'DebugRunRecord',
    'AggregateRecord',
    'write_csv',
    'read_aggregates_csv',
    'read_records_csv',
]

class RunRecord(NamedTuple):
    """ One (tracker, trial, recorded snapshot) measurement; wall_ns is cumulative update time """
    tracker : str
    trial : int
    n : int
    proj_error : float
    det_sim : float
    wall_ns : int

class DebugRunRecord(NamedTuple):
    """ RunRecord plus the CRC32 of every observation the tracker consumed so far """
    tracker : str
    trial : int
    n : int
    proj_error : float
    det_sim : float
    wall_ns : int
    stream_checksum : int

class AggregateRecord(NamedTuple):
    """ Quantiles of proj_error over trials at one (tracker, n) """
    tracker : str
    n : int
    q25 : float
    median : float
    q75 : float
    median_wall_ns : int

def _format(value)->str:
    if isinstance(value, float):
        return repr(value)
    return str(value)

def write_csv(stream, rows : Sequence[NamedTuple], fields : Sequence[str] = None):
    """
    Writes NamedTuple rows with a header line to an open text
    stream. `fields` gives the header when `rows` may be empty.
    """
    if fields is None:
        if not rows:
            raise ValueError("Cannot infer a CSV header from zero rows.")
        fields = type(rows[0])._fields
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_format(val) for val in row])

def _read(path : str, row_type : type, converters : Sequence)->list:
    with open(path, 'r', newline='', encoding='utf-8') as f:
        reader = csv.reader(f)
        header = next(reader)
        if tuple(header[:len(row_type._fields)]) != row_type._fields:
            raise ValueError(
                f"{path} does not look like a {row_type.__name__} file "
                f"(header {header}, expected {list(row_type._fields)})"
            )
        return [
            row_type(*(conv(val) for conv, val in zip(converters, line)))
            for line in reader if line
        ]

def read_aggregates_csv(path : str)->list[AggregateRecord]:
    return _read(path, AggregateRecord, (str, int, float, float, float, int))

def read_records_csv(path : str)->list[RunRecord]:
    """ Reads a records file (a debug checksum column, if present, is dropped) """
    return _read(path, RunRecord, (str, int, int, float, float, int))
