"""
The benchmark protocol.

For every trial: fresh seeds, one random U0 shared by every
tracker, one pass over the scenario stream feeding all trackers
the identical observations (sequentially, so timings compare),
and metrics against the current ground truth every
`record_every` snapshots.
"""
import os
import time
import zlib
import logging
from functools import partial
from typing import Sequence, Union

import numpy as np

from ..core.kinds import TrackerName
from ..core.errors import ConfigError
from ..core.datagen import SpikedModelConfig, ScenarioConfig, as_generator, scenario_stream
from ..core.subspace import Subspace, orthonormalize, projection_error, determinant_similarity
from ..core.workers import pool_map
from ..math.trackers import tracker_factory, parse_tracker_name
from .records import RunRecord, DebugRunRecord, AggregateRecord, write_csv
from .aggregate import aggregate_records

logger = logging.getLogger(__name__)

__all__ = [
    'DEFAULT_PANEL',
    'BenchConfig',
    'run_trial',
    'run_bench',
    'records_path_for',
    'write_outputs',
]

DEFAULT_PANEL = (
    TrackerName.GROUSE,
    TrackerName.PETRELS,
    TrackerName.OJA,
    TrackerName.MD_ISVD,
    TrackerName.BRAND,
    TrackerName.PIMC,
)

class BenchConfig():
    """
    Everything one benchmark run needs.

    Arguments
    ---------

    scenario : ScenarioConfig

    model : SpikedModelConfig

    trackers : sequence of names or (name, params) pairs

        Defaults to DEFAULT_PANEL with default parameters.

    trials : int

        >= 1.

    record_every : int

        Snapshot stride of the recorded metrics, >= 1. The last
        snapshot is always recorded.

    seed : int

        Base seed; trial streams are spawned from it.

    output_path : str

        Where write_outputs puts the aggregates.

    workers : int

        Pool size (capped by SUBSTREAM_THREADS). None uses the cap.

    timing : bool

        When False, wall_ns is written as 0 so files compare byte-for-byte.

    debug : bool

        Adds a per-tracker stream checksum column to the records.
    """

    def __init__(
            self,
            scenario : ScenarioConfig,
            model : SpikedModelConfig,
            trackers : Sequence[Union[str, TrackerName, tuple]] = DEFAULT_PANEL,
            trials : int = 1,
            record_every : int = 10,
            seed : int = 0,
            output_path : str = None,
            workers : int = None,
            timing : bool = True,
            debug : bool = False,
        ):
        if int(trials) < 1:
            raise ConfigError('trials', f"must be at least 1, got {trials}")
        if int(record_every) < 1:
            raise ConfigError('record_every', f"must be at least 1, got {record_every}")
        if (workers is not None) and int(workers) < 1:
            raise ConfigError('workers', f"must be at least 1, got {workers}")
        if not trackers:
            raise ConfigError('trackers', "need at least one tracker")

        panel = []
        for entry in trackers:
            name, params = (entry if isinstance(entry, tuple) else (entry, {}))
            panel.append((parse_tracker_name(name), dict(params or {})))
        labels = [name.value for name, _ in panel]
        if len(set(labels)) != len(labels):
            raise ConfigError('trackers', f"each tracker may appear once, got {labels}")

        self.scenario = scenario
        self.model = model
        self.trackers = panel
        self.trials = int(trials)
        self.record_every = int(record_every)
        self.seed = int(seed)
        self.output_path = output_path
        self.workers = None if workers is None else int(workers)
        self.timing = bool(timing)
        self.debug = bool(debug)
        self._check_tracker_params()

    def _check_tracker_params(self):
        """ Builds every tracker once so bad parameters fail before any work starts """
        probe = Subspace(np.eye(self.model.d, self.model.k), check = False)
        for name, params in self.trackers:
            tracker_factory(name, self.model.d, self.model.k, params, probe)

    def __repr__(self)->str:
        retstr = "BenchConfig : \n"
        retstr += f"\t{self.scenario!r}\n\t{self.model!r}\n"
        retstr += f"\ttrackers : {[name.value for name, _ in self.trackers]}\n"
        retstr += f"\ttrials : {self.trials}, record_every : {self.record_every}, seed : {self.seed}\n"
        return retstr

def _observation_crc(obs, crc : int)->int:
    crc = zlib.crc32(np.packbits(obs.mask).tobytes(), crc)
    return zlib.crc32(obs.values.tobytes(), crc)

def run_trial(cfg : BenchConfig, trial : int, seed_seq : np.random.SeedSequence)->list[RunRecord]:
    """
    One trial of the protocol.

    A tracker whose update raises is warned about once per trial;
    the next recorded row of that tracker carries NaN metrics and
    the run goes on.
    """
    init_seq, data_seq = seed_seq.spawn(2)
    init_rng = as_generator(init_seq)
    U0 = orthonormalize(init_rng.standard_normal((cfg.model.d, cfg.model.k)))
    trackers = {
        name.value : tracker_factory(name, cfg.model.d, cfg.model.k, params, U0)
        for name, params in cfg.trackers
    }
    wall = {label : 0 for label in trackers}
    crc = {label : 0 for label in trackers}
    failed = {label : False for label in trackers}
    warned = set()

    records = []
    last = cfg.scenario.snapshots
    for truth, obs in scenario_stream(cfg.scenario, cfg.model, as_generator(data_seq)):
        n = obs.snapshot_index
        for label, tracker in trackers.items():
            if cfg.debug:
                crc[label] = _observation_crc(obs, crc[label])
            start = time.perf_counter_ns()
            try:
                tracker.update(obs)
            except Exception as e:
                failed[label] = True
                if label not in warned:
                    warned.add(label)
                    logger.warning("Trial %d: %s failed at snapshot %d: %s", trial, label, n, e)
            wall[label] += time.perf_counter_ns() - start

        if (n % cfg.record_every) and (n != last):
            continue
        for label, tracker in trackers.items():
            proj, det = float('nan'), float('nan')
            if not failed[label]:
                try:
                    estimate = tracker.estimate()
                    proj = projection_error(estimate, truth)
                    det = determinant_similarity(estimate, truth)
                except Exception as e:
                    if label not in warned:
                        warned.add(label)
                        logger.warning("Trial %d: %s estimate failed at snapshot %d: %s", trial, label, n, e)
            failed[label] = False
            wall_ns = wall[label] if cfg.timing else 0
            if cfg.debug:
                records.append(DebugRunRecord(label, trial, n, proj, det, wall_ns, crc[label]))
            else:
                records.append(RunRecord(label, trial, n, proj, det, wall_ns))

    logger.info("Trial %d done (%d snapshots)", trial, last)
    return records

def _run_trial_item(item : tuple, cfg : BenchConfig)->list[RunRecord]:
    trial, seed_seq = item
    return run_trial(cfg, trial, seed_seq)

def run_bench(cfg : BenchConfig)->tuple[list[RunRecord], list[AggregateRecord]]:
    """
    Runs every trial (on a bounded process pool) and aggregates.

    Returns
    -------

    records : list of RunRecord

        In trial order, then snapshot order, then panel order.

    aggregates : list of AggregateRecord

        Quantiles over trials per (tracker, n).
    """
    logger.info("Starting benchmark\n%r", cfg)
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    per_trial = pool_map(partial(_run_trial_item, cfg = cfg), enumerate(seeds), cfg.workers)
    records = [rec for trial_records in per_trial for rec in trial_records]
    return records, aggregate_records(records)

def records_path_for(output_path : str)->str:
    """ run.csv -> run.records.csv """
    stem, _ = os.path.splitext(output_path)
    return stem + '.records.csv'

def write_outputs(
        output_path : str,
        records : Sequence[RunRecord],
        aggregates : Sequence[AggregateRecord],
    )->tuple[str, str]:
    """ Aggregates to output_path, records next to it. Returns both paths. """
    records_path = records_path_for(output_path)
    with open(output_path, 'w', newline='', encoding='utf-8') as f:
        write_csv(f, aggregates, AggregateRecord._fields)
    with open(records_path, 'w', newline='', encoding='utf-8') as f:
        write_csv(f, records, type(records[0])._fields if records else RunRecord._fields)
    logger.info("Wrote %s and %s", output_path, records_path)
    return output_path, records_path
