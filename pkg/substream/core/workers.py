"""
A bounded process pool for independent trials.

The pool size is the requested worker count, capped by the
SUBSTREAM_THREADS environment variable (default: the logical
core count). Results always come back in input order, so a run
is identical whatever the pool size.
"""
import os
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable

from .errors import ConfigError

logger = logging.getLogger(__name__)

__all__ = [
    'THREADS_ENV',
    'worker_cap',
    'pool_map',
]

THREADS_ENV = 'SUBSTREAM_THREADS'

def worker_cap()->int:
    """ Upper bound on the pool size """
    env = os.environ.get(THREADS_ENV)
    if env is None or env.strip() == '':
        return os.cpu_count() or 1
    try:
        cap = int(env)
    except ValueError:
        raise ConfigError(THREADS_ENV, f"must be a positive integer, got {env!r}")
    if cap < 1:
        raise ConfigError(THREADS_ENV, f"must be a positive integer, got {cap}")
    return cap

def pool_map(fn : Callable, items : Iterable, workers : int = None)->list:
    """
    [fn(item) for item in items], on up to `workers` processes.

    `fn` and the items must be picklable when more than one
    worker is used. workers = None uses the cap.
    """
    items = list(items)
    cap = worker_cap()
    workers = cap if workers is None else min(int(workers), cap)
    workers = max(1, min(workers, len(items)))
    if workers == 1:
        return [fn(item) for item in items]
    logger.info("Running %d work items on %d worker processes", len(items), workers)
    with ProcessPoolExecutor(max_workers = workers) as pool:
        return list(pool.map(fn, items))
