import os
import pickle

import pytest

from substream.core.workers import THREADS_ENV, worker_cap, pool_map
from substream.core.errors import ConfigError, InvalidParams

def square(x):
    return x * x

def test_cap_from_environment(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, '3')
    assert worker_cap() == 3
    monkeypatch.delenv(THREADS_ENV)
    assert worker_cap() == (os.cpu_count() or 1)

@pytest.mark.parametrize('value', ['zero', '0', '-2'])
def test_bad_cap(monkeypatch, value):
    monkeypatch.setenv(THREADS_ENV, value)
    with pytest.raises(ConfigError) as e:
        worker_cap()
    assert e.value.field == THREADS_ENV

def test_serial_map_keeps_order(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, '1')
    assert pool_map(square, range(6), workers = 4) == [0, 1, 4, 9, 16, 25]
    assert pool_map(square, [], workers = 2) == []

def test_process_pool_keeps_order(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, '2')
    assert pool_map(square, range(10), workers = 2) == [x * x for x in range(10)]

def test_errors_cross_process_boundaries():
    err = pickle.loads(pickle.dumps(InvalidParams('step', "must be positive")))
    assert err.field == 'step'
    assert str(err) == str(InvalidParams('step', "must be positive"))
    err = pickle.loads(pickle.dumps(ConfigError('trials', "must be at least 1")))
    assert err.field == 'trials'
