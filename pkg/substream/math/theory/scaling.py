"""
Conversions between the discrete tracker parameters and the
rescaled quantities of the high-dimensional limit, so that Monte
Carlo runs and ODE predictions are compared on equal terms.

    t     = n / d           (rescaled time)
    eta   = tau / d         (Oja, GROUSE)
    lambda = 1 - mu / d     (PETRELS discount)
    delta = delta' / d      (PETRELS initialization)
    g     = d R / ||U||^2   (PETRELS auxiliary variable)
"""
from enum import Enum
import math
from typing import Union

import numpy as np

from ...core.errors import ConfigError

__all__ = [
    'TimeUnits',
    'convert_time',
    'snapshots_for',
    'step_from_tau',
    'tau_from_step',
    'discount_from_mu',
    'mu_from_discount',
    'delta_from_prime',
    'petrels_g',
]

class TimeUnits(Enum):
    SNAPSHOTS = "snapshots"
    RESCALED = "rescaled"

def _check_d(d : int):
    if int(d) < 1:
        raise ConfigError('d', f"must be a positive integer, got {d}")

def convert_time(
        values : Union[np.ndarray, float],
        from_units : TimeUnits,
        to_units : TimeUnits,
        d : int,
    )->Union[np.ndarray, float]:
    """ Snapshot counts <-> rescaled time t = n/d """
    if not (isinstance(from_units, TimeUnits) and isinstance(to_units, TimeUnits)):
        raise ValueError("Must provide valid TimeUnits to convert")
    _check_d(d)
    if from_units is to_units:
        return values
    if from_units is TimeUnits.SNAPSHOTS:
        return values / d
    return values * d

def snapshots_for(t_max : float, d : int)->int:
    """ Number of snapshots needed to reach rescaled time t_max """
    _check_d(d)
    return math.ceil(t_max * d - 1e-9)

def step_from_tau(tau : float, d : int)->float:
    _check_d(d)
    return tau / d

def tau_from_step(eta : float, d : int)->float:
    _check_d(d)
    return eta * d

def discount_from_mu(mu : float, d : int)->float:
    """ lambda = 1 - mu/d; needs 0 < mu < d """
    _check_d(d)
    if not (0 < mu < d):
        raise ConfigError('mu', f"needs 0 < mu < d = {d} for a discount in (0, 1), got {mu}")
    return 1.0 - mu / d

def mu_from_discount(discount : float, d : int)->float:
    _check_d(d)
    return (1.0 - discount) * d

def delta_from_prime(delta_prime : float, d : int)->float:
    _check_d(d)
    return delta_prime / d

def petrels_g(mean_R : float, U : np.ndarray, d : int)->float:
    """ g = d R / ||U||^2 for a rank-one PETRELS state """
    _check_d(d)
    return d * mean_R / float(np.sum(np.asarray(U)**2))
