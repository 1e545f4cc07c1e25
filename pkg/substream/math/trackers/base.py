"""
The streaming interface every tracker implements:

    tracker.update(obs)     # one PartialObservation, single pass
    tracker.estimate()      # current orthonormal Subspace
    tracker.reset(U0)       # start over from U0

Parameters are passed as keyword arguments and checked against
the subclass's `class_params`; unknown names and out-of-range
values raise InvalidParams naming the field.
"""
import logging

import numpy as np

from ...core.errors import (
    InvalidParams, DimensionMismatch, IncompleteObservation, RankDeficient
)
from ...core.subspace import Subspace, PartialObservation, masked_ls_weights

__all__ = [
    'SubspaceTracker',
    'ZERO_RESIDUAL_TOL',
]

# ||r|| <= ZERO_RESIDUAL_TOL * max(||x||, 1) counts as a zero residual
ZERO_RESIDUAL_TOL = 1e-12

class SubspaceTracker():
    """
    Base class for the streaming trackers.

    Subclasses define `class_params` (accepted keyword arguments),
    `defaults`, `_reset_state(U0)`, `_update(obs)` and
    `estimate()`. `full_data_only` trackers refuse partially
    observed snapshots with IncompleteObservation.

    A snapshot whose observed values are all zero is a no-op (its
    least-squares coefficients are zero). Updates whose masked
    least-squares problem is rank deficient are skipped and
    counted in `skipped_updates`.
    """
    name = None
    class_params = []
    defaults = {}
    full_data_only = False

    def __init__(self, U0 : Subspace, **params):
        for key in params:
            if key not in self.__class__.class_params:
                raise InvalidParams(
                    key,
                    f"{self.__class__.__name__} accepts only {self.__class__.class_params}"
                )
        for param in self.__class__.class_params:
            setattr(self, param, params.get(param, self.__class__.defaults.get(param)))
        self._validate_params()
        self.logger = logging.getLogger(self.__class__.__module__)
        self.reset(U0)

    def _validate_params(self):
        pass

    def _check_discount(self, field : str = 'discount'):
        val = float(getattr(self, field))
        if not (0 < val <= 1):
            raise InvalidParams(field, f"must lie in (0, 1], got {val}")
        setattr(self, field, val)

    def _check_positive(self, field : str):
        val = float(getattr(self, field))
        if not val > 0:
            raise InvalidParams(field, f"must be positive, got {val}")
        setattr(self, field, val)

    def _check_ridge(self):
        val = float(getattr(self, 'ridge', 0.0) or 0.0)
        if val < 0:
            raise InvalidParams('ridge', f"must be non-negative, got {val}")
        self.ridge = val

    @property
    def params(self)->dict:
        return {param : getattr(self, param) for param in self.__class__.class_params}

    @property
    def d(self)->int:
        return self.initial.d

    @property
    def k(self)->int:
        return self.initial.k

    def reset(self, U0 : Subspace):
        """ Discards all state and restarts from U0 """
        if not isinstance(U0, Subspace):
            U0 = Subspace(U0)
        self.initial = U0
        self.skipped_updates = 0
        self.n_updates = 0
        self._reset_state(U0)

    def update(self, obs : PartialObservation):
        """ Consumes one snapshot """
        if obs.d != self.d:
            raise DimensionMismatch(
                f"{self.__class__.__name__} tracks dimension {self.d}, got a snapshot of dimension {obs.d}"
            )
        if self.full_data_only and not obs.is_full:
            raise IncompleteObservation(
                f"{self.__class__.__name__} needs fully observed snapshots "
                f"(snapshot {obs.snapshot_index} has {obs.observed_count}/{obs.d})."
            )
        self.n_updates += 1
        if not np.any(obs.values):
            self._zero_update(obs)
            return
        self._update(obs)

    def estimate(self)->Subspace:
        raise NotImplementedError()

    def _reset_state(self, U0 : Subspace):
        raise NotImplementedError()

    def _update(self, obs : PartialObservation):
        raise NotImplementedError()

    def _zero_update(self, obs : PartialObservation):
        self.logger.debug("Snapshot %d is zero; no update", obs.snapshot_index)

    def _skip(self, obs : PartialObservation, reason : str):
        self.skipped_updates += 1
        self.logger.debug(
            "%s skipped snapshot %d: %s", self.__class__.__name__, obs.snapshot_index, reason
        )

    def _masked_weights(self, U : np.ndarray, obs : PartialObservation)->np.ndarray:
        """ masked_ls_weights, or None (and a recorded skip) when rank deficient """
        try:
            return masked_ls_weights(U, obs, getattr(self, 'ridge', 0.0) or 0.0)
        except RankDeficient as e:
            self._skip(obs, str(e))
            return None

    def __repr__(self)->str:
        retstr = f"{self.__class__.__name__}(d={self.d}, k={self.k})\n"
        for param, val in self.params.items():
            retstr += f"\t{param} : {val}\n"
        retstr += f"\tupdates : {self.n_updates} ({self.skipped_updates} skipped)\n"
        return retstr
