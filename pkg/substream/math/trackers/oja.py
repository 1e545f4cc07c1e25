"""
Oja's method with missing data, and Krasulina's rank-one rule.

Oja: the unobserved entries of x_n are filled in with the current
prediction p_n = U w_n, then

    U_n = orthonormalize(U_{n-1} + eta_n x~_n w_n^T)

which is exactly the full-data rule when nothing is missing.

Krasulina: stochastic gradient on the Rayleigh quotient,

    u_n = u_{n-1} + eta_n (x x^T - (u^T x x^T u / ||u||^2) I) u_{n-1}

rank one and full data only. It agrees with rank-one Oja up to
second-order terms in eta.
"""
import numpy as np

from ...core.kinds import TrackerName
from ...core.errors import InvalidParams
from ...core.subspace import Subspace, PartialObservation, orthonormalize
from .base import SubspaceTracker
from .steps import StepSchedule

__all__ = [
    'OjaTracker',
    'KrasulinaTracker',
]

class OjaTracker(SubspaceTracker):
    """
    Parameters
    ----------

    step : float

        eta (or the constant c of eta_n = c / n). Default 0.5.

    schedule : str

        'constant' (default) or 'inverse'.

    ridge : float

        Tikhonov weight of the masked least squares, default 0.
    """
    name = TrackerName.OJA
    class_params = ['step', 'schedule', 'ridge']
    defaults = {'step' : 0.5, 'schedule' : 'constant', 'ridge' : 0.0}

    def _validate_params(self):
        self.steps = StepSchedule(self.step, self.schedule)
        self.step = self.steps.step
        self.schedule = self.steps.kind.value
        self._check_ridge()

    def _reset_state(self, U0 : Subspace):
        self.U = U0.basis.copy()

    def _update(self, obs : PartialObservation):
        w = self._masked_weights(self.U, obs)
        if w is None:
            return
        if not np.any(w):
            return
        x_tilde = self.U @ w
        x_tilde[obs.mask] = obs.values
        eta = self.steps(self.n_updates)
        self.U = orthonormalize(self.U + eta * np.outer(x_tilde, w)).basis

    def estimate(self)->Subspace:
        return Subspace(self.U.copy(), check = False)

class KrasulinaTracker(SubspaceTracker):
    """
    Krasulina's rank-one update, full data only. The iterate u is
    not normalized between updates; estimate() returns u / ||u||.

    Parameters
    ----------

    step : float

        Default 0.01.

    schedule : str

        'constant' (default) or 'inverse'.
    """
    name = TrackerName.KRASULINA
    class_params = ['step', 'schedule']
    defaults = {'step' : 0.01, 'schedule' : 'constant'}
    full_data_only = True

    def _validate_params(self):
        self.steps = StepSchedule(self.step, self.schedule)
        self.step = self.steps.step
        self.schedule = self.steps.kind.value

    def _reset_state(self, U0 : Subspace):
        if U0.k != 1:
            raise InvalidParams('k', f"Krasulina's rule tracks a single direction, got k = {U0.k}")
        self.u = U0.basis[:, 0].copy()

    def _update(self, obs : PartialObservation):
        x = obs.values
        u = self.u
        xu = x @ u
        quotient = xu**2 / (u @ u)
        eta = self.steps(self.n_updates)
        self.u = u + eta * (x * xu - quotient * u)

    def estimate(self)->Subspace:
        return Subspace(self.u / np.linalg.norm(self.u), check = False)
