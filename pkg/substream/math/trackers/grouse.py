"""
GROUSE: incremental gradient descent on the Grassmannian.

Each update rotates the current estimate within the plane spanned
by the prediction p = U w and the (masked) residual r:

    U_n = U_{n-1} + [(cos theta - 1) p/||p|| + sin theta r/||r||] w^T/||w||

so U_n - U_{n-1} has rank one. The greedy step
theta = arctan(||r|| / ||p||) swaps p for the direction of the
observed snapshot; with a step eta, theta = eta ||r|| ||p||.
"""
import numpy as np

from ...core.kinds import TrackerName
from ...core.subspace import (
    Subspace, PartialObservation, masked_residual, orthonormalize, orthonormality_error
)
from .base import SubspaceTracker, ZERO_RESIDUAL_TOL
from .steps import StepSchedule

__all__ = [
    'GrouseTracker',
]

DRIFT_TOL = 1e-11

class GrouseTracker(SubspaceTracker):
    """
    Parameters
    ----------

    step : float or None

        None (default) takes the greedy step.

    schedule : str

        'constant' (default) or 'inverse'; ignored for the greedy step.

    ridge : float

        Tikhonov weight of the masked least squares, default 0.
    """
    name = TrackerName.GROUSE
    class_params = ['step', 'schedule', 'ridge']
    defaults = {'step' : None, 'schedule' : 'constant', 'ridge' : 0.0}

    def _validate_params(self):
        self.steps = None
        if self.step is not None:
            self.steps = StepSchedule(self.step, self.schedule)
            self.step = self.steps.step
            self.schedule = self.steps.kind.value
        self._check_ridge()

    @property
    def greedy(self)->bool:
        return self.steps is None

    def _reset_state(self, U0 : Subspace):
        self.U = U0.basis.copy()

    def _update(self, obs : PartialObservation):
        U = self.U
        w = self._masked_weights(U, obs)
        if w is None:
            return
        p = U @ w
        r = masked_residual(obs, p)
        r -= U @ (U.T @ r) # no-op unless ridge > 0
        r_norm = np.linalg.norm(r)
        p_norm = np.linalg.norm(p)
        w_norm = np.linalg.norm(w)
        if (r_norm <= ZERO_RESIDUAL_TOL * max(np.linalg.norm(obs.values), 1.0)) or w_norm == 0:
            self.logger.debug("Snapshot %d: zero residual or coefficients, theta = 0", obs.snapshot_index)
            return

        if self.greedy:
            theta = np.arctan2(r_norm, p_norm)
        else:
            theta = self.steps(self.n_updates) * r_norm * p_norm

        direction = (np.cos(theta) - 1.0) * (p / p_norm) + np.sin(theta) * (r / r_norm)
        U_new = U + np.outer(direction, w / w_norm)
        if orthonormality_error(U_new) > DRIFT_TOL:
            U_new = orthonormalize(U_new).basis
        self.U = U_new

    def estimate(self)->Subspace:
        return Subspace(self.U.copy(), check = False)
