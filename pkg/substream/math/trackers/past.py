"""
PAST and PETRELS: recursive least squares on the projection
approximation of the subspace loss.

Both keep a raw (non-orthonormal) factor U and the inverse of a
discounted Grammian of the coefficient vectors, updated by the
usual rank-one RLS recursion

    beta = 1 + w^T R w / lambda
    v    = R w / lambda
    R    = R / lambda - v v^T / beta
    U   += (x - U w) (R w)^T

PETRELS runs one such recursion per row of U, gated by whether
that row was observed. estimate() orthonormalizes a copy of U;
the internal factor is never orthonormalized.
"""
import numpy as np

from ...core.kinds import TrackerName
from ...core.subspace import Subspace, PartialObservation, orthonormalize
from .base import SubspaceTracker

__all__ = [
    'PastTracker',
    'PetrelsTracker',
]

class PastTracker(SubspaceTracker):
    """
    Projection Approximation Subspace Tracking, full data only.

    Parameters
    ----------

    discount : float

        lambda in (0, 1], default 0.98.

    delta : float

        R_0 = delta * I, delta > 0, default 1.
    """
    name = TrackerName.PAST
    class_params = ['discount', 'delta']
    defaults = {'discount' : 0.98, 'delta' : 1.0}
    full_data_only = True

    def _validate_params(self):
        self._check_discount()
        self._check_positive('delta')

    def _reset_state(self, U0 : Subspace):
        self.U = U0.basis.copy()
        self.R = self.delta * np.eye(U0.k)

    def _update(self, obs : PartialObservation):
        x = obs.values
        lam = self.discount
        w = self.U.T @ x
        v = (self.R @ w) / lam
        beta = 1.0 + w @ v
        R = self.R / lam - np.outer(v, v) / beta
        self.R = 0.5 * (R + R.T)
        self.U = self.U + np.outer(x - self.U @ w, self.R @ w)

    def estimate(self)->Subspace:
        return orthonormalize(self.U)

class PetrelsTracker(SubspaceTracker):
    """
    Parallel Subspace Estimation and Tracking by Recursive Least
    Squares, for partially observed snapshots.

    Row i of U has its own k x k matrix R^i (stored together as a
    d x k x k array). Unobserved rows keep their u^i and have R^i
    divided by the discount. All rows are updated at once with
    array operations.

    Parameters
    ----------

    discount : float

        lambda in (0, 1], default 0.98.

    delta : float

        R^i_0 = delta * I, delta > 0, default 1.

    ridge : float

        Tikhonov weight of the coefficient step, default 0.
    """
    name = TrackerName.PETRELS
    class_params = ['discount', 'delta', 'ridge']
    defaults = {'discount' : 0.98, 'delta' : 1.0, 'ridge' : 0.0}

    def _validate_params(self):
        self._check_discount()
        self._check_positive('delta')
        self._check_ridge()

    def _reset_state(self, U0 : Subspace):
        self.U = U0.basis.copy()
        self.R = np.tile(self.delta * np.eye(U0.k), (U0.d, 1, 1))

    def _update(self, obs : PartialObservation):
        w = self._masked_weights(self.U, obs)
        if w is None:
            return
        lam = self.discount
        mask = obs.mask

        v = np.einsum('ijk,k->ij', self.R, w) / lam
        beta = 1.0 + v @ w
        self.R /= lam
        self.R[mask] -= np.einsum('ij,ik->ijk', v[mask], v[mask]) / beta[mask, np.newaxis, np.newaxis]
        self.R[mask] = 0.5 * (self.R[mask] + np.swapaxes(self.R[mask], 1, 2))

        Rw = np.einsum('ijk,k->ij', self.R[mask], w)
        residual = obs.values - self.U[mask] @ w
        self.U[mask] += residual[:, np.newaxis] * Rw

    @property
    def mean_R(self)->float:
        """ Average of trace(R^i)/k over rows, the scalar tracked by the ODE limit """
        return float(np.trace(self.R, axis1=1, axis2=2).mean() / self.k)

    def estimate(self)->Subspace:
        return orthonormalize(self.U)
