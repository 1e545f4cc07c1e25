"""
Incremental SVD trackers (the algebraic family).

IncrementalSvd
    Exact rank-one update of the thin SVD of all snapshots seen so
    far. The (k+1) x (k+1) centre matrix

        K = [[diag(S), w], [0, ||r||]]

    satisfies K K^T = diag(S^2, 0) + z z^T with z = [w; ||r||], so
    it is diagonalized by the secular-equation solver of
    substream.core.dpr1. Full data only.

MissingDataIsvd, BrandIsvd, PimcIsvd
    Rank-k trackers tolerating missing entries. The coefficients
    come from masked least squares, the residual is zero off the
    mask, and the small centre matrix [[Gamma, w], [0, ||r||]] is
    decomposed with a dense SVD and truncated back to rank k.
    They differ in how the old singular values are weighted:

        MD-ISVD : Gamma = S
        Brand   : Gamma = discount * S
        PIMC    : Gamma = (gamma_n / ||S||_F) S,
                  gamma_n^2 = gamma_{n-1}^2 + ||P_Omega x_n||^2
"""
import numpy as np
from scipy import linalg

from ...core.kinds import TrackerName
from ...core.subspace import (
    Subspace, SvdFactor, PartialObservation,
    orthonormalize, orthonormality_error, masked_residual,
)
from ...core.dpr1 import Dpr1Problem, dpr1_eigen
from ...core.errors import InvalidParams
from .base import SubspaceTracker, ZERO_RESIDUAL_TOL

__all__ = [
    'IncrementalSvd',
    'MissingDataIsvd',
    'BrandIsvd',
    'PimcIsvd',
]

DRIFT_TOL = 1e-11

def _complete_basis(U_r : np.ndarray, U0 : np.ndarray, k : int)->Subspace:
    """
    Extends the r < k orthonormal columns U_r to k columns using
    directions of U0 orthogonal to span(U_r), then the standard
    basis if U0 does not have enough of them.
    """
    r = U_r.shape[1]
    for candidates in (U0, np.hstack([U0, np.eye(U0.shape[0])])):
        resid = candidates - U_r @ (U_r.T @ candidates)
        Q, s, _ = np.linalg.svd(resid, full_matrices=False)
        if s.shape[0] >= k - r and s[k-r-1] > 1e-8:
            return orthonormalize(np.hstack([U_r, Q[:, :k-r]]))
    raise RuntimeError("Could not complete the basis.") # unreachable for r < k <= d

def _unit_orthogonal(r : np.ndarray, U : np.ndarray)->np.ndarray:
    """ r with its (rounding-level) component in span(U) removed, normalized """
    q = r - U @ (U.T @ r)
    return q / np.linalg.norm(q)

class IncrementalSvd(SubspaceTracker):
    """
    Exact incremental SVD of the growing data matrix X_n = [x_1, ..., x_n].

    The rank grows by one whenever a snapshot has a nonzero
    residual against the current left factor; otherwise the
    singular values are updated in place. estimate() is the top-k
    left singular subspace (completed with U0 until k directions
    have been seen).

    Parameters
    ----------

    right_factor : bool

        Also maintain V (n x rank). Defaults to True.

    max_rank : int or None

        Keep at most this many singular triplets. None keeps
        everything, which makes the factor exact.
    """
    name = TrackerName.ISVD
    class_params = ['right_factor', 'max_rank']
    defaults = {'right_factor' : True, 'max_rank' : None}
    full_data_only = True

    def _validate_params(self):
        self.right_factor = bool(self.right_factor)
        if self.max_rank is not None:
            if int(self.max_rank) < 1:
                raise InvalidParams('max_rank', f"must be a positive integer, got {self.max_rank}")
            self.max_rank = int(self.max_rank)

    def _reset_state(self, U0 : Subspace):
        self.factor = None
        self.columns = 0

    @property
    def singular_values(self)->np.ndarray:
        if self.factor is None:
            return np.zeros(0)
        return self.factor.S

    def _zero_update(self, obs : PartialObservation):
        # a zero column leaves U and S alone; V gains a zero row
        self.columns += 1
        if (self.factor is not None) and (self.factor.V is not None):
            V = np.vstack([self.factor.V, np.zeros((1, self.factor.rank))])
            self.factor = SvdFactor(self.factor.U, self.factor.S, V)

    def _first_update(self, x : np.ndarray):
        norm = np.linalg.norm(x)
        V = None
        if self.right_factor:
            V = np.zeros((self.columns + 1, 1))
            V[-1, 0] = 1.0
        self.factor = SvdFactor((x / norm)[:, np.newaxis], np.array([norm]), V)

    def _update(self, obs : PartialObservation):
        x = obs.values
        if self.factor is None:
            self._first_update(x)
            self.columns += 1
            return

        U, S, rank = self.factor.U, self.factor.S, self.factor.rank
        w = U.T @ x
        r = x - U @ w
        rho = np.linalg.norm(r)
        grow = (rho > ZERO_RESIDUAL_TOL * max(np.linalg.norm(x), 1.0)) and (rank < self.d)

        if grow:
            sigma_sq = np.append(S**2, 0.0)
            z = np.append(w, rho)
            U_big = np.hstack([U, _unit_orthogonal(r, U)[:, np.newaxis]])
            K = np.zeros((rank + 1, rank + 1))
            K[:rank, :rank] = np.diag(S)
            K[:rank, rank] = w
            K[rank, rank] = rho
        else:
            sigma_sq = S**2
            z = w
            U_big = U
            K = np.hstack([np.diag(S), w[:, np.newaxis]])

        eigvals, Y = dpr1_eigen(Dpr1Problem(sigma_sq, z))
        S_new = np.sqrt(np.clip(eigvals, 0.0, None))
        U_new = U_big @ Y

        V_new = None
        if self.factor.V is not None:
            # V_hat = K^T Y / S_new; columns with S_new = 0 carry no data
            V_hat = np.divide(
                K.T @ Y, S_new,
                out = np.zeros((K.shape[1], Y.shape[1])),
                where = S_new > 0,
            )
            V_old = linalg.block_diag(self.factor.V, 1.0)
            V_new = V_old @ V_hat

        if (self.max_rank is not None) and (S_new.shape[0] > self.max_rank):
            U_new, S_new = U_new[:, :self.max_rank], S_new[:self.max_rank]
            if V_new is not None:
                V_new = V_new[:, :self.max_rank]

        self.columns += 1
        self.factor = SvdFactor(U_new, S_new, V_new)

    def estimate(self)->Subspace:
        if self.factor is None:
            return self.initial
        if self.factor.rank < self.k:
            return _complete_basis(self.factor.U, self.initial.basis, self.k)
        return orthonormalize(self.factor.U[:, :self.k])

class MissingDataIsvd(SubspaceTracker):
    """
    Rank-k incremental SVD with missing data (MD-ISVD).

    Starts from U0 with all singular values zero, as in the cold
    start of the algorithm; no batch initialization.

    Parameters
    ----------

    ridge : float

        Tikhonov weight for the masked least squares (default 0:
        snapshots with fewer than k usable entries are skipped).
    """
    name = TrackerName.MD_ISVD
    class_params = ['ridge']
    defaults = {'ridge' : 0.0}

    def _validate_params(self):
        self._check_ridge()

    def _reset_state(self, U0 : Subspace):
        self.U = U0.basis.copy()
        self.S = np.zeros(U0.k)

    @property
    def factor(self)->SvdFactor:
        return SvdFactor(self.U, self.S)

    def _center_scale(self, obs : PartialObservation)->np.ndarray:
        """ Gamma, the weighted old singular values entering the centre matrix """
        return self.S

    def _update(self, obs : PartialObservation):
        w = self._masked_weights(self.U, obs)
        if w is None:
            return
        Gamma = self._center_scale(obs)
        U, k = self.U, self.k
        r = masked_residual(obs, U @ w)
        rho = np.linalg.norm(r)

        if rho > ZERO_RESIDUAL_TOL * max(np.linalg.norm(obs.values), 1.0):
            K = np.zeros((k + 1, k + 1))
            K[:k, :k] = np.diag(Gamma)
            K[:k, k] = w
            K[k, k] = rho
            U_big = np.hstack([U, _unit_orthogonal(r, U)[:, np.newaxis]])
        else:
            K = np.hstack([np.diag(Gamma), w[:, np.newaxis]])
            U_big = U

        U_hat, S_hat, _ = np.linalg.svd(K)
        U_new = U_big @ U_hat[:, :k]
        if orthonormality_error(U_new) > DRIFT_TOL:
            U_new = orthonormalize(U_new).basis
        self.U = U_new
        self.S = S_hat[:k]

    def estimate(self)->Subspace:
        return Subspace(self.U.copy(), check = False)

class BrandIsvd(MissingDataIsvd):
    """
    Brand's incremental SVD: MD-ISVD with the old singular values
    multiplied by `discount` (in (0, 1], default 0.98) before every
    update, so old data is forgotten geometrically.
    """
    name = TrackerName.BRAND
    class_params = ['discount', 'ridge']
    defaults = {'discount' : 0.98, 'ridge' : 0.0}

    def _validate_params(self):
        self._check_discount()
        self._check_ridge()

    def _center_scale(self, obs : PartialObservation)->np.ndarray:
        return self.discount * self.S

class PimcIsvd(MissingDataIsvd):
    """
    PIMC: the old singular values are rescaled so their Frobenius
    norm equals gamma_n, the running norm of everything observed
    (gamma_0^2 = 1). Gamma is zero while S is.
    """
    name = TrackerName.PIMC

    def _reset_state(self, U0 : Subspace):
        super()._reset_state(U0)
        self.gamma_sq = 1.0

    def _center_scale(self, obs : PartialObservation)->np.ndarray:
        self.gamma_sq += float(obs.values @ obs.values)
        norm = np.linalg.norm(self.S)
        if norm == 0:
            return np.zeros_like(self.S)
        return (np.sqrt(self.gamma_sq) / norm) * self.S
