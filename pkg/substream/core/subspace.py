"""
Subspace primitives shared by every tracker.

Orthonormalization, masked least squares, residuals, the
similarity metrics and a batch PCA oracle. Everything here is a
pure function of its inputs.

Functions
---------

S = orthonormalize(M)
    Q factor of M with a non-negative R diagonal, as a Subspace.

w = masked_ls_weights(U, obs, ridge)
    argmin_w || P_Omega(x - U w) ||^2 (+ ridge * ||w||^2)

r = masked_residual(obs, p)
    x - p on the observed coordinates, zero elsewhere.

cosine_similarity, determinant_similarity, projection_error
    Ways of comparing an estimate with the truth.

S = batch_pca(X, k)
    Top-k left singular subspace of X.
"""
from typing import Union

import numpy as np
from scipy import linalg

from .errors import (
    RankDeficient, DimensionMismatch, ZeroVector, DegenerateGap, NotOrthonormal
)

__all__ = [
    'Subspace',
    'PartialObservation',
    'SvdFactor',
    'ORTHONORMAL_TOL',
    'orthonormality_error',
    'orthonormalize',
    'masked_ls_weights',
    'masked_residual',
    'cosine_similarity',
    'determinant_similarity',
    'projection_error',
    'batch_pca',
]

ORTHONORMAL_TOL = 1e-10 # Frobenius norm of basis^T basis - I
RANK_TOL = 1e-12 # smallest/largest singular value below which we call it rank deficient

def orthonormality_error(basis : np.ndarray)->float:
    """ || basis^T basis - I_k ||_F """
    k = basis.shape[1]
    return float(np.linalg.norm(basis.T @ basis - np.eye(k)))

class Subspace():
    """
    A k-dimensional subspace of R^d stored as a d x k matrix
    with orthonormal columns.

    The basis is validated on construction (orthonormal to within
    ORTHONORMAL_TOL, finite). Pass `check = False` only for bases
    that are orthonormal by construction and already validated.
    """

    def __init__(self, basis : np.ndarray, check : bool = True):
        basis = np.array(basis, dtype=float)
        if basis.ndim == 1:
            basis = basis[:, np.newaxis]
        if basis.ndim != 2:
            raise DimensionMismatch(
                f"Subspace basis must be a d x k matrix, got shape {basis.shape}"
            )
        d, k = basis.shape
        if not (0 < k <= d):
            raise DimensionMismatch(
                f"Subspace rank must satisfy 0 < k <= d, got d={d}, k={k}"
            )
        if check:
            if not np.all(np.isfinite(basis)):
                raise NotOrthonormal("Subspace basis contains NaN or Inf entries.")
            err = orthonormality_error(basis)
            if err >= ORTHONORMAL_TOL:
                raise NotOrthonormal(
                    f"Subspace basis is not orthonormal: ||B^T B - I||_F = {err:.3e}"
                )
        self.basis = basis

    @property
    def d(self)->int:
        return self.basis.shape[0]

    @property
    def k(self)->int:
        return self.basis.shape[1]

    @property
    def projector(self)->np.ndarray:
        """ The d x d orthogonal projector basis @ basis^T """
        return self.basis @ self.basis.T

    def __repr__(self)->str:
        return f"Subspace(d={self.d}, k={self.k})"

class PartialObservation():
    """
    One snapshot x_n seen only through the boolean mask Omega_n.

    `values` holds x_n restricted to the mask, in coordinate order.
    """

    def __init__(self, mask : np.ndarray, values : np.ndarray, snapshot_index : int = 1):
        mask = np.asarray(mask, dtype=bool)
        values = np.asarray(values, dtype=float).ravel()
        if mask.ndim != 1:
            raise DimensionMismatch("Observation mask must be a boolean vector.")
        if values.shape[0] != int(mask.sum()):
            raise DimensionMismatch(
                f"Observation carries {values.shape[0]} values "
                f"but its mask has {int(mask.sum())} observed entries."
            )
        if int(snapshot_index) < 1:
            raise ValueError("Snapshot indices start at 1.")
        self.mask = mask
        self.values = values
        self.snapshot_index = int(snapshot_index)

    @classmethod
    def full(cls, x : np.ndarray, snapshot_index : int = 1)->'PartialObservation':
        """ A fully observed snapshot """
        x = np.asarray(x, dtype=float).ravel()
        return cls(np.ones(x.shape[0], dtype=bool), x, snapshot_index)

    @classmethod
    def from_dense(cls, x : np.ndarray, mask : np.ndarray, snapshot_index : int = 1)->'PartialObservation':
        """ Restricts the dense vector x to mask """
        x = np.asarray(x, dtype=float).ravel()
        mask = np.asarray(mask, dtype=bool)
        return cls(mask, x[mask], snapshot_index)

    @property
    def d(self)->int:
        return self.mask.shape[0]

    @property
    def observed_count(self)->int:
        return self.values.shape[0]

    @property
    def is_full(self)->bool:
        return bool(self.mask.all())

    def dense(self)->np.ndarray:
        """ P_Omega(x): the snapshot with unobserved entries set to zero """
        out = np.zeros(self.d)
        out[self.mask] = self.values
        return out

    def __repr__(self)->str:
        return (
            f"PartialObservation(n={self.snapshot_index}, "
            f"observed={self.observed_count}/{self.d})"
        )

class SvdFactor():
    """
    A thin SVD U diag(S) V^T. V is optional and only kept by the
    full incremental SVD.
    """

    def __init__(self, U : np.ndarray, S : np.ndarray, V : np.ndarray = None):
        U = np.asarray(U, dtype=float)
        S = np.asarray(S, dtype=float).ravel()
        if U.shape[1] != S.shape[0]:
            raise DimensionMismatch(
                f"SvdFactor has {U.shape[1]} left vectors but {S.shape[0]} singular values"
            )
        if np.any(S < 0) or np.any(np.diff(S) > 0):
            raise ValueError("Singular values must be non-negative and non-increasing.")
        if (V is not None) and (np.asarray(V).shape[1] != S.shape[0]):
            raise DimensionMismatch("Right factor does not match the singular values.")
        self.U = U
        self.S = S
        self.V = None if V is None else np.asarray(V, dtype=float)

    @property
    def rank(self)->int:
        return self.S.shape[0]

    def __repr__(self)->str:
        retstr = f"SvdFactor(d={self.U.shape[0]}, rank={self.rank}"
        if self.V is not None:
            retstr += f", n={self.V.shape[0]}"
        return retstr + ")"

def _as_matrix(U : Union[Subspace, np.ndarray])->np.ndarray:
    if isinstance(U, Subspace):
        return U.basis
    U = np.asarray(U, dtype=float)
    if U.ndim == 1:
        U = U[:, np.newaxis]
    return U

def _check_full_rank(R : np.ndarray, what : str):
    """ Rank test on a triangular factor: its singular values are those of the original matrix """
    sv = np.linalg.svd(R, compute_uv=False)
    if (sv.size == 0) or (sv[0] == 0) or (sv[-1] <= RANK_TOL * sv[0]):
        raise RankDeficient(f"{what} does not have full column rank.")

def orthonormalize(M : np.ndarray)->Subspace:
    """
    Orthonormal basis for the column space of M, from the QR
    decomposition M = QR with the signs of Q's columns chosen so
    that diag(R) >= 0. Deterministic for a given M.

    Arguments
    ---------

    M : np.ndarray

        A d x k matrix of full column rank.

    Returns
    -------

    subspace : Subspace

    Raises RankDeficient when the smallest singular value of M
    is below 1e-12 times the largest.
    """
    M = _as_matrix(M)
    if M.shape[1] > M.shape[0]:
        raise RankDeficient(
            f"Cannot orthonormalize {M.shape[1]} columns in dimension {M.shape[0]}."
        )
    Q, R = linalg.qr(M, mode='economic')
    _check_full_rank(R, "Matrix to orthonormalize")
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Subspace(Q * signs, check = False)

def masked_ls_weights(
        U : Union[Subspace, np.ndarray],
        obs : PartialObservation,
        ridge : float = 0.0
    )->np.ndarray:
    """
    Coefficients of the observed entries in the basis U:

        w = argmin_w || P_Omega(x - U w) ||^2 + ridge * ||w||^2

    Solved by a QR factorization of the masked row block (of the
    ridge-augmented block when ridge > 0), never the normal
    equations. U does not need orthonormal columns, so the raw
    PETRELS factor can be passed directly.

    Arguments
    ---------

    U : Subspace or np.ndarray (d x k)

    obs : PartialObservation

    ridge : float

        Tikhonov weight, >= 0. With ridge = 0 the masked rows of U
        must have rank k.

    Returns
    -------

    w : np.ndarray (k,)
    """
    if ridge < 0:
        raise ValueError("ridge must be non-negative")
    U = _as_matrix(U)
    if U.shape[0] != obs.d:
        raise DimensionMismatch(
            f"Basis has dimension {U.shape[0]} but observation has dimension {obs.d}"
        )
    k = U.shape[1]
    A = U[obs.mask]
    b = obs.values
    if ridge > 0:
        A = np.vstack([A, np.sqrt(ridge) * np.eye(k)])
        b = np.concatenate([b, np.zeros(k)])
    if A.shape[0] < k:
        raise RankDeficient(
            f"Only {A.shape[0]} observed entries for a rank-{k} least-squares problem."
        )
    Q, R = linalg.qr(A, mode='economic')
    _check_full_rank(R, "Masked basis")
    return linalg.solve_triangular(R, Q.T @ b)

def masked_residual(obs : PartialObservation, p : np.ndarray)->np.ndarray:
    """ r(i) = x(i) - p(i) where Omega(i) = 1, 0 elsewhere """
    p = np.asarray(p, dtype=float).ravel()
    if p.shape[0] != obs.d:
        raise DimensionMismatch("Prediction and observation differ in dimension.")
    r = np.zeros(obs.d)
    r[obs.mask] = obs.values - p[obs.mask]
    return r

def cosine_similarity(u : np.ndarray, u_star : np.ndarray)->float:
    """ u^T u* / (||u|| ||u*||), in [-1, 1] """
    u = np.asarray(u, dtype=float).ravel()
    u_star = np.asarray(u_star, dtype=float).ravel()
    if u.shape != u_star.shape:
        raise DimensionMismatch("Vectors differ in dimension.")
    nu, ns = np.linalg.norm(u), np.linalg.norm(u_star)
    if nu == 0 or ns == 0:
        raise ZeroVector("Cosine similarity is undefined for a zero vector.")
    return float(np.clip(u @ u_star / (nu * ns), -1.0, 1.0))

def _check_pair(U : Subspace, U_star : Subspace):
    if (U.d != U_star.d) or (U.k != U_star.k):
        raise DimensionMismatch(
            f"Cannot compare a {U.d} x {U.k} subspace with a {U_star.d} x {U_star.k} one."
        )

def determinant_similarity(U : Subspace, U_star : Subspace)->float:
    """
    det(U*^T U U^T U*) = det(U*^T U)^2, in [0, 1].

    1 iff the subspaces coincide, 0 as soon as one direction of
    one subspace is orthogonal to the other.
    """
    _check_pair(U, U_star)
    M = U_star.basis.T @ U.basis
    return float(np.clip(np.linalg.det(M)**2, 0.0, 1.0))

def projection_error(U_hat : Subspace, U_star : Subspace)->float:
    """ || (I - P_Uhat) U* ||_F^2, in [0, k] """
    _check_pair(U_hat, U_star)
    E = U_star.basis - U_hat.basis @ (U_hat.basis.T @ U_star.basis)
    return float(np.clip(np.sum(E**2), 0.0, U_star.k))

def batch_pca(X : np.ndarray, k : int)->Subspace:
    """
    Top-k left singular subspace of the data matrix X (d x n).

    The oracle the streaming trackers are checked against. Raises
    DegenerateGap when sigma_k and sigma_{k+1} agree to 1e-12
    (relative to sigma_1), since the subspace is then not unique.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DimensionMismatch("batch_pca expects a d x n data matrix.")
    if not (0 < k <= min(X.shape)):
        raise ValueError(f"Need 0 < k <= min(d, n) = {min(X.shape)}, got k = {k}")
    U, s, _ = np.linalg.svd(X, full_matrices=False)
    if k < s.shape[0] and (s[k-1] - s[k]) <= 1e-12 * max(s[0], np.finfo(float).tiny):
        raise DegenerateGap(
            f"sigma_{k} = {s[k-1]:.6e} equals sigma_{k+1} = {s[k]:.6e}; "
            "the top-k subspace is not unique."
        )
    return Subspace(U[:, :k], check = False)
