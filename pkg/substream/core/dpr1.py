"""
Eigen-decomposition of a diagonal-plus-rank-one symmetric matrix

    diag(sigma_sq) + z z^T

through the zeros of the secular function

    f(lambda) = 1 + sum_i z_i^2 / (sigma_sq_i - lambda).

This is the centre-matrix diagonalization step of the full
incremental SVD.

Each root is bracketed by consecutive poles (interlacing) and
found by Newton's method safeguarded with bisection. Roots are
stored as an offset mu from the nearer pole so that the
differences sigma_sq_j - lambda_i used for the eigenvectors keep
full relative accuracy; the z vector is then recomputed from the
computed roots (Loewner formula) so the eigenvectors come out
orthonormal even when roots crowd a pole.
"""
import logging

import numpy as np

logger = logging.getLogger(__name__)

__all__ = [
    'Dpr1Problem',
    'dpr1_eigen',
]

DEFLATION_TOL = 1e-14
MAX_ITER = 200
_EPS = np.finfo(float).eps

class Dpr1Problem():
    """
    The pair (sigma_sq, z) defining diag(sigma_sq) + z z^T.

    sigma_sq must be sorted non-increasing.
    """

    def __init__(self, sigma_sq : np.ndarray, z : np.ndarray):
        sigma_sq = np.asarray(sigma_sq, dtype=float).ravel()
        z = np.asarray(z, dtype=float).ravel()
        if sigma_sq.shape != z.shape:
            raise ValueError(
                f"sigma_sq has {sigma_sq.shape[0]} entries but z has {z.shape[0]}"
            )
        if np.any(np.diff(sigma_sq) > 0):
            raise ValueError("sigma_sq must be sorted non-increasing.")
        self.sigma_sq = sigma_sq
        self.z = z

    @property
    def m(self)->int:
        return self.sigma_sq.shape[0]

    def dense(self)->np.ndarray:
        """ The m x m matrix this problem represents """
        return np.diag(self.sigma_sq) + np.outer(self.z, self.z)

    def __repr__(self)->str:
        return f"Dpr1Problem(m={self.m})"

def _deflate(d : np.ndarray, z : np.ndarray)->tuple[np.ndarray, np.ndarray]:
    """
    Zeroes negligible z entries and rotates the z mass of every
    group of (numerically) equal poles onto one member of the
    group. Returns the modified z and the accumulated rotation Q,
    with diag(d) + z z^T = Q (diag(d) + z' z'^T) Q^T.
    """
    m = d.shape[0]
    z = z.copy()
    Q = np.eye(m)
    znorm = np.linalg.norm(z)
    z[np.abs(z) < DEFLATION_TOL * znorm] = 0.0

    pole_tol = DEFLATION_TOL * max(abs(d[0]), abs(d[-1]), znorm**2)
    start = 0
    while start < m:
        stop = start
        while (stop + 1 < m) and (abs(d[start] - d[stop+1]) <= pole_tol):
            stop += 1
        lead = None
        for idx in range(start, stop + 1):
            if z[idx] == 0:
                continue
            if lead is None:
                lead = idx
                continue
            # Givens rotation in the (lead, idx) plane zeroing z[idx]
            r = np.hypot(z[lead], z[idx])
            c, s = z[lead]/r, z[idx]/r
            Q[:, [lead, idx]] = Q[:, [lead, idx]] @ np.array([[c, -s], [s, c]])
            z[lead], z[idx] = r, 0.0
        start = stop + 1
    return z, Q

def _secular_root(delta : np.ndarray, zsq : np.ndarray, lower : float, upper : float)->float:
    """
    Root mu in (lower, upper) of 1 + sum zsq / (delta - mu), where
    delta are the poles measured from the chosen origin pole.
    f is increasing on the bracket, negative at `lower`, and
    non-negative at `upper`.
    """
    mu = 0.5 * (lower + upper)
    for _ in range(MAX_ITER):
        diff = delta - mu
        f = 1.0 + np.sum(zsq / diff)
        if f == 0:
            return mu
        if f < 0:
            lower = mu
        else:
            upper = mu
        fprime = np.sum(zsq / diff**2)
        candidate = mu - f / fprime
        if not (lower < candidate < upper):
            candidate = 0.5 * (lower + upper)
        if abs(candidate - mu) <= 2 * _EPS * abs(candidate):
            return candidate
        if (upper - lower) <= 2 * _EPS * max(abs(lower), abs(upper)):
            return 0.5 * (lower + upper)
        mu = candidate
    logger.debug("Secular iteration hit MAX_ITER; returning last iterate %r", mu)
    return mu

def _sign_convention(V : np.ndarray)->np.ndarray:
    """ Flips each column so that its largest-magnitude entry is positive """
    if V.size == 0:
        return V
    pivots = V[np.argmax(np.abs(V), axis=0), np.arange(V.shape[1])]
    signs = np.where(pivots < 0, -1.0, 1.0)
    return V * signs

def dpr1_eigen(problem : Dpr1Problem)->tuple[np.ndarray, np.ndarray]:
    """
    Eigenvalues and eigenvectors of diag(sigma_sq) + z z^T.

    Arguments
    ---------

    problem : Dpr1Problem

    Returns
    -------

    eigenvalues : np.ndarray (m,)

        Sorted non-increasing.

    eigenvectors : np.ndarray (m, m)

        Orthonormal columns, column i pairs with eigenvalues[i].
        Each column's largest-magnitude entry is positive.
    """
    d = problem.sigma_sq
    m = problem.m
    if m == 0:
        return np.zeros(0), np.zeros((0, 0))
    if not np.any(problem.z):
        return d.copy(), np.eye(m)

    z, Q = _deflate(d, problem.z)
    active = np.flatnonzero(z)
    dA = d[active]
    zA = z[active]
    zsq = zA**2
    p = active.shape[0]

    origin = np.empty(p, dtype=int)
    mu = np.empty(p)
    if p == 1:
        origin[0], mu[0] = 0, zsq[0]
    else:
        for i in range(p):
            if i == 0:
                # top root lives in (d_0, d_0 + ||z||^2]
                origin[i] = 0
                lower, upper = 0.0, np.sum(zsq)
            else:
                gap = dA[i-1] - dA[i]
                f_mid = 1.0 + np.sum(zsq / ((dA - dA[i]) - 0.5 * gap))
                if f_mid >= 0:
                    origin[i] = i
                    lower, upper = 0.0, 0.5 * gap
                else:
                    origin[i] = i - 1
                    lower, upper = -0.5 * gap, 0.0
            mu[i] = _secular_root(dA - dA[origin[i]], zsq, lower, upper)

    # lam_minus_d[i, j] = lambda_i - d_j, accurate near the origin pole
    lam_minus_d = (dA[origin][:, np.newaxis] - dA[np.newaxis, :]) + mu[:, np.newaxis]
    pole_gaps = dA[:, np.newaxis] - dA[np.newaxis, :]
    np.fill_diagonal(pole_gaps, 1.0)
    ratios = lam_minus_d / pole_gaps
    ratios[np.arange(p), np.arange(p)] = lam_minus_d[np.arange(p), np.arange(p)]
    zhat = np.sign(zA) * np.sqrt(np.abs(np.prod(ratios, axis=0)))

    Y = (zhat[np.newaxis, :] / (-lam_minus_d)).T # column i is the eigenvector for root i
    Y /= np.linalg.norm(Y, axis=0)

    eigvals = d.copy()
    vectors = np.eye(m)
    eigvals[active] = dA[origin] + mu
    # active roots take over the active columns; deflated ones keep unit vectors
    vectors[:, active] = 0.0
    vectors[np.ix_(active, active)] = Y
    vectors = Q @ vectors

    order = np.argsort(-eigvals, kind='stable')
    return eigvals[order], _sign_convention(vectors[:, order])
