"""
Spiked-model data streams with Bernoulli missingness

    x_n = U* a_n + sigma * eps_n,    a_n ~ N(0, diag(c)), eps_n ~ N(0, I_d)
    P(Omega_n(i) = 1) = alpha

with a static truth, an abrupt change of truth, or a slowly
rotating truth U_t = exp(delta0 B) U_{t-1}.

All randomness comes from numpy's PCG64 `Generator`. A run is a
deterministic function of the seed: per trial, bench spawns
independent child streams with `numpy.random.SeedSequence.spawn`.
Within a snapshot the draws are always taken in the order
a_n, eps_n, mask, which is what makes CSVs reproducible.
"""
import logging
from typing import Iterator, Union

import numpy as np
from scipy import linalg

from .errors import NotSkewSymmetric
from .kinds import ScenarioKind, LoadingDraw
from .subspace import Subspace, PartialObservation, orthonormalize

logger = logging.getLogger(__name__)

__all__ = [
    'SpikedModelConfig',
    'ScenarioConfig',
    'as_generator',
    'make_ground_truth',
    'next_snapshot',
    'sample_skew_symmetric',
    'rotate_subspace',
    'scenario_stream',
]

SKEW_TOL = 1e-12

def as_generator(seed : Union[int, np.random.Generator, np.random.SeedSequence, None])->np.random.Generator:
    """ Accepts an int seed, a SeedSequence or an existing Generator """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))

class SpikedModelConfig():
    """
    Parameters of the generative model.

    Arguments
    ---------

    d : int

        Ambient dimension.

    k : int

        Rank of the signal, 0 < k < d.

    loading : sequence of floats

        The diagonal c of the signal covariance, one positive entry
        per direction. Defaults to all ones.

    sigma : float

        Noise level, >= 0.

    alpha : float

        Probability that any given coordinate is observed, in (0, 1].
    """

    def __init__(self, d : int, k : int, loading = None, sigma : float = 0.0, alpha : float = 1.0):
        if not (0 < k < d):
            raise ValueError(f"Need 0 < k < d, got d={d}, k={k}")
        loading = np.ones(k) if loading is None else np.asarray(loading, dtype=float).ravel()
        if loading.shape[0] != k:
            raise ValueError(f"Loading vector has {loading.shape[0]} entries, expected k={k}")
        if np.any(loading <= 0):
            raise ValueError("Loading entries must be positive.")
        if sigma < 0:
            raise ValueError("Noise level sigma must be non-negative.")
        if not (0 < alpha <= 1):
            raise ValueError(f"Observation probability alpha must be in (0, 1], got {alpha}")
        self.d = int(d)
        self.k = int(k)
        self.loading = loading
        self.sigma = float(sigma)
        self.alpha = float(alpha)

    def with_loading(self, loading)->'SpikedModelConfig':
        return SpikedModelConfig(self.d, self.k, loading, self.sigma, self.alpha)

    def __repr__(self)->str:
        return (
            f"SpikedModelConfig(d={self.d}, k={self.k}, sigma={self.sigma}, "
            f"alpha={self.alpha}, loading={np.array2string(self.loading, precision=3)})"
        )

class ScenarioConfig():
    """
    How the truth evolves over a stream of `snapshots` snapshots.

    kind : ScenarioKind

        STATIC, ABRUPT_CHANGE (new independent truth from snapshot
        `change_at` on) or ROTATING (truth multiplied by
        exp(delta0 B) every snapshot, B drawn once).

    loading_draw : LoadingDraw

        Where the loading vector comes from (see LoadingDraw).
    """

    def __init__(
            self,
            kind : ScenarioKind = ScenarioKind.STATIC,
            snapshots : int = 5000,
            seed : int = 0,
            change_at : int = None,
            delta0 : float = 0.0,
            loading_draw : LoadingDraw = LoadingDraw.GIVEN,
        ):
        if isinstance(kind, str):
            kind = ScenarioKind(kind)
        if isinstance(loading_draw, str):
            loading_draw = LoadingDraw(loading_draw)
        if snapshots < 1:
            raise ValueError("A scenario needs at least one snapshot.")
        if kind is ScenarioKind.ABRUPT_CHANGE:
            if change_at is None:
                change_at = snapshots // 2
            if not (1 < change_at < snapshots):
                raise ValueError(
                    f"change_at must lie strictly between 1 and {snapshots}, got {change_at}"
                )
        if delta0 < 0:
            raise ValueError("delta0 must be non-negative.")
        self.kind = kind
        self.snapshots = int(snapshots)
        self.seed = seed
        self.change_at = change_at
        self.delta0 = float(delta0)
        self.loading_draw = loading_draw

    def __repr__(self)->str:
        retstr = f"ScenarioConfig({self.kind.value}, snapshots={self.snapshots}"
        if self.kind is ScenarioKind.ABRUPT_CHANGE:
            retstr += f", change_at={self.change_at}"
        if self.kind is ScenarioKind.ROTATING:
            retstr += f", delta0={self.delta0}"
        return retstr + ")"

def make_ground_truth(d : int, k : int, seed = None)->Subspace:
    """ orth() of a d x k matrix of i.i.d. standard normals """
    if not (0 < k < d):
        raise ValueError(f"Need 0 < k < d, got d={d}, k={k}")
    rng = as_generator(seed)
    return orthonormalize(rng.standard_normal((d, k)))

def next_snapshot(
        cfg : SpikedModelConfig,
        U_star : Subspace,
        rng : np.random.Generator,
        snapshot_index : int = 1,
    )->tuple[np.ndarray, PartialObservation]:
    """
    Draws one snapshot of the spiked model and its mask.

    Returns
    -------

    x : np.ndarray

        The full snapshot (for diagnostics; trackers only see obs).

    obs : PartialObservation

        x restricted to a Bernoulli(alpha) mask.
    """
    a = np.sqrt(cfg.loading) * rng.standard_normal(cfg.k)
    eps = rng.standard_normal(cfg.d)
    x = U_star.basis @ a + cfg.sigma * eps
    mask = rng.random(cfg.d) < cfg.alpha
    return x, PartialObservation.from_dense(x, mask, snapshot_index)

def sample_skew_symmetric(d : int, rng : np.random.Generator)->np.ndarray:
    """ (G - G^T)/2 for G with i.i.d. standard normal entries """
    G = rng.standard_normal((d, d))
    return 0.5 * (G - G.T)

def _check_skew(B : np.ndarray):
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise NotSkewSymmetric("Rotation generator must be a square matrix.")
    if np.max(np.abs(B + B.T), initial=0.0) > SKEW_TOL:
        raise NotSkewSymmetric("Rotation generator B is not skew-symmetric (B != -B^T).")
    return B

def rotation_operator(B : np.ndarray, delta0 : float)->np.ndarray:
    """ exp(delta0 B), orthogonal for skew-symmetric B """
    return linalg.expm(delta0 * _check_skew(B))

def rotate_subspace(U : Subspace, B : np.ndarray, delta0 : float)->Subspace:
    """
    exp(delta0 B) U for a skew-symmetric B. The product is
    re-orthonormalized (which leaves it unchanged up to rounding)
    so long runs do not drift away from orthonormality.
    """
    return _apply_rotation(rotation_operator(B, delta0), U)

def _apply_rotation(E : np.ndarray, U : Subspace)->Subspace:
    return orthonormalize(E @ U.basis)

def _loading_for(scenario : ScenarioConfig, cfg : SpikedModelConfig, rng : np.random.Generator)->np.ndarray:
    if scenario.loading_draw is LoadingDraw.UNIFORM_PER_TRIAL:
        return rng.uniform(0.0, 1.0, cfg.k)
    if scenario.loading_draw is LoadingDraw.UNIFORM_SHARED:
        return as_generator(scenario.seed).uniform(0.0, 1.0, cfg.k)
    return cfg.loading

def scenario_stream(
        scenario : ScenarioConfig,
        cfg : SpikedModelConfig,
        rng : np.random.Generator = None,
    )->Iterator[tuple[Subspace, PartialObservation]]:
    """
    Yields (ground_truth, observation) for snapshots 1..scenario.snapshots.

    The generator `rng` drives everything (truths, loading,
    rotation generator, snapshots); when omitted, one is built
    from scenario.seed. Setup draws happen up front, in the order
    loading, first truth, second truth or rotation generator.
    """
    rng = as_generator(scenario.seed) if rng is None else rng
    loading = _loading_for(scenario, cfg, rng)
    model = cfg.with_loading(loading)
    logger.debug("Starting %r with %r", scenario, model)

    truth = make_ground_truth(cfg.d, cfg.k, rng)
    next_truth = None
    rotation = None
    if scenario.kind is ScenarioKind.ABRUPT_CHANGE:
        next_truth = make_ground_truth(cfg.d, cfg.k, rng)
    if scenario.kind is ScenarioKind.ROTATING:
        rotation = rotation_operator(sample_skew_symmetric(cfg.d, rng), scenario.delta0)

    for n in range(1, scenario.snapshots + 1):
        if (next_truth is not None) and n == scenario.change_at:
            truth = next_truth
        if (rotation is not None) and n > 1:
            truth = _apply_rotation(rotation, truth)
        _, obs = next_snapshot(model, truth, rng, n)
        yield truth, obs
