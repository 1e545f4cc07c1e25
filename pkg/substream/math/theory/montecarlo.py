"""
Monte Carlo experiments that put the trackers next to the
theory: finite-d simulations against the ODE limits, the PETRELS
phase diagram and the GROUSE expected-improvement bound.

Every trial gets its own child of `numpy.random.SeedSequence(seed)`,
split again into an initialization stream (truth, U0) and a data
stream, so results do not depend on how trials are scheduled.
"""
import logging
import math
from functools import partial
from typing import NamedTuple, Sequence

import numpy as np

from ...core.kinds import OdeModel, TrackerName
from ...core.datagen import SpikedModelConfig, as_generator, make_ground_truth, next_snapshot
from ...core.subspace import Subspace, cosine_similarity, determinant_similarity, orthonormalize
from ...core.workers import pool_map
from ...core.errors import ConfigError
from ..trackers import tracker_factory
from .odes import OdeParams, integrate, petrels_phase_threshold, petrels_ode_steady_state
from .scaling import snapshots_for, step_from_tau, discount_from_mu, delta_from_prime

logger = logging.getLogger(__name__)

__all__ = [
    'McOdeRow',
    'PhaseRow',
    'ImprovementReport',
    'rank_one_start',
    'mc_vs_ode_report',
    'petrels_steady_state',
    'phase_grid',
    'grouse_expected_improvement',
]

class McOdeRow(NamedTuple):
    tracker : str
    t : float
    mc_mean : float
    mc_std : float
    ode : float

class PhaseRow(NamedTuple):
    alpha : float
    mu : float
    mu_star : float
    mc_error : float
    ode_error : float
    informative : int

class ImprovementReport(NamedTuple):
    count : int
    mean_ratio : float
    mean_bound : float

def _trial_generators(seed : int, trials : int)->list[tuple[np.random.Generator, np.random.Generator]]:
    pairs = []
    for child in np.random.SeedSequence(seed).spawn(trials):
        init_seq, data_seq = child.spawn(2)
        pairs.append((as_generator(init_seq), as_generator(data_seq)))
    return pairs

def rank_one_start(u_star : np.ndarray, s0 : float, rng : np.random.Generator)->Subspace:
    """ A unit vector with cosine similarity exactly s0 to the unit vector u_star """
    u_star = np.asarray(u_star, dtype=float).ravel()
    v = rng.standard_normal(u_star.shape[0])
    v -= u_star * (u_star @ v)
    v /= np.linalg.norm(v)
    return Subspace(s0 * u_star + math.sqrt(1.0 - s0**2) * v)

def _ode_tracker_params(model : OdeModel, p : OdeParams, d : int)->dict[str, tuple[TrackerName, dict]]:
    if model is OdeModel.PETRELS:
        if p.mu is None:
            raise ConfigError('mu', "must be set for the PETRELS comparison")
        return {
            TrackerName.PETRELS.value : (
                TrackerName.PETRELS,
                {'discount' : discount_from_mu(p.mu, d), 'delta' : delta_from_prime(p.delta_prime, d)},
            )
        }
    if p.tau is None:
        raise ConfigError('tau', "must be set for the Oja/GROUSE comparison")
    eta = step_from_tau(p.tau, d)
    return {
        TrackerName.OJA.value : (TrackerName.OJA, {'step' : eta}),
        TrackerName.GROUSE.value : (TrackerName.GROUSE, {'step' : eta}),
    }

def _rank_one_trial(
        generators : tuple,
        model : OdeModel,
        p : OdeParams,
        d : int,
        n_total : int,
        stride : int,
    )->dict[str, np.ndarray]:
    """ 1 - s^2 at n = 0, stride, 2 stride, ... for every tracker of `model` """
    init_rng, data_rng = generators
    truth = make_ground_truth(d, 1, init_rng)
    u_star = truth.basis[:, 0]
    U0 = rank_one_start(u_star, p.s0, init_rng)
    cfg = SpikedModelConfig(d, 1, [1.0], p.sigma, p.alpha)
    trackers = {
        name : tracker_factory(tname, d, 1, params, U0)
        for name, (tname, params) in _ode_tracker_params(model, p, d).items()
    }
    n_points = n_total // stride + 1
    errors = {name : np.empty(n_points) for name in trackers}
    for name in trackers:
        errors[name][0] = 1.0 - p.s0**2
    for n in range(1, n_total + 1):
        _, obs = next_snapshot(cfg, truth, data_rng, n)
        for tracker in trackers.values():
            tracker.update(obs)
        if n % stride == 0:
            for name, tracker in trackers.items():
                s = cosine_similarity(tracker.estimate().basis[:, 0], u_star)
                errors[name][n // stride] = 1.0 - s**2
    return errors

def mc_vs_ode_report(
        model : OdeModel,
        p : OdeParams,
        d : int,
        trials : int,
        seed : int = 0,
        record_every : int = None,
        workers : int = 1,
    )->list[McOdeRow]:
    """
    Rank-one Monte Carlo runs at dimension d next to the ODE limit.

    OJA_GROUSE runs Oja and GROUSE with eta = tau/d on the same
    streams; PETRELS runs with lambda = 1 - mu/d and
    delta = delta'/d. Every trial starts from a U0 with cosine
    similarity exactly s0 to the truth. The error 1 - s^2 is
    recorded every `record_every` snapshots (default ceil(d/20)),
    so MC and ODE share time stamps t = n/d exactly.

    Returns
    -------

    rows : list of McOdeRow

        One row per tracker and recorded time, with the mean and
        standard deviation over trials and the ODE's 1 - s^2.
    """
    model = OdeModel(model)
    if trials < 1:
        raise ConfigError('trials', f"must be at least 1, got {trials}")
    stride = record_every or math.ceil(d / 20)
    n_total = snapshots_for(p.t_max, d)
    n_points = n_total // stride + 1
    times = np.arange(n_points) * stride / d
    ode_error = integrate(model, p, times).error

    runner = partial(_rank_one_trial, model = model, p = p, d = d, n_total = n_total, stride = stride)
    results = pool_map(runner, _trial_generators(seed, trials), workers)

    rows = []
    for name in results[0]:
        stacked = np.vstack([res[name] for res in results])
        mean = stacked.mean(axis=0)
        std = stacked.std(axis=0, ddof=1) if trials > 1 else np.zeros(n_points)
        for idx in range(n_points):
            rows.append(McOdeRow(name, float(times[idx]), float(mean[idx]), float(std[idx]), float(ode_error[idx])))
    logger.info("mc-vs-ode: %d trials, d = %d, %d time points", trials, d, n_points)
    return rows

def _petrels_trial(
        generators : tuple,
        alpha : float,
        sigma : float,
        mu : float,
        d : int,
        t_max : float,
        s0 : float,
        delta_prime : float,
        tail : float,
    )->float:
    p = OdeParams(alpha, sigma, mu = mu, s0 = s0, delta_prime = delta_prime, t_max = t_max)
    stride = math.ceil(d / 20)
    errors = _rank_one_trial(
        generators, OdeModel.PETRELS, p, d, snapshots_for(t_max, d), stride
    )[TrackerName.PETRELS.value]
    start = min(int((1.0 - tail) * errors.shape[0]), errors.shape[0] - 1)
    return float(np.mean(1.0 - errors[start:]))

def petrels_steady_state(
        alpha : float,
        sigma : float,
        mu : float,
        d : int,
        trials : int = 10,
        t_max : float = 20.0,
        s0 : float = 0.1,
        delta_prime : float = 1.0,
        tail : float = 0.25,
        seed : int = 0,
        workers : int = 1,
    )->float:
    """
    Median over trials of the steady-state s^2 of rank-one PETRELS,
    each trial's value being the mean of s^2 over the last `tail`
    fraction of the recorded run.
    """
    if not (0 < tail <= 1):
        raise ConfigError('tail', f"must lie in (0, 1], got {tail}")
    runner = partial(
        _petrels_trial, alpha = alpha, sigma = sigma, mu = mu, d = d,
        t_max = t_max, s0 = s0, delta_prime = delta_prime, tail = tail,
    )
    values = pool_map(runner, _trial_generators(seed, trials), workers)
    return float(np.median(values))

def phase_grid(
        sigma : float,
        alphas : Sequence[float],
        mus : Sequence[float],
        d : int,
        trials : int = 1,
        t_max : float = 20.0,
        s0 : float = 0.1,
        seed : int = 0,
        workers : int = 1,
    )->list[PhaseRow]:
    """
    The PETRELS phase diagram: steady-state error 1 - s^2 from
    Monte Carlo and from the ODE fixed point for every (alpha, mu),
    next to the threshold mu*(alpha, sigma). Cells with mu >= d
    have no valid discount and get NaN Monte Carlo error.
    """
    rows = []
    for alpha in alphas:
        mu_star = petrels_phase_threshold(alpha, sigma)
        for mu in mus:
            ode_error = 1.0 - petrels_ode_steady_state(alpha, sigma, mu)
            if mu >= d:
                logger.warning("Skipping Monte Carlo for mu = %g >= d = %d", mu, d)
                mc_error = float('nan')
            else:
                mc_error = 1.0 - petrels_steady_state(
                    alpha, sigma, mu, d, trials = trials, t_max = t_max,
                    s0 = s0, seed = seed, workers = workers,
                )
            rows.append(PhaseRow(float(alpha), float(mu), mu_star, mc_error, ode_error, int(mu < mu_star)))
            logger.info("phase: alpha = %.4g, mu = %.4g, mc error %.4g, ode error %.4g", alpha, mu, mc_error, ode_error)
    return rows

def grouse_expected_improvement(
        d : int,
        k : int,
        alpha : float,
        sigma : float = 0.0,
        qualifying : int = 2000,
        zeta_range : tuple[float, float] = (0.1, 0.9),
        eta : float = 0.5,
        seed : int = 0,
        max_updates : int = None,
    )->ImprovementReport:
    """
    Monte Carlo check of the GROUSE expected-improvement bound

        E[zeta_{n+1} / zeta_n] >= 1 + eta (|Omega_n| / d) (1 - zeta_n) / k

    with greedy steps on a static stream. Only updates starting
    from zeta_n inside `zeta_range` count. Once an estimate leaves
    the range from above, a fresh truth and random U0 are drawn.

    Returns
    -------

    report : ImprovementReport

        Number of qualifying updates, the mean observed ratio and
        the mean of the bound over the same updates.
    """
    lo, hi = zeta_range
    max_updates = max_updates or 500 * qualifying
    rng = as_generator(seed)
    cfg = SpikedModelConfig(d, k, None, sigma, alpha)

    ratios, bounds = [], []
    truth = tracker = None
    for n in range(1, max_updates + 1):
        if tracker is None:
            truth = make_ground_truth(d, k, rng)
            U0 = orthonormalize(rng.standard_normal((d, k)))
            tracker = tracker_factory(TrackerName.GROUSE, d, k, {}, U0)
        zeta = determinant_similarity(tracker.estimate(), truth)
        _, obs = next_snapshot(cfg, truth, rng, n)
        tracker.update(obs)
        zeta_next = determinant_similarity(tracker.estimate(), truth)
        if lo <= zeta <= hi:
            ratios.append(zeta_next / zeta)
            bounds.append(1.0 + eta * (obs.observed_count / d) * (1.0 - zeta) / k)
            if len(ratios) >= qualifying:
                break
        if zeta_next > hi:
            tracker = None
    if len(ratios) < qualifying:
        logger.warning(
            "Only %d of %d qualifying updates within %d snapshots", len(ratios), qualifying, max_updates
        )
    if not ratios:
        return ImprovementReport(0, float('nan'), float('nan'))
    return ImprovementReport(len(ratios), float(np.mean(ratios)), float(np.mean(bounds)))
