"""
Scaling-limit ODEs for rank-one tracking (d -> infinity, t = n/d,
signal covariance I).

Oja and GROUSE with eta_n = tau/d share one limit:

    ds/dt = a s - b s^3,   a = tau (alpha - tau sigma^4 / 2),
                           b = alpha tau (1 + tau sigma^2 / 2)

PETRELS with lambda = 1 - mu/d and delta = delta'/d follows the
coupled pair

    ds/dt = alpha s (1 - s^2) g - (sigma^2/2)(alpha s^2 + sigma^2) s g^2
    dg/dt = -g^2 (sigma^2 g + 1)(alpha s^2 + sigma^2) + mu g

with g the rescaled mean RLS scalar, g(0) = delta'.

Functions
---------

integrate_oja_grouse_ode, integrate_petrels_ode
    Fixed-step RK4 trajectories.

oja_grouse_closed_form
    Exact solution of the Oja/GROUSE ODE (a Bernoulli equation).

oja_grouse_fixed_point, petrels_phase_threshold, petrels_ode_steady_state
    Long-time behaviour.

cosine_recursion
    The exact one-step map of the cosine similarity for
    full-data rank-one Oja.
"""
import logging
import math

import numpy as np
from scipy import optimize

from ...core.errors import ConfigError, IntegrationDiverged, ZeroNoise
from ...core.kinds import OdeModel

logger = logging.getLogger(__name__)

__all__ = [
    'OdeParams',
    'OdeTrajectory',
    'integrate_oja_grouse_ode',
    'integrate_petrels_ode',
    'integrate',
    'oja_grouse_coefficients',
    'oja_grouse_closed_form',
    'oja_grouse_fixed_point',
    'petrels_phase_threshold',
    'petrels_ode_steady_state',
    'cosine_recursion',
]

CLAMP_TOL = 1e-6 # how far |s| may overshoot 1 before integration is aborted

class OdeParams():
    """
    Parameters of the limiting ODEs.

    Arguments
    ---------

    alpha : float

        Observation probability, in (0, 1].

    sigma : float

        Noise level, >= 0.

    tau : float

        Rescaled step (eta = tau/d), Oja/GROUSE only.

    mu : float

        Rescaled discount (lambda = 1 - mu/d), PETRELS only.

    s0 : float

        Initial cosine similarity, in (-1, 1).

    g0 : float

        Initial g for PETRELS. Defaults to delta_prime, which is
        what g = d R / ||U||^2 gives for R_0 = (delta'/d) I and a
        unit-norm U_0.

    delta_prime : float

        Rescaled RLS initialization, delta = delta'/d. Default 1.

    t_max : float

        Horizon in rescaled time.

    h : float

        RK4 step. Default 1e-2.
    """

    def __init__(
            self,
            alpha : float,
            sigma : float,
            tau : float = None,
            mu : float = None,
            s0 : float = 0.1,
            g0 : float = None,
            delta_prime : float = 1.0,
            t_max : float = 10.0,
            h : float = 1e-2,
        ):
        if not (0 < alpha <= 1):
            raise ConfigError('alpha', f"must lie in (0, 1], got {alpha}")
        if sigma < 0:
            raise ConfigError('sigma', f"must be non-negative, got {sigma}")
        if (tau is not None) and not tau > 0:
            raise ConfigError('tau', f"must be positive, got {tau}")
        if (mu is not None) and not mu > 0:
            raise ConfigError('mu', f"must be positive, got {mu}")
        if not (-1 < s0 < 1):
            raise ConfigError('s0', f"must lie in (-1, 1), got {s0}")
        if not delta_prime > 0:
            raise ConfigError('delta_prime', f"must be positive, got {delta_prime}")
        if not t_max > 0:
            raise ConfigError('t_max', f"must be positive, got {t_max}")
        if not h > 0:
            raise ConfigError('h', f"must be positive, got {h}")
        self.alpha = float(alpha)
        self.sigma = float(sigma)
        self.tau = None if tau is None else float(tau)
        self.mu = None if mu is None else float(mu)
        self.s0 = float(s0)
        self.delta_prime = float(delta_prime)
        self.g0 = self.delta_prime if g0 is None else float(g0)
        self.t_max = float(t_max)
        self.h = float(h)

    def __repr__(self)->str:
        retstr = "OdeParams : \n"
        for param, val in self.__dict__.items():
            retstr += f"\t{param} : {val}\n"
        return retstr

class OdeTrajectory():
    """ s (and for PETRELS g) sampled at `times` """

    def __init__(self, times : np.ndarray, s : np.ndarray, g : np.ndarray = None):
        self.times = np.asarray(times, dtype=float)
        self.s = np.asarray(s, dtype=float)
        self.g = None if g is None else np.asarray(g, dtype=float)

    @property
    def error(self)->np.ndarray:
        """ 1 - s^2 """
        return 1.0 - self.s**2

    def __len__(self)->int:
        return self.times.shape[0]

    def __repr__(self)->str:
        retstr = f"OdeTrajectory({len(self)} points, t in [{self.times[0]}, {self.times[-1]}]"
        return retstr + (", with g)" if self.g is not None else ")")

def _output_grid(t_max : float, h : float, times : np.ndarray = None)->np.ndarray:
    if times is None:
        n_steps = math.ceil(t_max / h - 1e-9)
        times = np.minimum(np.arange(n_steps + 1) * h, t_max)
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.shape[0] < 1 or times[0] != 0 or np.any(np.diff(times) <= 0):
        raise ConfigError('times', "output times must start at 0 and increase strictly")
    return times

def _check_similarity(y : np.ndarray, t : float):
    s = y[0]
    if not np.all(np.isfinite(y)):
        raise IntegrationDiverged(f"Non-finite state {y} at t = {t:.6g}")
    if abs(s) > 1.0:
        if abs(s) - 1.0 > CLAMP_TOL:
            raise IntegrationDiverged(
                f"|s| = {abs(s):.9f} exceeds 1 by more than {CLAMP_TOL} at t = {t:.6g}; "
                "reduce h or check the parameter regime."
            )
        logger.debug("Clamping s = %.12f to +-1 at t = %.6g", s, t)
        y[0] = math.copysign(1.0, s)

def _rk4(rhs, y0 : np.ndarray, times : np.ndarray, h : float)->np.ndarray:
    """
    Classical fourth-order Runge-Kutta from times[0] to times[-1],
    reporting the state at every output time. Each output interval
    is split into ceil(dt/h) equal steps.
    """
    out = np.empty((times.shape[0], y0.shape[0]))
    y = np.array(y0, dtype=float)
    out[0] = y
    for idx in range(1, times.shape[0]):
        t0 = times[idx-1]
        dt = times[idx] - t0
        m = max(math.ceil(dt / h - 1e-9), 1)
        step = dt / m
        for j in range(m):
            t = t0 + j * step
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * step * k1)
            k3 = rhs(y + 0.5 * step * k2)
            k4 = rhs(y + step * k3)
            y = y + (step / 6.0) * (k1 + 2*k2 + 2*k3 + k4)
            _check_similarity(y, t + step)
        out[idx] = y
    return out

def oja_grouse_coefficients(alpha : float, sigma : float, tau : float)->tuple[float, float]:
    """ (a, b) of ds/dt = a s - b s^3 """
    a = tau * (alpha - tau * sigma**4 / 2.0)
    b = alpha * tau * (1.0 + tau * sigma**2 / 2.0)
    return a, b

def _need(p : OdeParams, field : str):
    if getattr(p, field) is None:
        raise ConfigError(field, "must be set for this ODE")

def integrate_oja_grouse_ode(p : OdeParams, times : np.ndarray = None)->OdeTrajectory:
    """
    RK4 solution of the Oja/GROUSE limit from s(0) = s0.

    Arguments
    ---------

    p : OdeParams

        tau must be set.

    times : np.ndarray, optional

        Output times, starting at 0. Defaults to every step of
        size h up to t_max.
    """
    _need(p, 'tau')
    a, b = oja_grouse_coefficients(p.alpha, p.sigma, p.tau)
    times = _output_grid(p.t_max, p.h, times)

    def rhs(y):
        s = y[0]
        return np.array([a*s - b*s**3])

    states = _rk4(rhs, np.array([p.s0]), times, p.h)
    return OdeTrajectory(times, states[:, 0])

def integrate_petrels_ode(p : OdeParams, times : np.ndarray = None)->OdeTrajectory:
    """
    RK4 solution of the coupled PETRELS limit from (s0, g0).

    The g equation gets stiff once sigma^2 g is large (its
    linearization scales like -(sigma^2 g)^2), so keep h well
    below 1 / (mu + (sigma^2 g)^2) at the steady state.
    """
    _need(p, 'mu')
    alpha, sig2, mu = p.alpha, p.sigma**2, p.mu
    times = _output_grid(p.t_max, p.h, times)

    def rhs(y):
        s, g = y
        load = alpha * s**2 + sig2
        ds = alpha * s * (1.0 - s**2) * g - 0.5 * sig2 * load * s * g**2
        dg = -g**2 * (sig2 * g + 1.0) * load + mu * g
        return np.array([ds, dg])

    states = _rk4(rhs, np.array([p.s0, p.g0]), times, p.h)
    return OdeTrajectory(times, states[:, 0], states[:, 1])

def integrate(model : OdeModel, p : OdeParams, times : np.ndarray = None)->OdeTrajectory:
    model = OdeModel(model)
    if model is OdeModel.PETRELS:
        return integrate_petrels_ode(p, times)
    return integrate_oja_grouse_ode(p, times)

def oja_grouse_closed_form(p : OdeParams, times : np.ndarray)->np.ndarray:
    """
    s(t) solving ds/dt = a s - b s^3 exactly:

        s^2(t) = a s0^2 e^{2at} / (a + b s0^2 (e^{2at} - 1))

    (s0^2 / (1 + 2 b s0^2 t) when a = 0). The sign of s0 is kept.
    """
    _need(p, 'tau')
    a, b = oja_grouse_coefficients(p.alpha, p.sigma, p.tau)
    t = np.asarray(times, dtype=float)
    s0sq = p.s0**2
    if a == 0:
        ssq = s0sq / (1.0 + 2.0 * b * s0sq * t)
    elif a > 0:
        decay = np.exp(-2.0 * a * t)
        ssq = a * s0sq / (a * decay - b * s0sq * np.expm1(-2.0 * a * t))
    else:
        growth = np.expm1(2.0 * a * t)
        ssq = a * s0sq * (growth + 1.0) / (a + b * s0sq * growth)
    return math.copysign(1.0, p.s0) * np.sqrt(ssq) if p.s0 != 0 else np.zeros_like(t)

def oja_grouse_fixed_point(alpha : float, sigma : float, tau : float)->float:
    """ sqrt(a/b) if a > 0, else 0: the stable steady-state similarity """
    if not tau > 0:
        raise ConfigError('tau', f"must be positive, got {tau}")
    a, b = oja_grouse_coefficients(alpha, sigma, tau)
    if a <= 0:
        return 0.0
    return math.sqrt(a / b)

def petrels_phase_threshold(alpha : float, sigma : float)->float:
    """
    mu* = (2 alpha / sigma^2 + 1/2)^2 - 1/4.

    PETRELS reaches an informative steady state (s > 0) iff
    mu < mu*. Diverges as sigma -> 0, hence ZeroNoise there.
    """
    if sigma <= 0:
        raise ZeroNoise("The phase threshold is infinite at sigma = 0: every mu is informative.")
    return (2.0 * alpha / sigma**2 + 0.5)**2 - 0.25

def petrels_ode_steady_state(alpha : float, sigma : float, mu : float)->float:
    """
    Steady-state s^2 of the PETRELS ODE.

    With y = sigma^2 g and Y = y + 1, a nonzero fixed point needs

        1 - s^2        = mu sigma^2 / (2 alpha Y)
        alpha s^2 + sigma^2 = mu sigma^2 / (Y (Y - 1))

    which has a root with s^2 > 0 exactly when mu < mu*; otherwise
    the only stable state is s = 0. Noise-free runs converge to 1.
    """
    if not mu > 0:
        raise ConfigError('mu', f"must be positive, got {mu}")
    if sigma == 0:
        return 1.0
    if mu >= petrels_phase_threshold(alpha, sigma):
        return 0.0
    c = mu * sigma**2
    sig2 = sigma**2

    def balance(Y):
        return alpha - c / (2.0 * Y) + sig2 - c / (Y * (Y - 1.0))

    lower = max(c / (2.0 * alpha), 1.0) * (1.0 + 1e-12) + 1e-12
    upper = 2.0 * lower + 1.0
    while balance(upper) <= 0:
        upper *= 2.0
    Y = optimize.brentq(balance, lower, upper, xtol=1e-14, rtol=1e-14)
    return float(np.clip(1.0 - c / (2.0 * alpha * Y), 0.0, 1.0))

def cosine_recursion(
        s_prev : float,
        eta : float,
        a : float,
        sigma : float,
        p : float,
        q : float,
        eps_norm : float,
    )->float:
    """
    Cosine similarity after one full-data rank-one Oja step, from
    the ingredients of the snapshot x = a u* + sigma eps:

        p = eps^T u*,  q = eps^T u_{n-1},  eps_norm = ||eps||

    with unit u* and u_{n-1}.
    """
    xu = a * s_prev + sigma * q
    x_sq = a**2 + sigma**2 * eps_norm**2 + 2.0 * sigma * a * p
    numerator = s_prev + eta * (a + sigma * p) * xu
    return numerator / math.sqrt(1.0 + eta * xu**2 * (2.0 + eta * x_sq))
