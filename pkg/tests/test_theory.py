import math

import numpy as np
import pytest

from substream.core.kinds import OdeModel
from substream.core.errors import ConfigError, ZeroNoise, IntegrationDiverged
from substream.math.theory import (
    OdeParams, integrate, integrate_oja_grouse_ode, integrate_petrels_ode,
    oja_grouse_coefficients, oja_grouse_closed_form, oja_grouse_fixed_point,
    petrels_phase_threshold, petrels_ode_steady_state, cosine_recursion,
    TimeUnits, convert_time, snapshots_for, step_from_tau, tau_from_step,
    discount_from_mu, mu_from_discount, delta_from_prime, petrels_g,
)

def test_params_validation_names_field():
    with pytest.raises(ConfigError) as err:
        OdeParams(alpha=0.0, sigma=0.1, tau=1.0)
    assert err.value.field == 'alpha'
    with pytest.raises(ConfigError) as err:
        OdeParams(alpha=0.5, sigma=0.1, tau=1.0, s0=1.0)
    assert err.value.field == 's0'
    with pytest.raises(ConfigError) as err:
        integrate_oja_grouse_ode(OdeParams(alpha=0.5, sigma=0.1))
    assert err.value.field == 'tau'
    assert OdeParams(alpha=0.5, sigma=0.1, mu=1.0, delta_prime=3.0).g0 == 3.0

def test_oja_grouse_matches_closed_form():
    p = OdeParams(alpha=0.5, sigma=0.3, tau=1.0, s0=0.1, t_max=20.0, h=5e-3)
    times = np.linspace(0.0, 20.0, 100)
    traj = integrate_oja_grouse_ode(p, times)
    np.testing.assert_allclose(traj.s, oja_grouse_closed_form(p, times), atol=1e-8)

def test_oja_grouse_closed_form_negative_growth():
    p = OdeParams(alpha=0.01, sigma=1.0, tau=1.0, s0=0.8, t_max=10.0, h=1e-2)
    a, _ = oja_grouse_coefficients(p.alpha, p.sigma, p.tau)
    assert a < 0
    times = np.linspace(0.0, 10.0, 50)
    s = integrate_oja_grouse_ode(p, times).s
    np.testing.assert_allclose(s, oja_grouse_closed_form(p, times), atol=1e-8)
    assert np.all(np.diff(s) < 0)

def test_rk4_is_fourth_order():
    p = OdeParams(alpha=1.0, sigma=0.0, tau=1.0, s0=0.1, t_max=2.5)
    times = np.array([0.0, 2.5])
    exact = oja_grouse_closed_form(p, times)[-1]
    errors = []
    for h in (0.1, 0.05):
        p.h = h
        errors.append(abs(integrate_oja_grouse_ode(p, times).s[-1] - exact))
    assert 12.0 <= errors[0] / errors[1] <= 20.0

def test_zero_start_stays_zero():
    oja = integrate_oja_grouse_ode(OdeParams(alpha=0.5, sigma=0.2, tau=1.0, s0=0.0, t_max=2.0))
    petrels = integrate_petrels_ode(OdeParams(alpha=0.5, sigma=0.2, mu=1.0, s0=0.0, t_max=2.0))
    np.testing.assert_array_equal(oja.s, 0.0)
    np.testing.assert_array_equal(petrels.s, 0.0)

def test_default_grid_and_error():
    traj = integrate(OdeModel.OJA_GROUSE, OdeParams(alpha=0.5, sigma=0.0, tau=1.0, t_max=1.0, h=0.1))
    assert len(traj) == 11
    assert traj.times[-1] == pytest.approx(1.0)
    np.testing.assert_allclose(traj.error, 1.0 - traj.s**2)
    assert traj.g is None

def test_fixed_point():
    assert oja_grouse_fixed_point(0.3, 0.0, 2.0) == pytest.approx(1.0)
    # alpha = tau sigma^4 / 2 exactly
    assert oja_grouse_fixed_point(0.5, 1.0, 1.0) == 0.0
    a, b = oja_grouse_coefficients(0.17, 0.2, 0.5)
    assert oja_grouse_fixed_point(0.17, 0.2, 0.5) == pytest.approx(math.sqrt(a / b))

def test_integration_reaches_fixed_point():
    alpha, sigma, tau = 0.17, 0.2, 0.5
    a, _ = oja_grouse_coefficients(alpha, sigma, tau)
    t_max = 50.0 / a
    p = OdeParams(alpha, sigma, tau=tau, s0=0.1, t_max=t_max, h=0.05)
    s_end = integrate_oja_grouse_ode(p, np.array([0.0, t_max])).s[-1]
    assert s_end == pytest.approx(oja_grouse_fixed_point(alpha, sigma, tau), abs=1e-4)

def test_phase_threshold():
    assert petrels_phase_threshold(1.0, 1.0) == pytest.approx(6.0)
    assert petrels_phase_threshold(0.17, 0.2) == pytest.approx(80.75)
    assert petrels_phase_threshold(0.5, 0.2) > petrels_phase_threshold(0.3, 0.2)
    assert petrels_phase_threshold(0.5, 0.3) < petrels_phase_threshold(0.5, 0.2)
    assert petrels_phase_threshold(0.5, 1e3) == pytest.approx(0.0, abs=1e-5)
    with pytest.raises(ZeroNoise):
        petrels_phase_threshold(0.5, 0.0)

def test_petrels_step_halving():
    p = OdeParams(alpha=0.5, sigma=0.2, mu=10.0, t_max=5.0, h=4e-3)
    times = np.array([0.0, 5.0])
    coarse = integrate_petrels_ode(p, times).s[-1]
    p.h = 2e-3
    fine = integrate_petrels_ode(p, times).s[-1]
    assert abs(coarse - fine) < 1e-6

def test_petrels_below_threshold_is_informative():
    alpha, sigma = 0.17, 0.2
    mu = 0.5 * petrels_phase_threshold(alpha, sigma)
    p = OdeParams(alpha, sigma, mu=mu, s0=0.1, g0=1.0, t_max=200.0, h=1e-2)
    traj = integrate_petrels_ode(p, np.array([0.0, 200.0]))
    assert traj.s[-1] > 0.1
    assert traj.s[-1]**2 == pytest.approx(petrels_ode_steady_state(alpha, sigma, mu), abs=1e-4)

def test_petrels_above_threshold_decays():
    alpha, sigma = 0.17, 0.2
    mu = 1.5 * petrels_phase_threshold(alpha, sigma)
    p = OdeParams(alpha, sigma, mu=mu, s0=0.1, g0=1.0, t_max=20.0, h=5e-3)
    traj = integrate_petrels_ode(p, np.array([0.0, 20.0]))
    assert abs(traj.s[-1]) < 1e-3
    assert petrels_ode_steady_state(alpha, sigma, mu) == 0.0

def test_petrels_steady_state_limits():
    assert petrels_ode_steady_state(0.5, 0.0, 3.0) == 1.0
    low = petrels_ode_steady_state(0.5, 0.2, 10.0)
    high = petrels_ode_steady_state(0.5, 0.2, 300.0)
    assert 0.0 < high < low < 1.0
    with pytest.raises(ConfigError):
        petrels_ode_steady_state(0.5, 0.2, 0.0)

def test_unstable_step_reports_divergence():
    # h far beyond the RK4 stability limit of the g equation
    p = OdeParams(alpha=0.17, sigma=0.2, mu=200.0, s0=0.5, t_max=20.0, h=0.5)
    with pytest.raises(IntegrationDiverged):
        integrate_petrels_ode(p)

def test_cosine_recursion_noise_free():
    # x = a u*, u_prev at angle with s_prev
    s_prev, eta, a = 0.6, 0.1, 1.5
    expected = (s_prev + eta * a * a * s_prev) / math.sqrt(1.0 + eta * (a * s_prev)**2 * (2.0 + eta * a**2))
    assert cosine_recursion(s_prev, eta, a, 0.0, 0.0, 0.0, 0.0) == pytest.approx(expected)

def test_scaling_conversions():
    assert convert_time(np.array([100.0, 250.0]), TimeUnits.SNAPSHOTS, TimeUnits.RESCALED, 50).tolist() == [2.0, 5.0]
    assert convert_time(2.0, TimeUnits.RESCALED, TimeUnits.SNAPSHOTS, 50) == 100.0
    assert snapshots_for(2.5, 200) == 500
    assert step_from_tau(0.5, 1000) == pytest.approx(5e-4)
    assert tau_from_step(5e-4, 1000) == pytest.approx(0.5)
    assert discount_from_mu(20.0, 1000) == pytest.approx(0.98)
    assert mu_from_discount(0.98, 1000) == pytest.approx(20.0)
    assert delta_from_prime(2.0, 100) == pytest.approx(0.02)
    assert petrels_g(0.01, np.ones(4) / 2.0, 100) == pytest.approx(1.0)
    with pytest.raises(ConfigError):
        discount_from_mu(1000.0, 1000)
    with pytest.raises(ConfigError):
        step_from_tau(1.0, 0)
