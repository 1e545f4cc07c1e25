import numpy as np
import pytest

from substream.core.kinds import OdeModel
from substream.core.errors import ConfigError
from substream.core.subspace import cosine_similarity
from substream.math.theory import (
    OdeParams, McOdeRow, rank_one_start, mc_vs_ode_report, petrels_steady_state,
    phase_grid, grouse_expected_improvement, petrels_phase_threshold,
    petrels_ode_steady_state,
)

def test_rank_one_start_has_requested_similarity(rng):
    u_star = rng.standard_normal(40)
    u_star /= np.linalg.norm(u_star)
    U0 = rank_one_start(u_star, 0.3, rng)
    assert cosine_similarity(U0.basis[:, 0], u_star) == pytest.approx(0.3)

def test_report_layout():
    p = OdeParams(alpha=0.5, sigma=0.1, tau=1.0, t_max=0.5)
    rows = mc_vs_ode_report(OdeModel.OJA_GROUSE, p, d=40, trials=3, seed=1, record_every=4)
    assert all(isinstance(row, McOdeRow) for row in rows)
    assert {row.tracker for row in rows} == {'oja', 'grouse'}
    oja = [row for row in rows if row.tracker == 'oja']
    # 20 snapshots at stride 4, plus t = 0
    assert [row.t for row in oja] == pytest.approx(np.arange(6) * 4 / 40)
    assert oja[0].mc_mean == pytest.approx(1.0 - 0.1**2)
    assert oja[0].mc_std == pytest.approx(0.0)

def test_report_is_reproducible():
    p = OdeParams(alpha=0.7, sigma=0.1, mu=2.0, t_max=0.5)
    first = mc_vs_ode_report('petrels', p, d=30, trials=2, seed=5)
    second = mc_vs_ode_report('petrels', p, d=30, trials=2, seed=5)
    assert first == second
    assert {row.tracker for row in first} == {'petrels'}

def test_report_needs_model_parameter():
    with pytest.raises(ConfigError):
        mc_vs_ode_report(OdeModel.PETRELS, OdeParams(alpha=0.5, sigma=0.1, tau=1.0), d=20, trials=1)
    with pytest.raises(ConfigError):
        mc_vs_ode_report(OdeModel.OJA_GROUSE, OdeParams(alpha=0.5, sigma=0.1, tau=1.0), d=20, trials=0)

def test_noise_free_full_data_sanity():
    p = OdeParams(alpha=1.0, sigma=0.0, tau=1.0, s0=0.9, t_max=6.0, h=1e-2)
    rows = mc_vs_ode_report(OdeModel.OJA_GROUSE, p, d=200, trials=5, seed=3)
    last = {row.tracker : row for row in rows if row.t == rows[-1].t}
    for row in last.values():
        assert row.mc_mean < 1e-3
        assert row.ode < 1e-3

def test_phase_grid_rows():
    rows = phase_grid(0.5, [0.5], [1.0, 100.0], d=50, trials=1, t_max=1.0, seed=2)
    assert len(rows) == 2
    informative, beyond = rows
    mu_star = petrels_phase_threshold(0.5, 0.5)
    assert informative.mu_star == pytest.approx(mu_star)
    assert informative.informative == int(1.0 < mu_star)
    assert informative.ode_error == pytest.approx(1.0 - petrels_ode_steady_state(0.5, 0.5, 1.0))
    # mu >= d has no valid discount
    assert np.isnan(beyond.mc_error)

@pytest.mark.slow
def test_oja_and_grouse_follow_the_ode():
    p = OdeParams(alpha=0.17, sigma=0.2, tau=0.5, s0=0.1, t_max=10.0, h=1e-3)
    rows = mc_vs_ode_report(OdeModel.OJA_GROUSE, p, d=2000, trials=50, seed=0)
    by_tracker = {}
    for row in rows:
        by_tracker.setdefault(row.tracker, []).append(row)
    for trows in by_tracker.values():
        for row in trows:
            assert abs(row.mc_mean - row.ode) <= max(0.05, 3 * row.mc_std)
    for oja, grouse in zip(by_tracker['oja'], by_tracker['grouse']):
        spread = max(oja.mc_std, grouse.mc_std, 1e-3)
        assert abs(oja.mc_mean - grouse.mc_mean) <= 2 * spread

@pytest.mark.slow
def test_petrels_steady_state_across_threshold():
    alpha, sigma, d = 0.5, 0.5, 1000
    mu_star = petrels_phase_threshold(alpha, sigma)
    below = petrels_steady_state(alpha, sigma, 0.1 * mu_star, d, trials=5, t_max=30.0, s0=0.5)
    above = petrels_steady_state(alpha, sigma, 2.0 * mu_star, d, trials=5, t_max=30.0, s0=0.5)
    assert below > 0.1
    assert above < 0.05

@pytest.mark.slow
def test_grouse_expected_improvement_bound():
    report = grouse_expected_improvement(d=500, k=5, alpha=0.5, sigma=0.0, qualifying=2000, seed=0)
    assert report.count == 2000
    assert report.mean_ratio >= report.mean_bound

@pytest.mark.slow
@pytest.mark.parametrize('alpha', [0.2, 0.5, 0.8])
def test_petrels_phase_transition(alpha):
    sigma = 0.2
    mu_star = petrels_phase_threshold(alpha, sigma)
    # keeps mu/d <= 1/4 so the discount stays in (0, 1)
    d = max(2000, int(np.ceil(8 * mu_star)))
    kwargs = dict(trials=10, t_max=5.0, s0=0.5, workers=None)

    above = petrels_steady_state(alpha, sigma, 2.0 * mu_star, d, **kwargs)
    assert above < 0.01

    below = petrels_steady_state(alpha, sigma, 0.5 * mu_star, d, **kwargs)
    predicted = petrels_ode_steady_state(alpha, sigma, 0.5 * mu_star)
    assert below > 0.01
    assert below == pytest.approx(predicted, abs=0.05)
