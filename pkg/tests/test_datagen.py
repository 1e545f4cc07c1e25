import numpy as np
import pytest

from substream.core.errors import NotSkewSymmetric
from substream.core.kinds import ScenarioKind, LoadingDraw
from substream.core.subspace import Subspace, orthonormality_error, projection_error, determinant_similarity
from substream.core.datagen import (
    SpikedModelConfig, ScenarioConfig, as_generator, make_ground_truth, next_snapshot,
    sample_skew_symmetric, rotation_operator, rotate_subspace, scenario_stream,
)

def test_model_config_validation():
    with pytest.raises(ValueError):
        SpikedModelConfig(5, 5)
    with pytest.raises(ValueError):
        SpikedModelConfig(5, 2, loading=[1.0])
    with pytest.raises(ValueError):
        SpikedModelConfig(5, 2, loading=[1.0, 0.0])
    with pytest.raises(ValueError):
        SpikedModelConfig(5, 2, sigma=-1.0)
    with pytest.raises(ValueError):
        SpikedModelConfig(5, 2, alpha=0.0)
    np.testing.assert_array_equal(SpikedModelConfig(5, 2).loading, [1.0, 1.0])

def test_scenario_config_defaults_and_validation():
    abrupt = ScenarioConfig('abrupt', snapshots=100)
    assert abrupt.kind is ScenarioKind.ABRUPT_CHANGE
    assert abrupt.change_at == 50
    with pytest.raises(ValueError):
        ScenarioConfig('abrupt', snapshots=100, change_at=100)
    with pytest.raises(ValueError):
        ScenarioConfig('static', snapshots=0)
    with pytest.raises(ValueError):
        ScenarioConfig('nonsense')

def test_ground_truth_is_orthonormal_and_seeded():
    U = make_ground_truth(50, 4, seed=7)
    assert orthonormality_error(U.basis) < 1e-12
    np.testing.assert_array_equal(U.basis, make_ground_truth(50, 4, seed=7).basis)

def test_next_snapshot_noise_free_lies_in_subspace():
    cfg = SpikedModelConfig(30, 3, sigma=0.0, alpha=1.0)
    U = make_ground_truth(30, 3, seed=1)
    x, obs = next_snapshot(cfg, U, as_generator(2), 5)
    np.testing.assert_allclose(U.projector @ x, x, atol=1e-12)
    assert obs.is_full
    assert obs.snapshot_index == 5
    np.testing.assert_array_equal(obs.values, x)

def test_next_snapshot_mask_rate():
    cfg = SpikedModelConfig(20000, 2, sigma=1.0, alpha=0.3)
    U = make_ground_truth(20000, 2, seed=1)
    _, obs = next_snapshot(cfg, U, as_generator(3))
    assert obs.observed_count / 20000 == pytest.approx(0.3, abs=0.02)

def test_snapshot_covariance_matches_model():
    d, k = 6, 2
    cfg = SpikedModelConfig(d, k, loading=[4.0, 1.0], sigma=0.5)
    U = make_ground_truth(d, k, seed=4)
    rng = as_generator(5)
    X = np.column_stack([next_snapshot(cfg, U, rng)[0] for _ in range(40000)])
    expected = U.basis @ np.diag([4.0, 1.0]) @ U.basis.T + 0.25 * np.eye(d)
    np.testing.assert_allclose(X @ X.T / X.shape[1], expected, atol=0.15)

def test_skew_symmetric_and_rotation(rng):
    B = sample_skew_symmetric(8, rng)
    np.testing.assert_allclose(B, -B.T)
    E = rotation_operator(B, 0.3)
    np.testing.assert_allclose(E.T @ E, np.eye(8), atol=1e-12)
    with pytest.raises(NotSkewSymmetric):
        rotation_operator(B + np.eye(8), 0.1)

def test_rotate_subspace_matches_expm_product(rng):
    B = sample_skew_symmetric(10, rng)
    U = make_ground_truth(10, 2, rng)
    rotated = rotate_subspace(U, B, 1e-2)
    expected = Subspace(rotation_operator(B, 1e-2) @ U.basis)
    np.testing.assert_allclose(rotated.projector, expected.projector, atol=1e-12)

def test_rotation_by_zero_is_identity(rng):
    B = sample_skew_symmetric(5, rng)
    U = make_ground_truth(5, 2, rng)
    assert projection_error(rotate_subspace(U, B, 0.0), U) == pytest.approx(0.0, abs=1e-20)

def _collect(scenario, cfg):
    return list(scenario_stream(scenario, cfg))

def test_stream_is_reproducible():
    cfg = SpikedModelConfig(12, 2, sigma=0.1, alpha=0.5)
    scenario = ScenarioConfig('static', snapshots=20, seed=3)
    first, second = _collect(scenario, cfg), _collect(scenario, cfg)
    for (t1, o1), (t2, o2) in zip(first, second):
        np.testing.assert_array_equal(o1.mask, o2.mask)
        np.testing.assert_array_equal(o1.values, o2.values)
        np.testing.assert_array_equal(t1.basis, t2.basis)
    assert [obs.snapshot_index for _, obs in first] == list(range(1, 21))

def test_static_truth_is_constant():
    cfg = SpikedModelConfig(12, 2)
    stream = _collect(ScenarioConfig('static', snapshots=5, seed=1), cfg)
    assert all(truth is stream[0][0] for truth, _ in stream)

def test_abrupt_change_switches_truth_once():
    cfg = SpikedModelConfig(12, 2)
    stream = _collect(ScenarioConfig('abrupt', snapshots=10, seed=1, change_at=4), cfg)
    truths = [truth for truth, _ in stream]
    assert all(t is truths[0] for t in truths[:3])
    assert all(t is truths[3] for t in truths[3:])
    assert projection_error(truths[0], truths[3]) > 0.1

def test_rotating_truth_moves_slowly():
    cfg = SpikedModelConfig(12, 2)
    stream = _collect(ScenarioConfig('rotating', snapshots=6, seed=1, delta0=1e-3), cfg)
    truths = [truth for truth, _ in stream]
    for prev, cur in zip(truths[:-1], truths[1:]):
        err = projection_error(prev, cur)
        assert 0.0 < err < 1e-4
        assert orthonormality_error(cur.basis) < 1e-12

def test_loading_draws():
    from substream.core.datagen import _loading_for
    cfg = SpikedModelConfig(12, 3, loading=[2.0, 2.0, 2.0])
    given = ScenarioConfig('static', snapshots=1, seed=1)
    per_trial = ScenarioConfig('static', snapshots=1, seed=1, loading_draw=LoadingDraw.UNIFORM_PER_TRIAL)
    shared = ScenarioConfig('static', snapshots=1, seed=9, loading_draw='uniform-shared')

    np.testing.assert_array_equal(_loading_for(given, cfg, as_generator(1)), [2.0, 2.0, 2.0])
    a = _loading_for(per_trial, cfg, as_generator(1))
    b = _loading_for(per_trial, cfg, as_generator(2))
    assert np.all((a > 0) & (a < 1))
    assert not np.array_equal(a, b)
    np.testing.assert_array_equal(
        _loading_for(shared, cfg, as_generator(1)),
        _loading_for(shared, cfg, as_generator(2)),
    )

def test_independent_truths_are_far_apart():
    first, second = make_ground_truth(200, 10, 1), make_ground_truth(200, 10, 2)
    assert determinant_similarity(first, second) < 0.5

def test_quarter_turn_in_the_plane():
    B = np.array([[0.0, 1.0], [-1.0, 0.0]])
    rotated = rotate_subspace(Subspace([1.0, 0.0]), B, np.pi / 2)
    np.testing.assert_allclose(rotated.projector, [[0.0, 0.0], [0.0, 1.0]], atol=1e-12)

def test_rotating_truth_drifts_away():
    cfg = SpikedModelConfig(50, 5, sigma=1e-5, alpha=0.3)
    truths = [truth for truth, _ in scenario_stream(ScenarioConfig('rotating', snapshots=1000, seed=4, delta0=1e-5), cfg)]
    first = truths[0]
    assert determinant_similarity(first, truths[999]) < determinant_similarity(first, truths[1])
