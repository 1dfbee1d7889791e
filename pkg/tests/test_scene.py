import numpy as np
import pytest

from sensecs.arrays import ArrayConfig, steering, steering_matrix
from sensecs.scene import Scene, SceneConfig, comm_gain, draw_scene, sense_gain


class FakeRng:
    """Deterministic stand-in: fixed Gaussian magnitude and phase draws."""

    def __init__(self, gaussian=1.0, phase=0.0):
        self.gaussian = gaussian
        self.phase = phase

    def standard_normal(self):
        return self.gaussian

    def uniform(self, lo, hi, size=None):
        assert size is None
        return self.phase


ARRAY = ArrayConfig(8, 8)


def test_sense_gain_plugin_arithmetic():
    # |beta| = sqrt(rho0 * gamma * d^-4) with gamma=1, d=100, rho0=1e-4 -> 1e-6
    beta = sense_gain(100.0, 1e-4, FakeRng(gaussian=1.0))
    assert abs(beta) == pytest.approx(1e-6, rel=1e-12)


def test_sense_gain_zero_reflection_allowed():
    assert sense_gain(100.0, 1e-4, FakeRng(gaussian=0.0)) == 0.0


def test_sense_gain_inverse_fourth_power():
    b1 = abs(sense_gain(50.0, 1e-4, FakeRng(gaussian=0.7)))
    b2 = abs(sense_gain(100.0, 1e-4, FakeRng(gaussian=0.7)))
    assert b1 == pytest.approx(4 * b2, rel=1e-12)


def test_sense_gain_rejects_bad_distance():
    with pytest.raises(ValueError):
        sense_gain(0.0, 1e-4, FakeRng())


def test_comm_gain_direct_path():
    # one-hop |alpha| = sqrt(rho0 * d^-2) = sqrt(1e-4 * 1e-4) = 1e-4
    alpha = comm_gain(100.0, None, 1e-4, FakeRng())
    assert abs(alpha) == pytest.approx(1e-4, rel=1e-12)


def test_comm_gain_reflection_square_root_law():
    a1 = abs(comm_gain(100.0, 30.0, 1e-4, FakeRng(gaussian=1.0)))
    a4 = abs(comm_gain(100.0, 30.0, 1e-4, FakeRng(gaussian=4.0)))
    assert a4 == pytest.approx(2 * a1, rel=1e-12)


def test_comm_gain_zero_hop_distance_fails():
    with pytest.raises(ValueError):
        comm_gain(100.0, 0.0, 1e-4, FakeRng())


def test_draw_scene_alpha_dichotomy():
    scene = draw_scene(SceneConfig(m_total=6, m_comm=4), ARRAY, np.random.default_rng(0))
    alphas = scene.alphas
    assert np.all(alphas[:4] != 0)
    assert np.all(alphas[4:] == 0)
    assert len(scene.scatterers) == 6


def test_draw_scene_single_path_channel():
    cfg = SceneConfig(m_total=1, m_comm=1)
    scene = draw_scene(cfg, ARRAY, np.random.default_rng(1))
    s = scene.scatterers[0]
    np.testing.assert_allclose(scene.channel, s.alpha * steering(s.theta, s.phi, ARRAY), atol=1e-18)


def test_draw_scene_deterministic():
    cfg = SceneConfig()
    a = draw_scene(cfg, ARRAY, np.random.default_rng(42))
    b = draw_scene(cfg, ARRAY, np.random.default_rng(42))
    np.testing.assert_array_equal(a.channel, b.channel)
    for sa, sb in zip(a.scatterers, b.scatterers):
        assert (sa.theta, sa.phi, sa.dist_bs, sa.alpha, sa.beta) == (
            sb.theta, sb.phi, sb.dist_bs, sb.alpha, sb.beta,
        )
        np.testing.assert_array_equal(sa.position, sb.position)


def test_channel_matches_recomputation():
    scene = draw_scene(SceneConfig(), ARRAY, np.random.default_rng(3))
    rebuilt = steering_matrix(scene.thetas, scene.phis, ARRAY) @ scene.alphas
    assert np.linalg.norm(rebuilt - scene.channel) <= 1e-12 * np.linalg.norm(rebuilt)


def test_channel_sparsity_in_comm_steering_span():
    cfg = SceneConfig()
    for seed in range(10):
        scene = draw_scene(cfg, ARRAY, np.random.default_rng(seed))
        a_comm = steering_matrix(scene.thetas[: cfg.m_comm], scene.phis[: cfg.m_comm], ARRAY)
        q, _ = np.linalg.qr(a_comm)
        h = scene.channel
        residual = h - q @ (q.conj().T @ h)
        assert np.linalg.norm(residual) < 1e-10 * np.linalg.norm(h)


def test_scene_geometry_and_ranges():
    cfg = SceneConfig()
    scene = draw_scene(cfg, ARRAY, np.random.default_rng(7))
    for s in scene.scatterers:
        assert np.radians(-5) <= s.theta <= np.radians(5)
        assert np.radians(-60) <= s.phi <= np.radians(60)
        assert 80 <= s.dist_bs <= 120
        assert np.linalg.norm(s.position - np.array(cfg.bs_position)) == pytest.approx(s.dist_bs, rel=1e-12)
    np.testing.assert_array_equal(scene.cu_position, scene.scatterers[0].position)


def test_scene_config_validation():
    with pytest.raises(ValueError):
        SceneConfig(m_total=4, m_comm=5)
    with pytest.raises(ValueError):
        SceneConfig(dist_range=(120.0, 80.0))
    with pytest.raises(ValueError):
        SceneConfig(cu_index=4)  # outside the communication set
    assert SceneConfig(rho0_db=-40).rho0 == pytest.approx(1e-4)


def test_scene_record_text_roundtrippable_fields():
    scene = draw_scene(SceneConfig(), ARRAY, np.random.default_rng(9))
    text = scene.to_record_text()
    lines = text.strip().split("\n")
    assert lines[0].startswith("scene m_total=6")
    assert lines[1].split() == [
        "m", "theta_deg", "phi_deg", "dist_m", "alpha_re", "alpha_im", "beta_re", "beta_im",
    ]
    assert len(lines) == 2 + 6
    first = lines[2].split()
    assert float(first[1]) == pytest.approx(np.degrees(scene.scatterers[0].theta), rel=1e-9)
