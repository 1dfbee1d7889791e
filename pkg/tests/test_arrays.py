import numpy as np
import pytest

from sensecs.arrays import ArrayConfig, dft_basis, steering, steering_h, steering_matrix, steering_v


def test_steering_v_zero_angle():
    cfg = ArrayConfig(2, 1)
    np.testing.assert_allclose(steering_v(0.0, cfg), 0.5 * np.array([1.0, 1.0]), atol=1e-15)


def test_steering_v_30_degrees():
    cfg = ArrayConfig(2, 1)
    # phase 2*pi*0.5*1*sin(30deg) = pi/2
    np.testing.assert_allclose(steering_v(np.radians(30), cfg), 0.5 * np.array([1.0, 1j]), atol=1e-15)


def test_steering_v_conjugate_symmetry():
    cfg = ArrayConfig(2, 1)
    np.testing.assert_allclose(steering_v(np.radians(-30), cfg), 0.5 * np.array([1.0, -1j]), atol=1e-15)
    np.testing.assert_allclose(steering_v(np.radians(-30), cfg), steering_v(np.radians(30), cfg).conj(), atol=1e-15)


def test_steering_h_zero_azimuth():
    cfg = ArrayConfig(1, 4)
    for theta in (-0.3, 0.0, 0.7):
        np.testing.assert_allclose(steering_h(theta, 0.0, cfg), 0.25 * np.ones(4), atol=1e-15)


def test_steering_h_30_degrees():
    cfg = ArrayConfig(1, 2)
    np.testing.assert_allclose(steering_h(0.0, np.radians(30), cfg), 0.5 * np.array([1.0, 1j]), atol=1e-15)


def test_steering_h_unit_modulus_near_endfire():
    cfg = ArrayConfig(1, 4)
    a = steering_h(np.radians(60), np.radians(90) - 1e-9, cfg)
    np.testing.assert_allclose(np.abs(a), 0.25 * np.ones(4), atol=1e-12)


def test_steering_all_ones():
    cfg = ArrayConfig(2, 2)
    np.testing.assert_allclose(steering(0.0, 0.0, cfg), 0.25 * np.ones(4), atol=1e-15)


def test_steering_default_scale_64_elements():
    cfg = ArrayConfig(8, 8)
    a = steering(np.radians(3), np.radians(40), cfg)
    assert a.shape == (64,)
    assert abs(np.linalg.norm(a) ** 2 - 1 / 64) < 1e-12


def test_steering_is_elementwise_kronecker():
    cfg = ArrayConfig(3, 5)
    rng = np.random.default_rng(0)
    for _ in range(10):
        th = rng.uniform(-1.5, 1.5)
        ph = rng.uniform(-1.5, 1.5)
        a = steering(th, ph, cfg)
        av = steering_v(th, cfg)
        ah = steering_h(th, ph, cfg)
        for p in range(cfg.n_v):
            for q in range(cfg.n_h):
                assert a[p * cfg.n_h + q] == pytest.approx(av[p] * ah[q], abs=1e-15)


def test_steering_norm_invariant():
    cfg = ArrayConfig(8, 8)
    rng = np.random.default_rng(1)
    for _ in range(100):
        th, ph = rng.uniform(-np.pi / 2 + 1e-3, np.pi / 2 - 1e-3, 2)
        assert abs(np.linalg.norm(steering(th, ph, cfg)) ** 2 - 1 / 64) < 1e-12


def test_steering_continuity():
    cfg = ArrayConfig(8, 8)
    rng = np.random.default_rng(2)
    for _ in range(20):
        th, ph = rng.uniform(-1.0, 1.0, 2)
        base = steering(th, ph, cfg)
        moved = steering(th + 1e-9, ph - 1e-9, cfg)
        assert np.linalg.norm(moved - base) < 1e-6


def test_steering_matrix_shapes_and_mismatch():
    cfg = ArrayConfig(4, 4)
    m = steering_matrix([0.1, 0.2], [0.3, -0.3], cfg)
    assert m.shape == (16, 2)
    np.testing.assert_allclose(m[:, 0], steering(0.1, 0.3, cfg))
    with pytest.raises(ValueError):
        steering_matrix([0.1], [0.1, 0.2], cfg)


def test_dft_degenerate():
    np.testing.assert_allclose(dft_basis(ArrayConfig(1, 1)), np.array([[1.0]]), atol=1e-15)


def test_dft_two_point():
    expected = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    np.testing.assert_allclose(dft_basis(ArrayConfig(2, 1)), expected, atol=1e-15)


def test_dft_unitary_64():
    a = dft_basis(ArrayConfig(8, 8))
    assert a.shape == (64, 64)
    assert np.max(np.abs(a.conj().T @ a - np.eye(64))) < 1e-10


def test_array_config_validation():
    with pytest.raises(ValueError):
        ArrayConfig(0, 4)
    with pytest.raises(ValueError):
        ArrayConfig(4, 4, spacing_v=0.0)
    assert ArrayConfig(8, 8).n_elements == 64
