import numpy as np
import pytest

from sensecs.arrays import ArrayConfig, steering, steering_matrix
from sensecs.basis import build_sensed_basis, projection_residual
from sensecs.scene import SceneConfig, draw_scene
from sensecs.sensing import AngleEstimate, oracle_angles

ARRAY = ArrayConfig(8, 8)


def est(thetas, phis):
    return AngleEstimate(theta=np.asarray(thetas, float), phi=np.asarray(phis, float), method="oracle")


def test_single_direction_rank_one():
    b = build_sensed_basis(est([0.05], [0.4]), ARRAY)
    assert b.rank_j == 1
    a = steering(0.05, 0.4, ARRAY)
    alignment = abs(b.u[:, 0].conj() @ (a / np.linalg.norm(a)))
    assert alignment == pytest.approx(1.0, abs=1e-12)


def test_duplicate_angles_collapse_rank():
    b = build_sensed_basis(est([0.02, 0.02], [0.3, 0.3]), ARRAY)
    assert b.rank_j == 1


def test_six_random_directions_full_rank():
    rng = np.random.default_rng(0)
    thetas = rng.uniform(-0.1, 0.1, 6)
    phis = np.linspace(-1.0, 1.0, 6) + rng.uniform(-0.05, 0.05, 6)
    b = build_sensed_basis(est(thetas, phis), ARRAY)
    assert b.rank_j == 6
    a = steering_matrix(thetas, phis, ARRAY)
    assert b.rank_j == np.linalg.matrix_rank(a)


def test_basis_is_unitary():
    rng = np.random.default_rng(1)
    b = build_sensed_basis(est(rng.uniform(-0.1, 0.1, 6), rng.uniform(-1, 1, 6)), ARRAY)
    assert np.max(np.abs(b.u.conj().T @ b.u - np.eye(64))) < 1e-10
    assert np.all(b.singular_values[: b.rank_j] > 0)
    assert np.all(np.diff(b.singular_values) <= 1e-15)


def test_column_space_reconstruction():
    rng = np.random.default_rng(2)
    thetas = rng.uniform(-0.1, 0.1, 5)
    phis = rng.uniform(-1, 1, 5)
    a = steering_matrix(thetas, phis, ARRAY)
    b = build_sensed_basis(est(thetas, phis), ARRAY)
    uj = b.u_active
    # U_J spans col(A): projecting A onto it loses nothing
    assert np.linalg.norm(a - uj @ (uj.conj().T @ a)) < 1e-10 * np.linalg.norm(a)
    np.testing.assert_allclose(b.singular_values, np.linalg.svd(a, compute_uv=False), atol=1e-12)


def test_exact_representation_for_true_angles():
    scene = draw_scene(SceneConfig(), ARRAY, np.random.default_rng(3))
    estimate = oracle_angles(scene, 0.0, np.random.default_rng(0))
    b = build_sensed_basis(estimate, ARRAY)
    assert projection_residual(scene.channel, b) < 1e-10
    coeff = b.u.conj().T @ scene.channel
    assert np.sum(np.abs(coeff) > 1e-12 * np.abs(coeff).max()) <= b.rank_j


def test_projection_residual_orthogonal_input():
    b = build_sensed_basis(est([0.0], [0.0]), ARRAY)
    rng = np.random.default_rng(4)
    v = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    uj = b.u_active
    v_perp = v - uj @ (uj.conj().T @ v)
    assert projection_residual(v_perp, b) == pytest.approx(1.0, abs=1e-12)


def test_projection_residual_decreases_with_angle_error():
    scene = draw_scene(SceneConfig(m_total=1, m_comm=1), ARRAY, np.random.default_rng(5))
    residuals = []
    for err_deg in (0.2, 0.1, 0.05, 0.0):
        estimate = est(scene.thetas + np.radians(err_deg), scene.phis + np.radians(err_deg))
        residuals.append(projection_residual(scene.channel, build_sensed_basis(estimate, ARRAY)))
    assert residuals[0] > residuals[1] > residuals[2] > residuals[3]
    assert residuals[1] > 0
    assert residuals[3] < 1e-10


def test_projector_permutation_invariance():
    rng = np.random.default_rng(6)
    thetas = rng.uniform(-0.1, 0.1, 4)
    phis = rng.uniform(-1, 1, 4)
    b1 = build_sensed_basis(est(thetas, phis), ARRAY)
    perm = [2, 0, 3, 1]
    b2 = build_sensed_basis(est(thetas[perm], phis[perm]), ARRAY)
    p1 = b1.u_active @ b1.u_active.conj().T
    p2 = b2.u_active @ b2.u_active.conj().T
    assert np.max(np.abs(p1 - p2)) < 1e-10


def test_validation_errors():
    with pytest.raises(ValueError):
        build_sensed_basis(est([], []), ARRAY)
    with pytest.raises(ValueError):
        build_sensed_basis(est([0.0], [0.0]), ARRAY, rank_tol=-1)
    b = build_sensed_basis(est([0.0], [0.0]), ARRAY)
    with pytest.raises(ValueError):
        projection_residual(np.zeros(64), b)
