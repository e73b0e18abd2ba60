"""Quasi-stochastic processes: rotations, channels, measurements, negativity."""

import numpy as np
import pytest

from quasibits import frame, processes
from quasibits.errors import (
    BallNotPreserved,
    DimensionMismatch,
    NormalizationViolated,
    NotARotation,
    NotUnitAxis,
)

SQRT3 = np.sqrt(3.0)
Z = np.array([0.0, 0.0, 1.0])


def rot_z(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def random_bloch(rng):
    v = rng.normal(size=3)
    return v * rng.uniform() / np.linalg.norm(v)


def test_identity_rotation_is_identity_process():
    assert np.allclose(processes.rotation_process(np.eye(3)), np.eye(4), atol=1e-15)


def test_pi_rotation_flips_x():
    s_mat = processes.rotation_process(rot_z(np.pi))
    p = processes.apply_process(s_mat, frame.state_from_bloch((1.0, 0.0, 0.0)))
    assert np.abs(p - frame.state_from_bloch((-1.0, 0.0, 0.0))).max() <= 1e-12


def test_quarter_turn_has_negative_entries_but_preserves_states():
    s_mat = processes.rotation_process(rot_z(np.pi / 2.0))
    assert s_mat.min() < 0.0
    rng = np.random.default_rng(5)
    for _ in range(50):
        p = processes.apply_process(s_mat, frame.state_from_bloch(random_bloch(rng)))
        assert frame.validate_state(p).valid


def test_rotation_processes_are_quasi_bistochastic():
    rng = np.random.default_rng(17)
    for _ in range(100):
        s_mat = processes.rotation_process(processes.random_orthogonal(rng))
        assert np.abs(s_mat.sum(axis=0) - 1.0).max() <= 1e-12
        assert np.abs(s_mat.sum(axis=1) - 1.0).max() <= 1e-12


def test_rotation_acts_as_bloch_rotation():
    rng = np.random.default_rng(23)
    for _ in range(1000):
        o = processes.random_orthogonal(rng)
        s = random_bloch(rng)
        left = processes.apply_process(
            processes.rotation_process(o), frame.state_from_bloch(s)
        )
        assert np.abs(left - frame.state_from_bloch(o @ s)).max() <= 1e-12


def test_affine_identity():
    assert np.allclose(processes.affine_process(np.eye(3)), np.eye(4), atol=1e-15)


def test_affine_depolarizing():
    s_mat = processes.affine_process(0.5 * np.eye(3))
    p = processes.apply_process(s_mat, frame.state_from_bloch(Z))
    assert np.abs(frame.bloch_from_state(p) - 0.5 * Z).max() <= 1e-12


def test_affine_constant_map():
    s_mat = processes.affine_process(np.zeros((3, 3)), Z)
    rng = np.random.default_rng(3)
    target = frame.state_from_bloch(Z)
    for _ in range(20):
        p = processes.apply_process(s_mat, frame.state_from_bloch(random_bloch(rng)))
        assert np.abs(p - target).max() <= 1e-12


def test_affine_general_action_and_column_sums():
    rng = np.random.default_rng(29)
    for _ in range(100):
        linear = rng.normal(scale=0.3, size=(3, 3))
        shift = rng.normal(scale=0.05, size=3)
        # rescale so the ball stays inside the ball
        reach = np.linalg.norm(linear, ord=2) + np.linalg.norm(shift)
        if reach > 0.95:
            linear *= 0.95 / reach
            shift *= 0.95 / reach
        s_mat = processes.affine_process(linear, shift)
        assert np.abs(s_mat.sum(axis=0) - 1.0).max() <= 1e-12
        s = random_bloch(rng)
        p = processes.apply_process(s_mat, frame.state_from_bloch(s))
        assert np.abs(p - frame.state_from_bloch(linear @ s + shift)).max() <= 1e-12


def test_affine_ball_escape_rejected():
    with pytest.raises(BallNotPreserved):
        processes.affine_process(1.2 * np.eye(3))
    with pytest.raises(BallNotPreserved):
        processes.affine_process(0.9 * np.eye(3), (0.0, 0.0, 0.3))


def test_eta_entries_along_z():
    eta = processes.eta_measurement(Z)
    assert abs(eta[0, 0] - 0.5 * (1.0 + SQRT3)) <= 1e-12
    assert abs(eta[0, 1] - 0.5 * (1.0 - SQRT3)) <= 1e-12
    assert np.abs(eta.sum(axis=0) - 1.0).max() <= 1e-12


def test_eta_on_aligned_state():
    eta = processes.eta_measurement(Z)
    out = processes.apply_process(eta, frame.state_from_bloch(Z))
    assert np.abs(out - (1.0, 0.0)).max() <= 1e-12
    mixed = processes.apply_process(eta, np.full(4, 0.25))
    assert np.abs(mixed - 0.5).max() <= 1e-15


def test_eta_outcome_law_random():
    rng = np.random.default_rng(41)
    for _ in range(1000):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        s = random_bloch(rng)
        out = processes.apply_process(
            processes.eta_measurement(axis), frame.state_from_bloch(s)
        )
        expected = 0.5 * (1.0 + np.array([1.0, -1.0]) * (axis @ s))
        assert np.abs(out - expected).max() <= 1e-12
        assert out.min() >= -1e-12


def test_eta_always_has_a_deeply_negative_entry():
    # no choice of axis avoids negativity; the worst entry never comes
    # closer to zero than -0.25
    for axis in processes._fibonacci_sphere(100):
        assert processes.eta_measurement(axis).min() <= -0.25


def test_eta_requires_unit_axis():
    with pytest.raises(NotUnitAxis):
        processes.eta_measurement((1.0, 1.0, 0.0))
    with pytest.raises(NotUnitAxis):
        processes.eta_measurement((0.0, 0.0))


def test_eta_column_negativity_lower_bound():
    # max-column negative mass is (sqrt(3)-1)/2 at best; random axes sit above
    bound = 0.5 * (SQRT3 - 1.0)
    rng = np.random.default_rng(101)
    for _ in range(100):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        report = processes.negativity(processes.eta_measurement(axis))
        assert report.max_column >= bound - 1e-12


@pytest.mark.parametrize("k,sign", [(i, s) for i in range(3) for s in (1.0, -1.0)])
def test_eta_column_negativity_tight_on_coordinate_axes(k, sign):
    axis = np.zeros(3)
    axis[k] = sign
    report = processes.negativity(processes.eta_measurement(axis))
    assert abs(report.max_column - 0.5 * (SQRT3 - 1.0)) <= 1e-12


def test_eta_column_negativity_depends_on_axis():
    # an axis between two coordinate directions concentrates more negative
    # mass in one column, so the coordinate-axis value is a floor, not a
    # constant
    axis = np.array([1.0, 1.0, 0.0]) / np.sqrt(2.0)
    report = processes.negativity(processes.eta_measurement(axis))
    assert abs(report.max_column - 0.7247448713915892) <= 1e-12
    assert report.max_column > 0.5 * (SQRT3 - 1.0) + 0.3


def test_direct_readout_identity_and_negativity():
    r = processes.direct_readout()
    assert np.array_equal(r, np.eye(4))
    report = processes.negativity(r)
    assert report.total == 0.0
    assert report.max_column == 0.0


def test_negativity_of_eta_z():
    report = processes.negativity(processes.eta_measurement(Z))
    assert abs(report.total - 2.0 * (SQRT3 - 1.0)) <= 1e-12
    assert abs(report.max_column - 0.5 * (SQRT3 - 1.0)) <= 1e-12
    assert np.abs(np.asarray(report.column_masses) - 0.5 * (SQRT3 - 1.0)).max() <= 1e-12


def test_negativity_of_identity_rotation():
    # entries are 0 and 1 up to rounding in the tetra contractions
    report = processes.negativity(processes.rotation_process(np.eye(3)))
    assert report.total <= 1e-12


def test_general_measurement_recovers_eta():
    m = np.array([3.0 * Z, -3.0 * Z])
    w = frame.TETRA_VECTORS
    assert np.abs(
        processes.general_measurement(m, w) - processes.eta_measurement(Z)
    ).max() <= 1e-15


def test_general_measurement_recovers_direct_readout():
    m = 3.0 * frame.TETRA_VECTORS
    w = frame.TETRA_VECTORS
    assert np.abs(processes.general_measurement(m, w) - np.eye(4)).max() <= 1e-15


def test_general_measurement_zero_tags_uniform():
    m = np.zeros((4, 3))
    assert np.array_equal(processes.general_measurement(m, frame.TETRA_VECTORS),
                          np.full((4, 4), 0.25))


def test_general_measurement_tag_sum_enforced():
    m = np.array([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    with pytest.raises(NormalizationViolated):
        processes.general_measurement(m, frame.TETRA_VECTORS)


def test_general_output_matches_contraction():
    rng = np.random.default_rng(59)
    for _ in range(100):
        n_out = int(rng.choice([2, 4, 8]))
        m = rng.normal(size=(n_out, 3))
        m -= m.mean(axis=0)
        w = rng.normal(size=(4, 3))
        s = random_bloch(rng)
        closed = processes.general_output(m, w, s)
        direct = processes.general_measurement(m, w) @ frame.state_from_bloch(s)
        assert np.abs(closed - direct).max() <= 1e-12


def test_apply_process_shape_errors():
    with pytest.raises(DimensionMismatch):
        processes.apply_process(np.eye(4), np.full(16, 1.0 / 16.0))


def test_rotate_then_measure():
    flip = processes.rotation_process(
        processes.axis_angle_rotation((1.0, 0.0, 0.0), np.pi)
    )
    chained = processes.compose(processes.eta_measurement(Z), flip)
    out = processes.apply_process(chained, frame.state_from_bloch(Z))
    assert np.abs(out - (0.0, 1.0)).max() <= 1e-12


def test_compose_identity():
    s_mat = processes.rotation_process(rot_z(0.7))
    assert np.abs(processes.compose(np.eye(4), s_mat) - s_mat).max() == 0.0


def test_compose_is_group_homomorphism():
    rng = np.random.default_rng(61)
    for _ in range(100):
        o1 = processes.random_orthogonal(rng)
        o2 = processes.random_orthogonal(rng)
        left = processes.compose(
            processes.rotation_process(o2), processes.rotation_process(o1)
        )
        assert np.abs(left - processes.rotation_process(o2 @ o1)).max() <= 1e-12


def test_compose_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        processes.compose(processes.eta_measurement(Z).T, np.eye(4))


def test_measure_after_rotation_law():
    rng = np.random.default_rng(67)
    for _ in range(100):
        o = processes.random_orthogonal(rng)
        s = random_bloch(rng)
        chained = processes.compose(
            processes.eta_measurement(Z), processes.rotation_process(o)
        )
        out = processes.apply_process(chained, frame.state_from_bloch(s))
        expected = 0.5 * (1.0 + np.array([1.0, -1.0]) * (Z @ (o @ s)))
        assert np.abs(out - expected).max() <= 1e-12


def test_rotation_roundtrip_and_inverse():
    rng = np.random.default_rng(71)
    for k in range(100):
        o = processes.random_orthogonal(rng, improper=k % 2 == 1)
        s_mat = processes.rotation_process(o)
        assert np.abs(processes.rotation_from_process(s_mat) - o).max() <= 1e-12
        inv = processes.invert_rotation(s_mat)
        assert np.abs(processes.compose(inv, s_mat) - np.eye(4)).max() <= 1e-12


def test_positive_bistochastic_rejected():
    # mixing two permutations gives a positive bistochastic non-permutation;
    # no orthogonal matrix reproduces it
    perm = np.eye(4)[[1, 0, 3, 2]]
    blend = 0.5 * np.eye(4) + 0.5 * perm
    with pytest.raises(NotARotation):
        processes.invert_rotation(blend)
    with pytest.raises(NotARotation):
        processes.rotation_from_process(np.full((4, 4), 0.25))


def test_axis_angle_rotation_matches_analytic():
    theta = 0.8
    o = processes.axis_angle_rotation((0.0, 0.0, 2.0), theta)
    assert np.abs(o - rot_z(theta)).max() <= 1e-12


def test_random_orthogonal_determinism_and_parity():
    a = processes.random_orthogonal(np.random.default_rng(9))
    b = processes.random_orthogonal(np.random.default_rng(9))
    assert np.array_equal(a, b)
    flip = processes.random_orthogonal(np.random.default_rng(9), improper=True)
    assert np.linalg.det(flip) < 0.0
    assert np.abs(flip.T @ flip - np.eye(3)).max() <= 1e-12
