"""Two-qubit frame states, the singlet, local action, marginals."""

import numpy as np
import pytest

from quasibits import frame, hilbert, processes, two_qubit
from quasibits.errors import DimensionMismatch, NotPositive

Z = np.array([0.0, 0.0, 1.0])


def test_uniform_from_zero_params():
    p = two_qubit.state_from_params(np.zeros(3), np.zeros(3), np.zeros((3, 3)))
    assert np.abs(p - 1.0 / 16.0).max() <= 1e-15


def test_singlet_from_minus_identity():
    p = two_qubit.state_from_params(np.zeros(3), np.zeros(3), -np.eye(3))
    assert np.abs(p - two_qubit.singlet()).max() <= 1e-15


def test_product_state_factorizes():
    p = two_qubit.state_from_params(Z, Z, np.diag([0.0, 0.0, 1.0]))
    single = frame.state_from_bloch(Z)
    assert np.abs(p.reshape(4, 4) - np.outer(single, single)).max() <= 1e-12


def test_positive_correlation_identity_rejected():
    # T = +Identity would need eigenvalue -1/2 in the density matrix
    with pytest.raises(NotPositive):
        two_qubit.state_from_params(np.zeros(3), np.zeros(3), np.eye(3))


def test_params_roundtrip_special_states():
    for sa, sb, t in [
        (np.zeros(3), np.zeros(3), np.zeros((3, 3))),
        (np.zeros(3), np.zeros(3), -np.eye(3)),
        (Z, Z, np.diag([0.0, 0.0, 1.0])),
    ]:
        got_a, got_b, got_t = two_qubit.params_from_state(
            two_qubit.state_from_params(sa, sb, t)
        )
        assert np.abs(got_a - sa).max() <= 1e-12
        assert np.abs(got_b - sb).max() <= 1e-12
        assert np.abs(got_t - t).max() <= 1e-12


def test_params_roundtrip_oracle_states():
    # random valid states come from random density matrices, not from
    # rejection-sampling the parameter region
    rng = np.random.default_rng(1234)
    for _ in range(1000):
        rho = hilbert.random_density(4, rng)
        p = hilbert.frame_probs_from_density(rho)
        sa, sb, t = two_qubit.params_from_state(p)
        back = two_qubit.state_from_params(sa, sb, t)
        assert np.abs(back - p).max() <= 1e-12


def test_singlet_entries():
    p = two_qubit.singlet().reshape(4, 4)
    assert np.array_equal(np.diag(p), np.zeros(4))
    mask = ~np.eye(4, dtype=bool)
    assert np.abs(p[mask] - 1.0 / 12.0).max() <= 1e-15


def test_singlet_marginals_are_white_noise():
    p = two_qubit.singlet()
    assert np.abs(two_qubit.marginal_alice(p) - 0.25).max() <= 1e-15
    assert np.abs(two_qubit.marginal_bob(p) - 0.25).max() <= 1e-15


def test_singlet_readout_correlator():
    assert abs(two_qubit.bit_product_correlator(two_qubit.singlet()) + 1.0 / 3.0) <= 1e-15


def test_apply_local_identity():
    p = two_qubit.singlet()
    assert np.abs(two_qubit.apply_local(np.eye(4), np.eye(4), p) - p).max() == 0.0


def test_singlet_invariant_under_identical_rotations():
    rng = np.random.default_rng(7)
    p0 = two_qubit.singlet()
    for k in range(100):
        o = processes.random_orthogonal(rng, improper=k % 2 == 1)
        rot = processes.rotation_process(o)
        assert np.abs(two_qubit.apply_local(rot, rot, p0) - p0).max() <= 1e-12


def test_singlet_perfect_anticorrelation_under_eta():
    eta = processes.eta_measurement(Z)
    out = two_qubit.apply_local(eta, eta, two_qubit.singlet())
    assert out.shape == (4,)
    assert np.abs(out - (0.0, 0.5, 0.5, 0.0)).max() <= 1e-12


def test_rotated_singlet_stays_positive():
    rng = np.random.default_rng(13)
    p0 = two_qubit.singlet()
    for _ in range(50):
        rot_a = processes.rotation_process(processes.random_orthogonal(rng))
        rot_b = processes.rotation_process(processes.random_orthogonal(rng))
        out = two_qubit.apply_local(rot_a, rot_b, p0)
        assert out.min() >= -1e-12
        assert abs(out.sum() - 1.0) <= 1e-12


def test_no_signaling_of_local_action():
    rng = np.random.default_rng(19)
    for _ in range(100):
        rho = hilbert.random_density(4, rng)
        p = hilbert.frame_probs_from_density(rho)
        proc_a = processes.rotation_process(processes.random_orthogonal(rng))
        linear = rng.normal(scale=0.2, size=(3, 3))
        proc_b = processes.affine_process(linear)
        left = two_qubit.marginal_alice(two_qubit.apply_local(proc_a, proc_b, p))
        right = processes.apply_process(proc_a, two_qubit.marginal_alice(p))
        assert np.abs(left - right).max() <= 1e-12


def test_marginal_carries_local_bloch():
    rng = np.random.default_rng(31)
    sa = rng.normal(size=3)
    sa *= 0.6 / np.linalg.norm(sa)
    p = two_qubit.state_from_params(sa, np.zeros(3), np.zeros((3, 3)))
    assert np.abs(
        frame.bloch_from_state(two_qubit.marginal_alice(p)) - sa
    ).max() <= 1e-12


def test_apply_local_shape_error():
    with pytest.raises(DimensionMismatch):
        two_qubit.apply_local(np.eye(3), np.eye(4), two_qubit.singlet())


def test_validate_state_reports():
    good = two_qubit.validate_state(two_qubit.singlet())
    assert good.valid
    assert good.min_eigenvalue >= -1e-9
    bad = np.full(16, 1.0 / 16.0)
    bad[0] += 0.2
    bad[1] -= 0.2
    report = two_qubit.validate_state(bad)
    assert not report.valid
