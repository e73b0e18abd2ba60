"""Tetrahedron frame: outcome order, Bloch maps, validity layers."""

import numpy as np
import pytest

from quasibits import frame
from quasibits.errors import BlochOutOfBall, InvalidState

SQRT3 = np.sqrt(3.0)


def ball_grid(n_radii=10, n_dirs=100):
    # deterministic 1000-point Bloch ball grid: radii times a Fibonacci sphere
    k = np.arange(n_dirs)
    z = 1.0 - (2.0 * k + 1.0) / n_dirs
    phi = k * np.pi * (3.0 - np.sqrt(5.0))
    r = np.sqrt(1.0 - z * z)
    dirs = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    radii = np.linspace(0.1, 1.0, n_radii)
    return (radii[:, None, None] * dirs[None, :, :]).reshape(-1, 3)


def test_outcome_indexing():
    assert frame.outcome_index(1, 1) == 0
    assert frame.outcome_index(1, -1) == 1
    assert frame.outcome_index(-1, 1) == 2
    assert frame.outcome_index(-1, -1) == 3


@pytest.mark.parametrize(
    "a,aprime",
    [(1, 1), (1, -1), (-1, 1), (-1, -1)],
)
def test_tetra_vectors_components(a, aprime):
    vec = frame.tetra_vector(a, aprime)
    assert np.allclose(vec * SQRT3, (a, aprime, a * aprime), atol=1e-15)
    assert abs(np.linalg.norm(vec) - 1.0) <= 1e-15


def test_tetra_vectors_sum_to_zero():
    assert np.abs(frame.TETRA_VECTORS.sum(axis=0)).max() <= 1e-15


def test_tetra_gram_matrix():
    g = frame.TETRA_GRAM
    assert np.abs(np.diag(g) - 1.0).max() <= 1e-15
    off = g - np.eye(4)
    mask = ~np.eye(4, dtype=bool)
    assert np.abs(off[mask] + 1.0 / 3.0).max() <= 1e-15


def test_frame_completeness():
    # sum of outer products is 4/3 of the identity; this fixes the factor 3
    # in the Bloch recovery
    second_moment = frame.TETRA_VECTORS.T @ frame.TETRA_VECTORS
    assert np.allclose(second_moment, (4.0 / 3.0) * np.eye(3), atol=1e-15)


def test_state_from_bloch_z_axis():
    p = frame.state_from_bloch((0.0, 0.0, 1.0))
    assert np.allclose(
        p,
        (0.39433756729740643, 0.10566243270259354,
         0.10566243270259354, 0.39433756729740643),
        atol=1e-15,
    )


def test_maximally_mixed_is_uniform():
    assert np.array_equal(frame.state_from_bloch((0.0, 0.0, 0.0)), np.full(4, 0.25))


def test_bloch_roundtrip_on_ball_grid():
    for s in ball_grid():
        back = frame.bloch_from_state(frame.state_from_bloch(s))
        assert np.abs(back - s).max() <= 1e-12


def test_positivity_on_whole_ball():
    for s in ball_grid():
        p = frame.state_from_bloch(s)
        bound = 0.25 * (1.0 - np.linalg.norm(s))
        assert p.min() >= bound - 1e-12


def test_bit_averages_match_bloch():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        s = rng.normal(size=3)
        s *= rng.uniform() / np.linalg.norm(s)
        avg = frame.bit_averages(frame.state_from_bloch(s))
        assert abs(avg.mean_a - s[0] / SQRT3) <= 1e-12
        assert abs(avg.mean_aprime - s[1] / SQRT3) <= 1e-12
        assert abs(avg.mean_aaprime - s[2] / SQRT3) <= 1e-12


def test_bloch_out_of_ball():
    with pytest.raises(BlochOutOfBall):
        frame.state_from_bloch((0.0, 0.0, 1.01))
    # boundary itself is fine
    frame.state_from_bloch((1.0, 0.0, 0.0))


def test_simplex_vertex_is_not_a_state():
    # positive and normalized, but the recovered Bloch vector has norm 3;
    # entrywise positivity alone does not certify a qubit state
    vertex = np.array([1.0, 0.0, 0.0, 0.0])
    report = frame.validate_state(vertex)
    assert not report.valid
    assert abs(report.bloch_norm - 3.0) <= 1e-12
    with pytest.raises(InvalidState):
        frame.bloch_from_state(vertex)


def test_validate_state_report_fields():
    report = frame.validate_state(frame.state_from_bloch((0.3, -0.2, 0.4)))
    assert report.valid
    assert report.sum_error <= 1e-15
    assert report.min_entry > 0.0
    assert report.bloch_norm <= 1.0


def test_unnormalized_vector_rejected():
    with pytest.raises(InvalidState):
        frame.bloch_from_state(np.array([0.3, 0.3, 0.3, 0.3]))
