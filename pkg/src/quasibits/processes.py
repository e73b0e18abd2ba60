"""Quasi-stochastic processes on frame states.

A process is a real matrix ``S`` acting on frame distributions by ``p' = S p``.
Columns sum to one so normalization survives, but entries may be negative;
that signed excess is what distinguishes qubit dynamics from a classical
stochastic update, and :func:`negativity` quantifies it.

Processes built here:

* :func:`rotation_process`       unitary dynamics, one orthogonal 3x3 matrix
* :func:`affine_process`         general qubit channel (linear map plus shift)
* :func:`eta_measurement`        two-outcome projective readout along an axis
* :func:`direct_readout`         identity readout of the bit pair itself
* :func:`general_measurement`    tagged multi-bit output distributions
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import (
    BallNotPreserved,
    DimensionMismatch,
    InvalidProcess,
    NormalizationViolated,
    NotARotation,
    NotOrthogonal,
    NotUnitAxis,
)
from .frame import ATOL, TETRA_VECTORS

# Tolerance for deciding that a reconstructed matrix is a genuine rotation.
ROTATION_TOL = 1e-9


def check_columns(s_matrix, *, atol: float = ATOL) -> np.ndarray:
    """Validate column sums of a process matrix; return it as a float array."""
    s_matrix = np.asarray(s_matrix, dtype=float)
    if s_matrix.ndim != 2 or s_matrix.shape[1] != 4:
        raise InvalidProcess(f"process must map 4 outcomes, got shape {s_matrix.shape}")
    err = float(np.abs(s_matrix.sum(axis=0) - 1.0).max())
    if err > atol:
        raise InvalidProcess(f"column sums deviate from 1 by {err}")
    return s_matrix


def check_orthogonal(o, *, tol: float = ROTATION_TOL) -> np.ndarray:
    """Validate a 3x3 orthogonal matrix, returning it as a float array."""
    o = np.asarray(o, dtype=float)
    if o.shape != (3, 3):
        raise NotOrthogonal(f"expected a 3x3 matrix, got shape {o.shape}")
    gap = float(np.abs(o.T @ o - np.eye(3)).max())
    if gap > tol:
        raise NotOrthogonal(f"matrix is not orthogonal, O^T O deviates by {gap}")
    return o


def rotation_process(o) -> np.ndarray:
    """Return the 4x4 process for the orthogonal Bloch map ``O``.

    ``S[b, a] = (1 + 3 n_b . O n_a) / 4``; quasi-bistochastic (rows and
    columns both sum to one) and exactly inverted by the transpose map.
    """
    o = check_orthogonal(o, tol=ROTATION_TOL)
    return 0.25 * (1.0 + 3.0 * TETRA_VECTORS @ o @ TETRA_VECTORS.T)


def _fibonacci_sphere(n: int) -> np.ndarray:
    k = np.arange(n)
    z = 1.0 - (2.0 * k + 1.0) / n
    phi = k * np.pi * (3.0 - np.sqrt(5.0))
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


_BALL_DIRECTIONS = _fibonacci_sphere(1000)


def affine_process(linear, shift=(0.0, 0.0, 0.0)) -> np.ndarray:
    """Return the process for the Bloch-ball map ``s -> L s + shift``.

    ``S[b, a] = (1 + 3 n_b . L n_a + n_b . shift) / 4``.  Column sums are one
    for any ``L`` and ``shift`` because the tag vectors sum to zero.  The map
    must keep the closed unit ball inside itself; that is screened on a fixed
    1000-direction sample of the sphere, not proved, and complete positivity
    is not checked at all.
    """
    linear = np.asarray(linear, dtype=float)
    shift = np.asarray(shift, dtype=float)
    if linear.shape != (3, 3) or shift.shape != (3,):
        raise InvalidProcess("affine process needs a 3x3 linear part and a 3-vector shift")
    radii = np.linalg.norm(_BALL_DIRECTIONS @ linear.T + shift, axis=1)
    if radii.max() > 1.0 + 1e-9:
        raise BallNotPreserved(
            f"affine map pushes a unit direction to radius {radii.max():.6f}"
        )
    return 0.25 * (
        1.0
        + 3.0 * TETRA_VECTORS @ linear @ TETRA_VECTORS.T
        + (TETRA_VECTORS @ shift)[:, None]
    )


def eta_measurement(axis) -> np.ndarray:
    """Two-outcome readout along a unit axis, rows ordered ``b = +1, -1``.

    ``eta[b, a] = (1 + 3 b axis . n_a) / 2`` reproduces the quantum outcome
    law ``p(b) = (1 + b axis . s) / 2`` on every frame state.  Entries dip
    below zero for every axis, see :func:`negativity`.
    """
    axis = np.asarray(axis, dtype=float)
    if axis.shape != (3,) or abs(float(np.linalg.norm(axis)) - 1.0) > ATOL:
        raise NotUnitAxis(f"measurement axis must be a unit 3-vector, got {axis!r}")
    overlap = 3.0 * (TETRA_VECTORS @ axis)
    return 0.5 * np.stack([1.0 + overlap, 1.0 - overlap])


def direct_readout() -> np.ndarray:
    """Identity process reporting the bit pair ``(a, a')`` itself."""
    return np.eye(4)


def general_measurement(m_vectors, w_vectors) -> np.ndarray:
    """Build a tagged measurement ``M[b, a] = (1 + m_b . w_a) / 2**n_bits``.

    Parameters
    ----------
    m_vectors : array_like, shape (2**n_bits, d)
        One tag per output bit string; must sum to the zero vector so that
        columns sum to one.
    w_vectors : array_like, shape (4, d)
        One tag per input outcome, same tag dimension ``d``.
    """
    m_vectors = np.atleast_2d(np.asarray(m_vectors, dtype=float))
    w_vectors = np.atleast_2d(np.asarray(w_vectors, dtype=float))
    n_out = m_vectors.shape[0]
    n_bits = int(n_out).bit_length() - 1
    if 2**n_bits != n_out or n_bits < 1:
        raise InvalidProcess(f"number of outputs must be a power of two >= 2, got {n_out}")
    if w_vectors.shape != (4, m_vectors.shape[1]):
        raise InvalidProcess(
            f"w tags must have shape (4, {m_vectors.shape[1]}), got {w_vectors.shape}"
        )
    drift = float(np.abs(m_vectors.sum(axis=0)).max())
    if drift > ATOL:
        raise NormalizationViolated(f"output tags must sum to zero, off by {drift}")
    return (1.0 + m_vectors @ w_vectors.T) / float(n_out)


def general_output(m_vectors, w_vectors, bloch) -> np.ndarray:
    """Closed-form output distribution of :func:`general_measurement`.

    ``p(b) = (1 + (m_b . w_bar) / 4 + (m_b . W s) / 4) / 2**n_bits`` with
    ``w_bar = sum_a w_a`` and ``W = sum_a outer(w_a, n_a)``.  Both correction
    terms carry the same 1/4; this matches the explicit contraction
    ``M @ state_from_bloch(s)`` to machine precision.
    """
    m_vectors = np.atleast_2d(np.asarray(m_vectors, dtype=float))
    w_vectors = np.atleast_2d(np.asarray(w_vectors, dtype=float))
    bloch = np.asarray(bloch, dtype=float)
    w_bar = w_vectors.sum(axis=0)
    w_frame = w_vectors.T @ TETRA_VECTORS
    correction = 0.25 * (m_vectors @ w_bar + m_vectors @ (w_frame @ bloch))
    return (1.0 + correction) / float(m_vectors.shape[0])


def apply_process(s_matrix, p) -> np.ndarray:
    """Apply a process to a frame distribution; shapes are checked."""
    s_matrix = check_columns(s_matrix)
    p = np.asarray(p, dtype=float)
    if p.shape != (4,):
        raise DimensionMismatch(f"state must have shape (4,), got {p.shape}")
    return s_matrix @ p


def compose(second, first) -> np.ndarray:
    """Return the process running ``first`` then ``second``."""
    second = np.asarray(second, dtype=float)
    first = check_columns(first)
    if second.shape[1] != first.shape[0]:
        raise DimensionMismatch(
            f"cannot chain shapes {first.shape} -> {second.shape}"
        )
    return second @ first


def rotation_from_process(s_matrix, *, tol: float = ROTATION_TOL) -> np.ndarray:
    """Recover the orthogonal matrix encoded in a rotation process.

    Uses the frame identity to invert the embedding,
    ``O = (3/4) sum_{b,a} S[b, a] outer(n_b, n_a)``, then demands both
    orthogonality and an exact rebuild within ``tol``.

    Raises
    ------
    NotARotation
        If the candidate fails orthogonality or does not reproduce ``S``.
    """
    s_matrix = check_columns(s_matrix)
    if s_matrix.shape != (4, 4):
        raise NotARotation(f"rotation processes are 4x4, got {s_matrix.shape}")
    o = 0.75 * TETRA_VECTORS.T @ s_matrix @ TETRA_VECTORS
    gap = float(np.abs(o.T @ o - np.eye(3)).max())
    if gap > tol:
        raise NotARotation(f"reconstructed matrix is not orthogonal, off by {gap}")
    rebuild = float(np.abs(rotation_process(o) - s_matrix).max())
    if rebuild > tol:
        raise NotARotation(f"matrix is not of rotation form, rebuild error {rebuild}")
    return o


def invert_rotation(s_matrix) -> np.ndarray:
    """Invert a rotation process via the transpose of its Bloch map."""
    return rotation_process(rotation_from_process(s_matrix).T)


@dataclass(frozen=True)
class NegativityReport:
    """Negative mass carried by a process matrix.

    ``column_masses[a]`` sums the magnitudes of negative entries in column
    ``a``; ``total`` sums over all columns and ``max_column`` takes the worst
    one.  All zero exactly when the process is classically stochastic.
    """

    total: float
    max_column: float
    column_masses: tuple[float, ...]


def negativity(s_matrix) -> NegativityReport:
    """Measure how far a process is from a stochastic matrix."""
    s_matrix = np.asarray(s_matrix, dtype=float)
    masses = np.where(s_matrix < 0.0, -s_matrix, 0.0).sum(axis=0)
    return NegativityReport(
        total=float(masses.sum()),
        max_column=float(masses.max()),
        column_masses=tuple(float(m) for m in masses),
    )


def axis_angle_rotation(axis, angle: float) -> np.ndarray:
    """Proper rotation by ``angle`` about a (not necessarily unit) axis."""
    return Rotation.from_rotvec(_unit_axis(axis) * float(angle)).as_matrix()


def random_orthogonal(rng: np.random.Generator, *, improper: bool = False) -> np.ndarray:
    """Draw an orthogonal matrix from a uniform axis and uniform angle.

    With ``improper=True`` the rotation is composed with the point inversion,
    covering the determinant -1 component.
    """
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    o = axis_angle_rotation(axis, rng.uniform(0.0, np.pi))
    return -o if improper else o


def _unit_axis(axis) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    if axis.shape != (3,):
        raise InvalidProcess(f"axis must have shape (3,), got {axis.shape}")
    norm = float(np.linalg.norm(axis))
    if norm < 1e-15:
        raise InvalidProcess("axis must be nonzero")
    return axis / norm
