"""Hilbert-space oracle: density matrices, Born probabilities, unitary lifts.

Everything in this module works directly with complex matrices and the Born
rule, never with frame algebra, so its numbers can referee the stochastic
route.  The only shared ingredient is the list of tetrahedron directions,
which is a convention rather than a computation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import (
    BlochOutOfBall,
    InvalidDensity,
    InvalidState,
    NotHermitian,
    NotOrthogonal,
)
from .frame import TETRA_VECTORS

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
ID2 = np.eye(2, dtype=complex)
PAULIS = np.stack([PAULI_X, PAULI_Y, PAULI_Z])

HERMITIAN_TOL = 1e-9


def density_from_bloch(s) -> np.ndarray:
    """Qubit density matrix ``(I + s . sigma) / 2`` for ``|s| <= 1``."""
    s = np.asarray(s, dtype=float)
    norm = float(np.linalg.norm(s))
    if norm > 1.0 + 1e-12:
        raise BlochOutOfBall(f"Bloch vector norm {norm} exceeds 1")
    return 0.5 * (ID2 + np.einsum("i,ijk->jk", s, PAULIS))


def bloch_from_density(rho) -> np.ndarray:
    """Pauli expectation values ``tr(rho sigma_k)``."""
    rho = np.asarray(rho, dtype=complex)
    return np.real(np.einsum("ijk,kj->i", PAULIS, rho))


def density_from_params(bloch_a, bloch_b, corr) -> np.ndarray:
    """Two-qubit density matrix from local Bloch vectors and correlations.

    ``rho = (I + s_A . sigma x I + I x s_B . sigma + sum T_ij sigma_i x sigma_j) / 4``.
    """
    bloch_a = np.asarray(bloch_a, dtype=float)
    bloch_b = np.asarray(bloch_b, dtype=float)
    corr = np.asarray(corr, dtype=float)
    rho = np.eye(4, dtype=complex)
    for i in range(3):
        rho += bloch_a[i] * np.kron(PAULIS[i], ID2)
        rho += bloch_b[i] * np.kron(ID2, PAULIS[i])
        for j in range(3):
            rho += corr[i, j] * np.kron(PAULIS[i], PAULIS[j])
    return 0.25 * rho


def params_from_density(rho) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read ``(s_A, s_B, T)`` off a two-qubit density matrix by Pauli traces."""
    rho = np.asarray(rho, dtype=complex)
    bloch_a = np.real(
        [np.trace(rho @ np.kron(PAULIS[i], ID2)) for i in range(3)]
    )
    bloch_b = np.real(
        [np.trace(rho @ np.kron(ID2, PAULIS[j])) for j in range(3)]
    )
    corr = np.real(
        [
            [np.trace(rho @ np.kron(PAULIS[i], PAULIS[j])) for j in range(3)]
            for i in range(3)
        ]
    )
    return np.asarray(bloch_a), np.asarray(bloch_b), np.asarray(corr)


def singlet_density() -> np.ndarray:
    """Projector onto the two-qubit spin singlet."""
    return density_from_params(np.zeros(3), np.zeros(3), -np.eye(3))


def sic_effects() -> np.ndarray:
    """The four effects ``(I + n_a . sigma) / 4``; they sum to the identity."""
    return 0.25 * (ID2 + np.einsum("ai,ijk->ajk", TETRA_VECTORS, PAULIS))


def born(rho, effect) -> float:
    """Born probability ``tr(rho E)``."""
    return float(np.real(np.trace(np.asarray(rho, dtype=complex) @ effect)))


def frame_probs_from_density(rho) -> np.ndarray:
    """Oracle frame distribution of a one- or two-qubit density matrix.

    Single qubit: the four SIC-effect probabilities.  Two qubits: the sixteen
    product-effect probabilities in Alice-major order.
    """
    rho = np.asarray(rho, dtype=complex)
    effects = sic_effects()
    if rho.shape == (2, 2):
        return np.array([born(rho, e) for e in effects])
    if rho.shape == (4, 4):
        return np.array(
            [born(rho, np.kron(ea, eb)) for ea in effects for eb in effects]
        )
    raise InvalidState(f"expected a 2x2 or 4x4 density matrix, got {rho.shape}")


def born_eta(rho, axis) -> np.ndarray:
    """Projective readout probabilities ``tr(rho (I + b axis . sigma) / 2)``.

    Outcomes ordered ``b = +1, -1``; ``rho`` must pass
    :func:`validate_density`.
    """
    rho = _checked_density(rho, dim=2)
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    proj = np.einsum("i,ijk->jk", axis, PAULIS)
    return np.array(
        [born(rho, 0.5 * (ID2 + b * proj)) for b in (1.0, -1.0)]
    )


def born_sic(rho) -> np.ndarray:
    """Four-outcome SIC readout probabilities of a validated qubit density."""
    return frame_probs_from_density(_checked_density(rho, dim=2))


def _checked_density(rho, *, dim: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise InvalidDensity(f"expected a {dim}x{dim} density matrix, got {rho.shape}")
    report = validate_density(rho)
    if not report.valid:
        raise InvalidDensity(f"not a density matrix: {report}")
    return rho


def unitary_from_rotation(o) -> np.ndarray | None:
    """SU(2) element covering a proper rotation, or ``None`` if improper.

    For ``O`` with determinant +1 and axis-angle ``(u, theta)`` this returns
    ``cos(theta/2) I - i sin(theta/2) u . sigma``, which conjugates
    ``s . sigma`` into ``(O s) . sigma``.  Determinant -1 matrices have no
    such cover and are flagged with ``None``.
    """
    o = np.asarray(o, dtype=float)
    if o.shape != (3, 3) or float(np.abs(o.T @ o - np.eye(3)).max()) > 1e-9:
        raise NotOrthogonal("unitary lift needs an orthogonal 3x3 matrix")
    if np.linalg.det(o) < 0.0:
        return None
    rotvec = Rotation.from_matrix(o).as_rotvec()
    angle = float(np.linalg.norm(rotvec))
    if angle < 1e-15:
        return ID2.copy()
    axis = rotvec / angle
    return np.cos(angle / 2.0) * ID2 - 1.0j * np.sin(angle / 2.0) * np.einsum(
        "i,ijk->jk", axis, PAULIS
    )


def evolve_density(rho, u) -> np.ndarray:
    """Conjugate a density matrix by a unitary."""
    u = np.asarray(u, dtype=complex)
    return u @ np.asarray(rho, dtype=complex) @ u.conj().T


def jacobi_eigenvalues(h, *, tol: float = 1e-12, max_sweeps: int = 30) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi sweeps.

    Each pivot applies a unitary built from a phase factor and a real Jacobi
    angle, zeroing one off-diagonal pair; sweeps stop once the off-diagonal
    norm drops to ``tol`` or after ``max_sweeps``.  Returns the sorted real
    spectrum.

    Raises
    ------
    NotHermitian
        If the input deviates from its conjugate transpose by more than
        ``HERMITIAN_TOL``.
    """
    a = np.asarray(h, dtype=complex)
    n = a.shape[0]
    if a.ndim != 2 or a.shape != (n, n):
        raise NotHermitian(f"expected a square matrix, got shape {a.shape}")
    gap = float(np.abs(a - a.conj().T).max())
    if gap > HERMITIAN_TOL:
        raise NotHermitian(f"matrix deviates from Hermitian by {gap}")
    a = 0.5 * (a + a.conj().T)
    for _ in range(max_sweeps):
        off = float(np.sqrt((np.abs(a - np.diag(np.diag(a))) ** 2).sum()))
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = abs(a[p, q])
                if r < 1e-300:
                    continue
                phase = a[p, q] / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                j = np.eye(n, dtype=complex)
                j[p, p] = c
                j[p, q] = s
                j[q, p] = -s * np.conj(phase)
                j[q, q] = c * np.conj(phase)
                a = j.conj().T @ a @ j
    return np.sort(np.diag(a).real)


@dataclass(frozen=True)
class DensityReport:
    """Validation summary for a candidate density matrix."""

    trace_error: float
    hermiticity_error: float
    min_eigenvalue: float
    valid: bool


def validate_density(rho, *, atol: float = HERMITIAN_TOL) -> DensityReport:
    """Check trace, Hermiticity and positivity of a candidate density matrix."""
    rho = np.asarray(rho, dtype=complex)
    trace_error = float(abs(np.trace(rho) - 1.0))
    herm = float(np.abs(rho - rho.conj().T).max())
    if herm > atol:
        return DensityReport(trace_error, herm, float("nan"), False)
    min_eig = float(jacobi_eigenvalues(rho)[0])
    valid = trace_error <= atol and min_eig >= -atol
    return DensityReport(trace_error, herm, min_eig, valid)


def random_density(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a full-rank density matrix from a complex Wishart factor."""
    g = rng.normal(size=(dim, dim)) + 1.0j * rng.normal(size=(dim, dim))
    w = g @ g.conj().T
    return w / np.trace(w).real


def random_bloch(rng: np.random.Generator, *, radius: float = 1.0) -> np.ndarray:
    """Uniform draw from the Bloch ball of the given radius."""
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return radius * rng.uniform() ** (1.0 / 3.0) * v
