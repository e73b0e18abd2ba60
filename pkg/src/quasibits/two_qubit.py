"""Two-qubit frame states: joint distributions over two bit pairs.

A state is a 16-vector ``p(aa', bb')`` stored Alice-major, so entry
``4 * i + j`` pairs Alice outcome ``i`` with Bob outcome ``j`` in the
canonical single-qubit order.  The parameterization mirrors the Pauli one,

    p = (1 + s_A . n_a + s_B . n_b + n_a . T n_b) / 16,

with local Bloch vectors ``s_A, s_B`` and a 3x3 correlation matrix ``T``.
Inversion uses the frame constants 3, 3 and 9:

    s_A = 3 sum p n_a,   s_B = 3 sum p n_b,   T = 9 sum p outer(n_a, n_b).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidState, NotPositive
from .frame import ATOL, TETRA_GRAM, TETRA_VECTORS, _BITS3
from .frame import StateReport, validate_state as validate_single
from . import hilbert

# Eigenvalue slack when deciding whether parameters admit a density matrix.
POSITIVITY_TOL = 1e-9


def state_from_params(bloch_a, bloch_b, corr, *, check: bool = True) -> np.ndarray:
    """Assemble the 16-entry distribution from ``(s_A, s_B, T)``.

    With ``check=True`` the parameters are screened through the underlying
    density matrix; a spectrum dipping below ``-POSITIVITY_TOL`` raises
    :class:`NotPositive`.
    """
    bloch_a = np.asarray(bloch_a, dtype=float)
    bloch_b = np.asarray(bloch_b, dtype=float)
    corr = np.asarray(corr, dtype=float)
    if bloch_a.shape != (3,) or bloch_b.shape != (3,) or corr.shape != (3, 3):
        raise InvalidState("need two Bloch 3-vectors and a 3x3 correlation matrix")
    if check:
        spectrum = hilbert.jacobi_eigenvalues(
            hilbert.density_from_params(bloch_a, bloch_b, corr)
        )
        if spectrum[0] < -POSITIVITY_TOL:
            raise NotPositive(
                f"parameters admit no density matrix, min eigenvalue {spectrum[0]}"
            )
    table = (
        1.0
        + (TETRA_VECTORS @ bloch_a)[:, None]
        + (TETRA_VECTORS @ bloch_b)[None, :]
        + TETRA_VECTORS @ corr @ TETRA_VECTORS.T
    ) / 16.0
    return table.ravel()


def params_from_state(p) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Invert :func:`state_from_params`; returns ``(s_A, s_B, T)``."""
    table = _as_table(p)
    bloch_a = 3.0 * (table.sum(axis=1) @ TETRA_VECTORS)
    bloch_b = 3.0 * (table.sum(axis=0) @ TETRA_VECTORS)
    corr = 9.0 * TETRA_VECTORS.T @ table @ TETRA_VECTORS
    return bloch_a, bloch_b, corr


def singlet() -> np.ndarray:
    """Spin singlet distribution ``(1 - n_a . n_b) / 16``.

    Built from the integer Gram matrix so the sixteen entries are exactly
    1/12 for distinct outcome pairs and exactly 0.0 for matching pairs;
    sampling can then never report a matching pair.
    """
    return ((1.0 - TETRA_GRAM) / 16.0).ravel()


def apply_local(proc_a, proc_b, p) -> np.ndarray:
    """Act with one process on each side, ``p' = (S_A kron S_B) p``.

    Measurement matrices with fewer (or more) output rows are fine; the
    result is flattened Alice-major with shape ``n_out_a * n_out_b``.
    """
    proc_a = np.asarray(proc_a, dtype=float)
    proc_b = np.asarray(proc_b, dtype=float)
    if proc_a.ndim != 2 or proc_a.shape[1] != 4 or proc_b.ndim != 2 or proc_b.shape[1] != 4:
        raise DimensionMismatch("local processes must have four input columns")
    table = _as_table(p)
    return (proc_a @ table @ proc_b.T).ravel()


def marginal_alice(p) -> np.ndarray:
    """Alice's reduced 4-outcome distribution."""
    return _as_table(p).sum(axis=1)


def marginal_bob(p) -> np.ndarray:
    """Bob's reduced 4-outcome distribution."""
    return _as_table(p).sum(axis=0)


def bit_product_correlator(p) -> float:
    """Mean of ``(a a') * (b b')`` under the joint distribution.

    This is the correlator accessible to the direct readout; it equals
    ``T[2, 2] / 3`` and never exceeds 4/3 in magnitude.
    """
    table = _as_table(p)
    prod = _BITS3[:, 2].astype(float)
    return float(prod @ table @ prod)


@dataclass(frozen=True)
class PairReport:
    """Validation summary for a candidate two-qubit distribution."""

    sum_error: float
    min_entry: float
    min_eigenvalue: float
    marginal_a: StateReport
    marginal_b: StateReport
    valid: bool


def validate_state(p, *, atol: float = ATOL) -> PairReport:
    """Check normalization and positivity of the underlying density matrix."""
    table = _as_table(p)
    sum_error = float(abs(table.sum() - 1.0))
    rep_a = validate_single(table.sum(axis=1), atol=max(atol, 1e-9))
    rep_b = validate_single(table.sum(axis=0), atol=max(atol, 1e-9))
    spectrum = hilbert.jacobi_eigenvalues(
        hilbert.density_from_params(*params_from_state(p))
    )
    valid = sum_error <= atol and spectrum[0] >= -POSITIVITY_TOL
    return PairReport(
        sum_error=sum_error,
        min_entry=float(table.min()),
        min_eigenvalue=float(spectrum[0]),
        marginal_a=rep_a,
        marginal_b=rep_b,
        valid=valid,
    )


def _as_table(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape == (16,):
        return p.reshape(4, 4)
    if p.shape == (4, 4):
        return p
    raise InvalidState(f"two-qubit state must have 16 entries, got shape {p.shape}")
