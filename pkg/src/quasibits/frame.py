"""Single-qubit states as probability vectors over two classical bits.

A qubit is represented by the joint distribution ``p(a, a')`` of two signed
bits ``a, a' in {+1, -1}``.  Each of the four outcomes is tagged with a unit
vector pointing at a vertex of a regular tetrahedron,

    n(a, a') = (a, a', a * a') / sqrt(3),

and a Bloch vector ``s`` maps to the distribution

    p(a, a') = (1 + s . n(a, a')) / 4.

The four tag vectors resolve the identity (sum of outer products is 4/3 the
identity) and sum to zero, which makes the map invertible:

    s = 3 * sum_a p(a) n_a.

Outcome order everywhere is ``(+1,+1), (+1,-1), (-1,+1), (-1,-1)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BlochOutOfBall, InvalidState

ATOL = 1e-12

# Signed bit pairs (a, a') in the canonical outcome order.
OUTCOME_BITS = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]])

# Integer rows (a, a', a*a'); dividing by sqrt(3) gives the tetrahedron vertices.
_BITS3 = np.column_stack([OUTCOME_BITS, OUTCOME_BITS[:, 0] * OUTCOME_BITS[:, 1]])

TETRA_VECTORS = _BITS3 / np.sqrt(3.0)

# Gram matrix built from integer products so the diagonal is exactly 1.0 and
# the off-diagonal entries are exactly -1/3.
TETRA_GRAM = (_BITS3 @ _BITS3.T) / 3.0


def outcome_index(a: int, aprime: int) -> int:
    """Return the canonical index of the outcome ``(a, a')``."""
    if a not in (1, -1) or aprime not in (1, -1):
        raise ValueError(f"bits must be +1 or -1, got ({a}, {aprime})")
    return 2 * (a < 0) + (aprime < 0)


def tetra_vector(a: int, aprime: int) -> np.ndarray:
    """Return the unit tag vector attached to the outcome ``(a, a')``."""
    return TETRA_VECTORS[outcome_index(a, aprime)].copy()


def state_from_bloch(s, *, atol: float = ATOL) -> np.ndarray:
    """Map a Bloch vector to its frame distribution.

    Parameters
    ----------
    s : array_like, shape (3,)
        Bloch vector; must lie in the closed unit ball.
    atol : float
        Slack allowed on the ball constraint.

    Returns
    -------
    numpy.ndarray, shape (4,)
        The distribution ``(1 + s . n_a) / 4`` in canonical outcome order.

    Raises
    ------
    BlochOutOfBall
        If ``|s| > 1 + atol``.
    """
    s = np.asarray(s, dtype=float)
    if s.shape != (3,):
        raise InvalidState(f"Bloch vector must have shape (3,), got {s.shape}")
    norm = float(np.linalg.norm(s))
    if norm > 1.0 + atol:
        raise BlochOutOfBall(f"Bloch vector norm {norm} exceeds 1")
    return 0.25 * (1.0 + TETRA_VECTORS @ s)


def _bloch(p: np.ndarray) -> np.ndarray:
    """Frame inversion without validation; for internal use on raw vectors."""
    return 3.0 * (np.asarray(p, dtype=float) @ TETRA_VECTORS)


def bloch_from_state(p, *, atol: float = ATOL) -> np.ndarray:
    """Recover the Bloch vector ``s = 3 * sum_a p(a) n_a`` of a valid state.

    Raises
    ------
    InvalidState
        If ``p`` fails :func:`validate_state`, e.g. the bare vertex
        distribution ``(1, 0, 0, 0)`` whose image has norm sqrt(3).
    """
    p = _as_state_array(p)
    report = validate_state(p, atol=atol)
    if not report.valid:
        raise InvalidState(f"not a valid frame state: {report}")
    return _bloch(p)


@dataclass(frozen=True)
class BitAverages:
    """First moments of the signed bits under a frame distribution."""

    mean_a: float
    mean_aprime: float
    mean_aaprime: float

    def as_array(self) -> np.ndarray:
        return np.array([self.mean_a, self.mean_aprime, self.mean_aaprime])


def bit_averages(p) -> BitAverages:
    """Return ``<a>, <a'>, <a a'>``; each equals the matching Bloch component over sqrt(3)."""
    p = _as_state_array(p)
    m = p @ _BITS3
    return BitAverages(float(m[0]), float(m[1]), float(m[2]))


@dataclass(frozen=True)
class StateReport:
    """Validation summary for a candidate frame distribution.

    ``valid`` requires the entries to sum to one and the recovered Bloch
    vector to sit inside the closed unit ball.  Any normalized 4-vector is
    exactly of frame form, so no separate residual check is needed; negative
    entries show up as ``bloch_norm > 1``.
    """

    sum_error: float
    min_entry: float
    bloch_norm: float
    valid: bool


def validate_state(p, *, atol: float = ATOL) -> StateReport:
    """Check normalization and ball membership of a candidate distribution."""
    p = _as_state_array(p)
    sum_error = float(abs(p.sum() - 1.0))
    norm = float(np.linalg.norm(_bloch(p)))
    valid = sum_error <= atol and norm <= 1.0 + atol
    return StateReport(sum_error, float(p.min()), norm, valid)


def _as_state_array(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (4,):
        raise InvalidState(f"frame state must have shape (4,), got {p.shape}")
    return p
