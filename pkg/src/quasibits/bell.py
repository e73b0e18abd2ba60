"""Bell-CHSH analysis on rotated singlet states.

The scenario: Alice and Bob share the singlet, each picks one of two local
rotations and then reads out along a shared axis (default z).  The rotated
states, the resulting behavior table, CHSH values over all sign variants,
an optimizer over the twelve rotation parameters, the explicit joint
distribution for the direct readout (which always admits one), membership
in the local polytope, and seeded sampling all live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.optimize import linprog
from scipy.spatial.transform import Rotation

from .errors import (
    DegenerateDenominator,
    InvalidBehavior,
    InvalidSettings,
    NegativeDistribution,
    QuasibitsError,
    SignalingDetected,
)
from .frame import TETRA_VECTORS
from .processes import eta_measurement, random_orthogonal, rotation_process
from .two_qubit import apply_local, singlet

Z_AXIS = np.array([0.0, 0.0, 1.0])
TSIRELSON_BOUND = 2.0 * np.sqrt(2.0)
LOCAL_BOUND_TOL = 1e-9

# The eight sign patterns with product -1: one or three minus signs spread
# over (E11, E12, E21, E22).  The canonical CHSH combination is the first.
SIGN_VARIANTS = np.array(
    [s for s in product((1, -1), repeat=4) if s[0] * s[1] * s[2] * s[3] == -1]
)


def _checked_rotation(name: str, o) -> np.ndarray:
    o = np.asarray(o, dtype=float)
    if o.shape != (3, 3):
        raise InvalidSettings(f"{name} must be a 3x3 matrix, got shape {o.shape}")
    gap = float(np.abs(o.T @ o - np.eye(3)).max())
    if gap > 1e-9:
        raise InvalidSettings(f"{name} is not orthogonal, O^T O off by {gap}")
    return o


@dataclass(frozen=True, eq=False)
class ChshSettings:
    """Two local rotations per side plus the shared readout axis."""

    alice_1: np.ndarray
    alice_2: np.ndarray
    bob_1: np.ndarray
    bob_2: np.ndarray
    axis: np.ndarray = None

    def __post_init__(self):
        for name in ("alice_1", "alice_2", "bob_1", "bob_2"):
            object.__setattr__(self, name, _checked_rotation(name, getattr(self, name)))
        axis = Z_AXIS if self.axis is None else np.asarray(self.axis, dtype=float)
        if axis.shape != (3,):
            raise InvalidSettings(f"axis must be a 3-vector, got shape {axis.shape}")
        norm = float(np.linalg.norm(axis))
        if norm < 1e-15:
            raise InvalidSettings("axis must be nonzero")
        object.__setattr__(self, "axis", axis / norm)

    def rotations(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return self.alice_1, self.alice_2, self.bob_1, self.bob_2

    def measured_axes(self) -> tuple[np.ndarray, np.ndarray]:
        """Effective readout directions once the rotations act on the state.

        Rotating a state by ``O`` and then reading out along ``axis`` is the
        same experiment as reading the unrotated state along ``O^T axis``, so
        the returned directions are ``u_i = O_Ai^T axis``, ``v_j = O_Bj^T axis``.
        """
        u = np.stack([self.alice_1.T @ self.axis, self.alice_2.T @ self.axis])
        v = np.stack([self.bob_1.T @ self.axis, self.bob_2.T @ self.axis])
        return u, v

    @classmethod
    def from_rotvecs(cls, rotvecs, axis=None) -> "ChshSettings":
        """Build proper-rotation settings from 12 axis-angle parameters."""
        rotvecs = np.asarray(rotvecs, dtype=float).reshape(4, 3)
        mats = Rotation.from_rotvec(rotvecs).as_matrix()
        return cls(mats[0], mats[1], mats[2], mats[3], axis=axis)

    def to_rotvecs(self) -> np.ndarray:
        """Flat 12-vector of axis-angle parameters; improper rotations have none."""
        for name, o in zip(("alice_1", "alice_2", "bob_1", "bob_2"), self.rotations()):
            if np.linalg.det(o) < 0.0:
                raise InvalidSettings(f"{name} is improper, no axis-angle form")
        return Rotation.from_matrix(np.stack(self.rotations())).as_rotvec().ravel()


def rotated_states(settings: ChshSettings) -> np.ndarray:
    """The four states ``p0_ij``, shape (2, 2, 16), by local action on the singlet."""
    p0 = singlet()
    alice = [rotation_process(settings.alice_1), rotation_process(settings.alice_2)]
    bob = [rotation_process(settings.bob_1), rotation_process(settings.bob_2)]
    return np.array([[apply_local(sa, sb, p0) for sb in bob] for sa in alice])


@dataclass(frozen=True, eq=False)
class Behavior:
    """Conditional outcome distributions ``q[i, j, a, b]``.

    Settings indices ``i, j`` pick the rotations; outcome index 0 stands for
    the bit +1 and index 1 for -1.  Construct through :meth:`from_table`,
    which enforces normalization, near-positivity and no-signaling.
    """

    table: np.ndarray

    @classmethod
    def from_table(cls, q, *, atol: float = 1e-12) -> "Behavior":
        q = np.asarray(q, dtype=float)
        if q.shape != (2, 2, 2, 2):
            raise InvalidBehavior(f"behavior table must be (2,2,2,2), got {q.shape}")
        norm_gap = float(np.abs(q.sum(axis=(2, 3)) - 1.0).max())
        if norm_gap > atol:
            raise InvalidBehavior(f"setting distributions sum off from 1 by {norm_gap}")
        if float(q.min()) < -atol:
            raise InvalidBehavior(f"entry below zero: {float(q.min())}")
        b = cls(q)
        drift = b.signaling_residual()
        if drift > atol:
            raise SignalingDetected(f"marginals depend on the far setting by {drift}")
        return b

    def correlators(self) -> np.ndarray:
        """Matrix of ``E_ij = <ab>`` under each setting pair."""
        q = self.table
        return q[..., 0, 0] - q[..., 0, 1] - q[..., 1, 0] + q[..., 1, 1]

    def signaling_residual(self) -> float:
        """Largest dependence of one side's marginal on the far side's setting."""
        alice = self.table.sum(axis=3)
        bob = self.table.sum(axis=2)
        return float(
            max(
                np.abs(alice[:, 0, :] - alice[:, 1, :]).max(),
                np.abs(bob[0, :, :] - bob[1, :, :]).max(),
            )
        )


def eta_behavior(settings: ChshSettings) -> Behavior:
    """Behavior of axis readouts on the rotated states, by full contraction.

    ``q_ij(ab) = sum eta(a|.) eta(b|.) p0_ij(., .)`` summed over all sixteen
    outcome pairs; no closed form is assumed here.
    """
    eta = eta_measurement(settings.axis)
    states = rotated_states(settings)
    q = np.einsum("ax,by,ijxy->ijab", eta, eta, states.reshape(2, 2, 4, 4))
    return Behavior.from_table(q)


@dataclass(frozen=True, eq=False)
class ChshResult:
    """Correlators with the canonical CHSH combination and the variant sweep."""

    correlators: np.ndarray
    value: float
    max_variant: float
    best_signs: tuple[int, int, int, int]


def chsh_value(behavior) -> ChshResult:
    """Canonical CHSH combination and the maximum over all eight sign variants.

    Accepts a :class:`Behavior`, a raw behavior table, or a 2x2 correlator
    matrix (useful for sampled estimates).
    """
    e = _as_correlators(behavior)
    flat = e.ravel()
    values = SIGN_VARIANTS @ flat
    best = int(np.argmax(values))
    return ChshResult(
        correlators=e,
        value=float(flat[0] + flat[1] + flat[2] - flat[3]),
        max_variant=float(values[best]),
        best_signs=tuple(int(s) for s in SIGN_VARIANTS[best]),
    )


def _as_correlators(behavior) -> np.ndarray:
    if isinstance(behavior, Behavior):
        return behavior.correlators()
    arr = np.asarray(behavior, dtype=float)
    if arr.shape == (2, 2):
        if float(np.abs(arr).max()) > 1.0 + 1e-12:
            raise InvalidBehavior("correlators must lie in [-1, 1]")
        return arr
    return Behavior.from_table(arr).correlators()


def tsirelson_settings() -> ChshSettings:
    """Canonical maximally violating settings, all rotations about y.

    Alice's effective readout axes come out as z and x, Bob's as
    -(z+x)/sqrt(2) and -(z-x)/sqrt(2); every correlator has magnitude
    1/sqrt(2) and the canonical combination reaches 2 sqrt(2).
    """
    y = np.array([0.0, 1.0, 0.0])

    def rot(angle: float) -> np.ndarray:
        return Rotation.from_rotvec(y * angle).as_matrix()

    return ChshSettings(
        alice_1=rot(0.0),
        alice_2=rot(-np.pi / 2.0),
        bob_1=rot(3.0 * np.pi / 4.0),
        bob_2=rot(5.0 * np.pi / 4.0),
    )


@dataclass(frozen=True, eq=False)
class OptimizeResult:
    """Outcome of a CHSH search: best settings found and their value."""

    settings: ChshSettings
    value: float
    evaluations: int


def _variant_envelope(rotvecs: np.ndarray, axis: np.ndarray) -> float:
    """Fast objective: max variant from effective axes, no behavior assembly."""
    dirs = Rotation.from_rotvec(rotvecs.reshape(4, 3)).apply(axis, inverse=True)
    e = -np.array(
        [
            [dirs[0] @ dirs[2], dirs[0] @ dirs[3]],
            [dirs[1] @ dirs[2], dirs[1] @ dirs[3]],
        ]
    )
    return float((SIGN_VARIANTS @ e.ravel()).max())


def optimize_chsh(
    initial: ChshSettings,
    method: str = "coordinate-ascent",
    *,
    seed: int = 0,
    max_rounds: int = 40,
    mirror: bool = False,
) -> OptimizeResult:
    """Search the twelve axis-angle parameters for the largest CHSH variant.

    Both methods do cyclic one-parameter line searches; ``grid`` refines a
    nested lattice of candidate offsets while ``coordinate-ascent`` follows a
    coarse probe with golden-section narrowing.  Stalled sweeps trigger a
    seeded random restart around the best point so far, so runs are
    deterministic for a fixed ``seed``.  The reported value is recomputed
    through the full behavior contraction at the end.

    ``mirror=True`` is an exploratory mode forcing Bob's rotations to copy
    Alice's; no optimality claim is attached to it.
    """
    if method not in ("grid", "coordinate-ascent"):
        raise ValueError(f"unknown method {method!r}")
    axis = initial.axis
    x = initial.to_rotvecs()
    if mirror:
        x = x[:6]

    def expand(params: np.ndarray) -> np.ndarray:
        return np.concatenate([params, params]) if mirror else params

    evaluations = 0

    def objective(params: np.ndarray) -> float:
        nonlocal evaluations
        evaluations += 1
        return _variant_envelope(expand(params), axis)

    rng = np.random.default_rng(seed)
    best_x = x.copy()
    best_value = objective(best_x)
    current = best_x.copy()
    current_value = best_value
    target = TSIRELSON_BOUND - 1e-9

    for _ in range(max_rounds if best_value < target else 0):
        improved = False
        sweep_start = current.copy()
        for k in range(current.size):
            if method == "grid":
                moved, current_value = _grid_line(objective, current, k, current_value)
            else:
                moved, current_value = _golden_line(objective, current, k, current_value)
            improved = improved or moved
        # Cyclic sweeps zigzag on curved ridges; a line search along the net
        # sweep displacement (Powell's acceleration) restores fast progress.
        moved, current_value = _direction_line(
            objective, current, current - sweep_start, current_value
        )
        improved = improved or moved
        if current_value > best_value:
            best_value = current_value
            best_x = current.copy()
        if best_value >= target:
            break
        if not improved:
            # Flat ridge (the identity settings sit on one): restart near the
            # best point with a seeded kick and keep searching.
            current = best_x + rng.normal(scale=0.6, size=best_x.size)
            current_value = objective(current)

    settings = ChshSettings.from_rotvecs(expand(best_x), axis=axis)
    final = chsh_value(eta_behavior(settings)).max_variant
    return OptimizeResult(settings=settings, value=final, evaluations=evaluations)


def _grid_line(objective, x, k, current_value, levels=3, points=13, span=np.pi):
    """Coarse-to-fine lattice search on coordinate ``k`` of ``x`` in place."""
    moved = False
    width = span
    for _ in range(levels):
        base = x[k]
        offsets = np.linspace(-width, width, points)
        best_local = current_value
        best_offset = 0.0
        for off in offsets:
            if off == 0.0:
                continue
            x[k] = base + off
            val = objective(x)
            if val > best_local + 1e-15:
                best_local = val
                best_offset = off
        x[k] = base + best_offset
        current_value = best_local
        moved = moved or best_offset != 0.0
        width /= points - 1
    return moved, current_value


def _direction_line(objective, x, direction, current_value, probes=17, tol=1e-10):
    """Golden-section search along ``direction`` from ``x`` in place."""
    norm = float(np.linalg.norm(direction))
    if norm < 1e-14:
        return False, current_value
    unit = direction / norm
    base = x.copy()
    offsets = np.linspace(-2.0 * norm, 2.0 * norm, probes)
    values = []
    for off in offsets:
        x[:] = base + off * unit
        values.append(objective(x))
    idx = int(np.argmax(values))
    lo = offsets[max(idx - 1, 0)]
    hi = offsets[min(idx + 1, probes - 1)]
    ratio = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - ratio * (b - a)
    d = a + ratio * (b - a)
    x[:] = base + c * unit
    fc = objective(x)
    x[:] = base + d * unit
    fd = objective(x)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - ratio * (b - a)
            x[:] = base + c * unit
            fc = objective(x)
        else:
            a, c, fc = c, d, fd
            d = a + ratio * (b - a)
            x[:] = base + d * unit
            fd = objective(x)
    best_off = c if fc >= fd else d
    best_val = max(fc, fd)
    if best_val <= current_value + 1e-15:
        x[:] = base
        return False, current_value
    x[:] = base + best_off * unit
    return True, best_val


def _golden_line(objective, x, k, current_value, probes=9, span=np.pi, tol=1e-10):
    """Probe coordinate ``k`` coarsely, then narrow with golden sections.

    The bracket around the best probe is narrowed even when that probe is the
    base point itself; sub-probe-width improvements live there.
    """
    base = x[k]
    offsets = np.linspace(-span, span, probes)
    values = []
    for off in offsets:
        x[k] = base + off
        values.append(objective(x))
    idx = int(np.argmax(values))
    lo = offsets[max(idx - 1, 0)]
    hi = offsets[min(idx + 1, probes - 1)]
    ratio = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - ratio * (b - a)
    d = a + ratio * (b - a)
    x[k] = base + c
    fc = objective(x)
    x[k] = base + d
    fd = objective(x)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - ratio * (b - a)
            x[k] = base + c
            fc = objective(x)
        else:
            a, c, fc = c, d, fd
            d = a + ratio * (b - a)
            x[k] = base + d
            fd = objective(x)
    best_off = c if fc >= fd else d
    best_val = max(fc, fd)
    if best_val <= current_value + 1e-15:
        x[k] = base
        return False, current_value
    x[k] = base + best_off
    return True, best_val


@dataclass(frozen=True, eq=False)
class FineJoint:
    """Joint distribution over all four readout outcomes at once.

    ``joint`` is the flat 256-vector over ``(a1, a2, b1, b2)`` outcome
    indices in C order; diagnostics record how well its pairwise marginals
    reproduce the four rotated states.
    """

    joint: np.ndarray
    min_entry: float
    total: float
    max_marginal_residual: float

    def table(self) -> np.ndarray:
        return self.joint.reshape(4, 4, 4, 4)


def fine_joint_readout(settings: ChshSettings) -> FineJoint:
    """Explicit local model for direct readouts of the rotated states.

    Built as a product of the two Alice-indexed factors divided by their
    common Bob-pair marginal,

        joint(a1, a2, b1, b2) = f1(a1, b1, b2) f2(a2, b1, b2) / den(b1, b2),

    where ``f_i(a, b1, b2) = (1 - u_a . v_b1)(1 - u_a . v_b2) / 64`` uses the
    effectively rotated tetrahedron vectors ``u_a = O_Ai^T n_a`` of side A
    setting ``i`` (transposes because the rotations act on the state), and
    ``den`` comes from marginalizing ``f1`` over ``a1`` rather than from any
    closed form.  The denominator is provably at least 1/24.
    """
    rn_a1 = TETRA_VECTORS @ settings.alice_1
    rn_a2 = TETRA_VECTORS @ settings.alice_2
    rn_b1 = TETRA_VECTORS @ settings.bob_1
    rn_b2 = TETRA_VECTORS @ settings.bob_2

    def factor(rn_a):
        g1 = 1.0 - rn_a @ rn_b1.T
        g2 = 1.0 - rn_a @ rn_b2.T
        return g1[:, :, None] * g2[:, None, :] / 64.0

    f1 = factor(rn_a1)
    f2 = factor(rn_a2)
    den = f1.sum(axis=0)
    if float(den.min()) <= 1e-15:
        raise DegenerateDenominator(
            f"Bob-pair marginal hit {float(den.min())}, below the 1/24 floor"
        )
    joint = f1[:, None, :, :] * f2[None, :, :, :] / den[None, None, :, :]

    states = rotated_states(settings)
    residual = 0.0
    marginals = {
        (0, 0): joint.sum(axis=(1, 3)),
        (0, 1): joint.sum(axis=(1, 2)),
        (1, 0): joint.sum(axis=(0, 3)),
        (1, 1): joint.sum(axis=(0, 2)),
    }
    for (i, j), marg in marginals.items():
        residual = max(residual, float(np.abs(marg.ravel() - states[i, j]).max()))
    flat = joint.ravel()
    return FineJoint(
        joint=flat,
        min_entry=float(flat.min()),
        total=float(flat.sum()),
        max_marginal_residual=residual,
    )


# Deterministic local strategies: each side answers each setting with a fixed
# bit.  Strategy k is the sign choice (ea1, ea2, eb1, eb2).
def deterministic_strategies() -> np.ndarray:
    """All sixteen deterministic behavior tables, shape (16, 2, 2, 2, 2)."""
    tables = np.zeros((16, 2, 2, 2, 2))
    for k, (ea1, ea2, eb1, eb2) in enumerate(product((0, 1), repeat=4)):
        a_idx = (ea1, ea2)
        b_idx = (eb1, eb2)
        for i in range(2):
            for j in range(2):
                tables[k, i, j, a_idx[i], b_idx[j]] = 1.0
    return tables


@dataclass(frozen=True, eq=False)
class LhvVerdict:
    """Local-model verdict for a behavior.

    Non-local: ``witness_signs``/``witness_value`` name the violated CHSH
    variant.  Local: ``weights`` mixes the sixteen deterministic strategies
    to reproduce the behavior, with ``residual`` the worst table mismatch.
    """

    is_local: bool
    max_variant: float
    witness_signs: tuple[int, int, int, int] | None = None
    witness_value: float | None = None
    weights: np.ndarray | None = None
    residual: float | None = None


def lhv_membership(behavior) -> LhvVerdict:
    """Decide membership in the local polytope.

    The cutoff follows the two-setting/two-outcome equivalence: a
    no-signaling behavior is local exactly when every CHSH variant stays at
    or below 2.  For local behaviors an explicit strategy mixture is found by
    linear-programming feasibility and verified to residual 1e-9.
    """
    if not isinstance(behavior, Behavior):
        behavior = Behavior.from_table(behavior)
    result = chsh_value(behavior)
    if result.max_variant > 2.0 + LOCAL_BOUND_TOL:
        return LhvVerdict(
            is_local=False,
            max_variant=result.max_variant,
            witness_signs=result.best_signs,
            witness_value=result.max_variant,
        )
    vertices = deterministic_strategies().reshape(16, 16).T
    res = linprog(
        c=np.zeros(16),
        A_eq=vertices,
        b_eq=behavior.table.ravel(),
        bounds=[(0.0, None)] * 16,
        method="highs",
    )
    if not res.success:
        raise QuasibitsError(
            "no strategy mixture found for a behavior inside the local polytope"
        )
    weights = res.x
    residual = float(np.abs(vertices @ weights - behavior.table.ravel()).max())
    if residual > 1e-9:
        raise QuasibitsError(f"strategy mixture residual {residual} exceeds 1e-9")
    return LhvVerdict(
        is_local=True,
        max_variant=result.max_variant,
        weights=weights,
        residual=residual,
    )


def sample_outcomes(distribution, n: int, seed) -> np.ndarray:
    """Draw ``n`` outcomes by inverse-CDF lookup; returns per-cell counts.

    Cells with exactly zero probability can never be selected.  Entries below
    ``-1e-12`` raise :class:`NegativeDistribution`; smaller negative dust is
    clipped before building the CDF.
    """
    d = np.asarray(distribution, dtype=float).ravel()
    if n < 1:
        raise ValueError("need at least one sample")
    if float(d.min()) < -1e-12:
        raise NegativeDistribution(
            f"cannot sample a quasi-distribution, min entry {float(d.min())}"
        )
    d = np.clip(d, 0.0, None)
    total = d.sum()
    if total <= 0.0:
        raise NegativeDistribution("distribution has no mass")
    cdf = np.cumsum(d / total)
    cdf[-1] = 1.0
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    draws = np.searchsorted(cdf, rng.random(n), side="right")
    return np.bincount(draws, minlength=d.size)


@dataclass(frozen=True, eq=False)
class BehaviorSample:
    """Finite-statistics estimate of a behavior's correlators."""

    counts: np.ndarray
    correlators: np.ndarray
    standard_errors: np.ndarray
    n_per_setting: int
    chsh: ChshResult


def sample_behavior(behavior: Behavior, n: int, seed) -> BehaviorSample:
    """Simulate ``n`` runs per setting pair and estimate the CHSH quantities.

    One seed drives all four settings through a single generator stream, so
    the whole experiment is reproducible from ``(behavior, n, seed)``.
    """
    if not isinstance(behavior, Behavior):
        behavior = Behavior.from_table(behavior)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    counts = np.zeros((2, 2, 4), dtype=int)
    for i in range(2):
        for j in range(2):
            counts[i, j] = sample_outcomes(behavior.table[i, j], n, rng)
    signs = np.array([1.0, -1.0, -1.0, 1.0])
    correlators = (counts @ signs) / float(n)
    std = np.sqrt(np.clip(1.0 - correlators**2, 0.0, None) / float(n))
    return BehaviorSample(
        counts=counts,
        correlators=correlators,
        standard_errors=std,
        n_per_setting=int(n),
        chsh=chsh_value(correlators),
    )


def random_settings(rng: np.random.Generator, *, improper: bool = False) -> ChshSettings:
    """Seed-deterministic settings from four uniform axis-angle draws."""
    mats = [random_orthogonal(rng, improper=improper and bool(rng.integers(2)))
            for _ in range(4)]
    return ChshSettings(*mats)


def sweep_tsirelson_path(grid_size: int) -> list[tuple[np.ndarray, float]]:
    """Interpolate from identity to the canonical settings in rotvec space.

    Returns ``grid_size`` rows of (12 axis-angle parameters, max variant),
    tracing how the violation switches on along the straight-line path.
    """
    if grid_size < 2:
        raise ValueError("sweep needs at least two grid points")
    end = tsirelson_settings().to_rotvecs()
    rows = []
    for t in np.linspace(0.0, 1.0, grid_size):
        x = t * end
        settings = ChshSettings.from_rotvecs(x)
        value = chsh_value(eta_behavior(settings)).max_variant
        rows.append((x, value))
    return rows
