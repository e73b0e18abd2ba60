"""Qubits as quasi-stochastic bit systems.

One and two qubits are represented by (quasi-)probability vectors over
signed bit pairs, with dynamics and measurements acting as matrices whose
columns sum to one but whose entries may go negative.  The package carries
the full Bell-CHSH pipeline on this representation and cross-validates
every number against an independent Hilbert-space implementation.
"""

from .bell import (
    Behavior,
    ChshResult,
    ChshSettings,
    FineJoint,
    LhvVerdict,
    TSIRELSON_BOUND,
    chsh_value,
    eta_behavior,
    fine_joint_readout,
    lhv_membership,
    optimize_chsh,
    rotated_states,
    sample_behavior,
    sample_outcomes,
    tsirelson_settings,
)
from .frame import (
    TETRA_VECTORS,
    bit_averages,
    bloch_from_state,
    state_from_bloch,
    validate_state,
)
from .processes import (
    affine_process,
    apply_process,
    compose,
    direct_readout,
    eta_measurement,
    general_measurement,
    invert_rotation,
    negativity,
    rotation_from_process,
    rotation_process,
)
from .two_qubit import (
    apply_local,
    marginal_alice,
    marginal_bob,
    params_from_state,
    singlet,
    state_from_params,
)

__version__ = "0.1.0"

__all__ = [
    "Behavior",
    "ChshResult",
    "ChshSettings",
    "FineJoint",
    "LhvVerdict",
    "TSIRELSON_BOUND",
    "TETRA_VECTORS",
    "affine_process",
    "apply_local",
    "apply_process",
    "bit_averages",
    "bloch_from_state",
    "chsh_value",
    "compose",
    "direct_readout",
    "eta_behavior",
    "eta_measurement",
    "fine_joint_readout",
    "general_measurement",
    "invert_rotation",
    "lhv_membership",
    "marginal_alice",
    "marginal_bob",
    "negativity",
    "optimize_chsh",
    "params_from_state",
    "rotated_states",
    "rotation_from_process",
    "rotation_process",
    "sample_behavior",
    "sample_outcomes",
    "singlet",
    "state_from_bloch",
    "state_from_params",
    "tsirelson_settings",
    "validate_state",
]
