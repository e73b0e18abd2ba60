"""JSON and CSV interchange for states, processes, settings and matrices.

Schemas
-------
Single-qubit state:      ``{"probs": [p0, p1, p2, p3]}`` or ``{"bloch": [x, y, z]}``
Two-qubit state:         ``{"probs": [... 16 ...]}`` or
                         ``{"sA": [..], "sB": [..], "T": [[..] x3]}``
Process:                 ``{"kind": "rotation" | "affine" | "eta" | "readout"
                         | "general", "matrix": [[..]], "params": {...}}``
                         (row-major; ``matrix`` wins when both are present)
CHSH settings:           ``{"rotations": {"alice_1": [[..]], "alice_2": [[..]],
                         "bob_1": [[..]], "bob_2": [[..]]}, "axis": [x, y, z]}``
Complex matrix:          ``{"re": [[..]], "im": [[..]]}``

Floats pass through ``json`` unformatted, which emits the shortest string
that round-trips the double exactly; output for a fixed input and seed is
byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .bell import ChshSettings
from .errors import QuasibitsError
from . import frame, processes, two_qubit


def to_jsonable(value):
    """Recursively convert numpy scalars/arrays so ``json`` can emit them."""
    if isinstance(value, dict):
        return {k: to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


def dump_json(obj) -> str:
    """Stable JSON rendering: two-space indent, keys in insertion order."""
    return json.dumps(to_jsonable(obj), indent=2) + "\n"


def read_json_arg(text_or_path: str):
    """Parse an argument that is either inline JSON or a path to a JSON file."""
    stripped = text_or_path.strip()
    if stripped.startswith("{") or stripped.startswith("["):
        try:
            return json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise QuasibitsError(f"bad inline JSON: {exc}") from exc
    path = Path(text_or_path)
    if not path.exists():
        raise QuasibitsError(f"no such file: {text_or_path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise QuasibitsError(f"bad JSON in {text_or_path}: {exc}") from exc


def load_state(obj) -> tuple[str, np.ndarray]:
    """Decode a state document; returns ``("single" | "pair", probs)``."""
    if not isinstance(obj, dict):
        raise QuasibitsError("state document must be a JSON object")
    if "bloch" in obj:
        return "single", frame.state_from_bloch(np.asarray(obj["bloch"], dtype=float))
    if "sA" in obj or "sB" in obj or "T" in obj:
        try:
            s_a = np.asarray(obj["sA"], dtype=float)
            s_b = np.asarray(obj["sB"], dtype=float)
            corr = np.asarray(obj["T"], dtype=float)
        except KeyError as exc:
            raise QuasibitsError(f"pair parameterization needs sA, sB and T: {exc}")
        return "pair", two_qubit.state_from_params(s_a, s_b, corr)
    if "probs" in obj:
        p = np.asarray(obj["probs"], dtype=float)
        if p.shape == (4,):
            return "single", p
        if p.shape == (16,):
            return "pair", p
        raise QuasibitsError(f"probs must have 4 or 16 entries, got {p.shape}")
    raise QuasibitsError("state document needs probs, bloch, or sA/sB/T")


def state_document(kind: str, p: np.ndarray) -> dict:
    """Full description of a state: probabilities, parameters, validity."""
    if kind == "single":
        report = frame.validate_state(p)
        doc = {
            "kind": "single",
            "probs": p,
            "bloch": frame._bloch(p),
            "report": {
                "sum_error": report.sum_error,
                "min_entry": report.min_entry,
                "bloch_norm": report.bloch_norm,
                "valid": report.valid,
            },
        }
        return doc
    s_a, s_b, corr = two_qubit.params_from_state(p)
    report = two_qubit.validate_state(p)
    return {
        "kind": "pair",
        "probs": p,
        "sA": s_a,
        "sB": s_b,
        "T": corr,
        "report": {
            "sum_error": report.sum_error,
            "min_entry": report.min_entry,
            "min_eigenvalue": report.min_eigenvalue,
            "valid": report.valid,
        },
    }


_PROCESS_KINDS = ("rotation", "affine", "eta", "readout", "general")


def load_process(obj) -> tuple[str, np.ndarray]:
    """Decode a process document; returns ``(kind, matrix)``.

    A supplied matrix is used as-is after column validation (and, for
    ``rotation``, a round-trip through the rotation reconstruction);
    otherwise the matrix is built from ``params``.
    """
    if not isinstance(obj, dict):
        raise QuasibitsError("process document must be a JSON object")
    kind = obj.get("kind")
    if kind not in _PROCESS_KINDS:
        raise QuasibitsError(f"process kind must be one of {_PROCESS_KINDS}, got {kind!r}")
    if "matrix" in obj:
        matrix = processes.check_columns(np.asarray(obj["matrix"], dtype=float))
        if kind == "rotation":
            processes.rotation_from_process(matrix)
        return kind, matrix
    params = obj.get("params", {})
    if kind == "rotation":
        if "o" in params:
            return kind, processes.rotation_process(np.asarray(params["o"], dtype=float))
        return kind, processes.rotation_process(
            processes.axis_angle_rotation(
                np.asarray(params["axis"], dtype=float), float(params["angle"])
            )
        )
    if kind == "affine":
        return kind, processes.affine_process(
            np.asarray(params["linear"], dtype=float),
            np.asarray(params.get("shift", (0.0, 0.0, 0.0)), dtype=float),
        )
    if kind == "eta":
        return kind, processes.eta_measurement(np.asarray(params["axis"], dtype=float))
    if kind == "readout":
        return kind, processes.direct_readout()
    return kind, processes.general_measurement(
        np.asarray(params["m_vectors"], dtype=float),
        np.asarray(params["w_vectors"], dtype=float),
    )


def process_document(kind: str, matrix: np.ndarray, params: dict | None = None) -> dict:
    doc = {"kind": kind, "matrix": matrix}
    if params:
        doc["params"] = params
    return doc


def load_settings(obj) -> ChshSettings:
    """Decode a CHSH settings document."""
    if not isinstance(obj, dict) or "rotations" not in obj:
        raise QuasibitsError("settings document needs a rotations object")
    rot = obj["rotations"]
    try:
        mats = {name: np.asarray(rot[name], dtype=float)
                for name in ("alice_1", "alice_2", "bob_1", "bob_2")}
    except KeyError as exc:
        raise QuasibitsError(f"settings rotations missing {exc}")
    axis = np.asarray(obj["axis"], dtype=float) if "axis" in obj else None
    return ChshSettings(
        mats["alice_1"], mats["alice_2"], mats["bob_1"], mats["bob_2"], axis=axis
    )


def settings_document(settings: ChshSettings) -> dict:
    return {
        "rotations": {
            "alice_1": settings.alice_1,
            "alice_2": settings.alice_2,
            "bob_1": settings.bob_1,
            "bob_2": settings.bob_2,
        },
        "axis": settings.axis,
    }


def load_complex_matrix(obj) -> np.ndarray:
    """Decode ``{"re": [[..]], "im": [[..]]}`` into a complex array."""
    if not isinstance(obj, dict) or "re" not in obj:
        raise QuasibitsError("complex matrix document needs re (and optionally im)")
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != im.shape:
        raise QuasibitsError(f"re/im shapes differ: {re.shape} vs {im.shape}")
    return re + 1.0j * im


def complex_matrix_document(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"re": m.real, "im": m.imag}


SWEEP_HEADER = [
    "alice_1_x", "alice_1_y", "alice_1_z",
    "alice_2_x", "alice_2_y", "alice_2_z",
    "bob_1_x", "bob_1_y", "bob_1_z",
    "bob_2_x", "bob_2_y", "bob_2_z",
    "value",
]


def sweep_csv(rows) -> str:
    """Render sweep rows (12 axis-angle parameters + value) as CSV text."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for params, value in rows:
        writer.writerow([repr(float(x)) for x in params] + [repr(float(value))])
    return buf.getvalue()
