"""Command-line front end.

Subcommands: state, evolve, measure, chsh, fine, sample, oracle-check.
Outputs JSON (default) or CSV where the result is tabular; identical inputs
and seeds give byte-identical output.  The default seed is DEFAULT_SEED and
can be overridden by the QUASIBITS_SEED environment variable or ``--seed``.

Exit codes: 0 success, 1 validation or domain failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import bell, crosscheck, serialize, two_qubit
from .errors import QuasibitsError
from .processes import eta_measurement, direct_readout, negativity, apply_process

DEFAULT_SEED = 12345
SEED_ENV_VAR = "QUASIBITS_SEED"


class UsageError(Exception):
    """Bad flag combination; maps to exit code 2."""


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}")


def _parse_axis(text: str) -> np.ndarray:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"axis must be three comma-separated numbers, got {text!r}")
    if len(parts) != 3:
        raise UsageError(f"axis must have three components, got {len(parts)}")
    return np.asarray(parts)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasibits",
        description="Quasi-stochastic qubit toolkit: frame states, negative-"
        "probability processes, and Bell-CHSH analysis.",
        epilog=f"Seeds default to {DEFAULT_SEED}; set {SEED_ENV_VAR} or --seed "
        "to override.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, *, seeded: bool = False) -> None:
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if seeded:
            p.add_argument("--seed", type=int, default=None,
                           help="RNG seed (default from environment or fixed)")

    p_state = sub.add_parser("state", help="convert and validate a state document")
    p_state.add_argument("--state", required=True,
                         help="inline JSON or path (probs, bloch, or sA/sB/T)")
    add_common(p_state)

    p_evolve = sub.add_parser("evolve", help="apply a process document to a state")
    p_evolve.add_argument("--process", required=True, help="inline JSON or path")
    p_evolve.add_argument("--state", required=True, help="inline JSON or path")
    add_common(p_evolve)

    p_measure = sub.add_parser(
        "measure", help="apply an axis or direct readout, with negativity report"
    )
    p_measure.add_argument("--process", choices=("eta", "readout"), required=True)
    p_measure.add_argument("--axis", default="0,0,1",
                           help="measurement axis as x,y,z (eta only)")
    p_measure.add_argument("--state", required=True, help="single-qubit state document")
    add_common(p_measure)

    p_chsh = sub.add_parser("chsh", help="correlators, CHSH values and LHV verdict")
    p_chsh.add_argument("--settings", help="settings document (inline JSON or path)")
    p_chsh.add_argument("--tsirelson", action="store_true",
                        help="use the canonical maximally violating settings")
    p_chsh.add_argument("--measurement", choices=("eta", "readout"), default="eta")
    p_chsh.add_argument("--samples", type=int, default=None,
                        help="also estimate correlators from this many draws per setting")
    p_chsh.add_argument("--sweep", type=int, default=None, metavar="GRID_SIZE",
                        help="evaluate a settings path from identity to the "
                        "canonical optimum")
    p_chsh.add_argument("--csv", help="write sweep rows to this CSV file")
    p_chsh.add_argument("--plot", help="render the sweep to this image file")
    add_common(p_chsh, seeded=True)

    p_fine = sub.add_parser(
        "fine", help="explicit local joint for direct readouts of rotated singlets"
    )
    p_fine.add_argument("--settings", help="settings document (inline JSON or path)")
    p_fine.add_argument("--tsirelson", action="store_true")
    add_common(p_fine)

    p_sample = sub.add_parser("sample", help="draw outcomes from a state document")
    p_sample.add_argument("--state", required=True, help="inline JSON or path")
    p_sample.add_argument("-n", "--samples", type=int, default=10000)
    p_sample.add_argument("--plot", help="render observed frequencies to this image file")
    add_common(p_sample, seeded=True)

    p_oracle = sub.add_parser(
        "oracle-check", help="run the frame/Hilbert cross-validation suite"
    )
    p_oracle.add_argument("--cases", type=int, default=200,
                          help="random cases per equivalence family")
    add_common(p_oracle, seeded=True)

    return parser


def _resolve_seed(args) -> int:
    seed = getattr(args, "seed", None)
    return _default_seed() if seed is None else seed


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _require_json(args) -> None:
    if args.format != "json":
        raise UsageError(f"{args.command} only produces JSON output")


def cmd_state(args) -> tuple[str, int]:
    _require_json(args)
    kind, p = serialize.load_state(serialize.read_json_arg(args.state))
    doc = serialize.state_document(kind, p)
    status = 0 if doc["report"]["valid"] else 1
    return serialize.dump_json(doc), status


def cmd_evolve(args) -> tuple[str, int]:
    _require_json(args)
    kind, matrix = serialize.load_process(serialize.read_json_arg(args.process))
    state_kind, p = serialize.load_state(serialize.read_json_arg(args.state))
    if state_kind != "single":
        raise QuasibitsError("evolve acts on single-qubit states")
    out = apply_process(matrix, p)
    doc = {"process": kind}
    if out.shape == (4,):
        doc["state"] = serialize.state_document("single", out)
    else:
        doc["distribution"] = out
    return serialize.dump_json(doc), 0


def cmd_measure(args) -> tuple[str, int]:
    _require_json(args)
    state_kind, p = serialize.load_state(serialize.read_json_arg(args.state))
    if state_kind != "single":
        raise QuasibitsError("measure acts on single-qubit states")
    if args.process == "eta":
        axis = _parse_axis(args.axis)
        matrix = eta_measurement(axis)
        doc = {"process": "eta", "axis": axis / np.linalg.norm(axis)}
    else:
        matrix = direct_readout()
        doc = {"process": "readout"}
    report = negativity(matrix)
    doc["distribution"] = apply_process(matrix, p)
    doc["negativity"] = {
        "total": report.total,
        "max_column": report.max_column,
        "column_masses": list(report.column_masses),
    }
    return serialize.dump_json(doc), 0


def _load_settings_args(args) -> bell.ChshSettings:
    if args.tsirelson and args.settings:
        raise UsageError("give either --settings or --tsirelson, not both")
    if args.tsirelson:
        return bell.tsirelson_settings()
    if args.settings:
        return serialize.load_settings(serialize.read_json_arg(args.settings))
    raise UsageError("settings required: pass --settings FILE or --tsirelson")


def _sampled_correlators(states: np.ndarray, n: int, rng) -> tuple[np.ndarray, np.ndarray]:
    """Estimate bit-product correlators of four 16-outcome distributions."""
    signs = np.array([1.0, -1.0, -1.0, 1.0])
    products = np.outer(signs, signs).ravel()
    est = np.zeros((2, 2))
    se = np.zeros((2, 2))
    for i in range(2):
        for j in range(2):
            counts = bell.sample_outcomes(states[i, j], n, rng)
            est[i, j] = float(counts @ products) / float(n)
            se[i, j] = np.sqrt(max(1.0 - est[i, j] ** 2, 0.0) / float(n))
    return est, se


def cmd_chsh(args) -> tuple[str, int]:
    settings = _load_settings_args(args)
    seed = _resolve_seed(args)
    if args.plot and args.sweep is None:
        raise UsageError("--plot needs --sweep")
    if args.csv and args.sweep is None:
        raise UsageError("--csv needs --sweep")
    if args.format == "csv" and args.sweep is None:
        raise UsageError("csv format applies to --sweep output")

    doc = {"measurement": args.measurement, "axis": settings.axis}
    if args.measurement == "eta":
        behavior = bell.eta_behavior(settings)
        result = bell.chsh_value(behavior)
        verdict = bell.lhv_membership(behavior)
        doc["correlators"] = result.correlators
        doc["canonical"] = result.value
        doc["max_variant"] = result.max_variant
        doc["best_signs"] = list(result.best_signs)
        doc["is_local"] = verdict.is_local
        doc["witness"] = (
            None
            if verdict.is_local
            else {"signs": list(verdict.witness_signs), "value": verdict.witness_value}
        )
        if verdict.is_local:
            doc["mixture"] = {
                "weights": verdict.weights,
                "residual": verdict.residual,
            }
        if args.samples:
            sampled = bell.sample_behavior(behavior, args.samples, seed)
            doc["sampling"] = {
                "n_per_setting": sampled.n_per_setting,
                "seed": seed,
                "correlators": sampled.correlators,
                "standard_errors": sampled.standard_errors,
                "canonical": sampled.chsh.value,
                "max_variant": sampled.chsh.max_variant,
            }
    else:
        states = bell.rotated_states(settings)
        fine = bell.fine_joint_readout(settings)
        corr = np.array(
            [
                [two_qubit.bit_product_correlator(states[i, j]) for j in range(2)]
                for i in range(2)
            ]
        )
        result = bell.chsh_value(corr)
        local_ok = (
            fine.min_entry >= -1e-12
            and abs(fine.total - 1.0) <= 1e-12
            and fine.max_marginal_residual <= 1e-12
        )
        doc["correlators"] = corr
        doc["canonical"] = result.value
        doc["max_variant"] = result.max_variant
        doc["best_signs"] = list(result.best_signs)
        doc["is_local"] = bool(local_ok)
        doc["witness"] = None
        doc["fine"] = {
            "min_entry": fine.min_entry,
            "total": fine.total,
            "max_marginal_residual": fine.max_marginal_residual,
        }
        if args.samples:
            rng = np.random.default_rng(seed)
            est, se = _sampled_correlators(states, args.samples, rng)
            doc["sampling"] = {
                "n_per_setting": args.samples,
                "seed": seed,
                "correlators": est,
                "standard_errors": se,
                "canonical": bell.chsh_value(est).value,
                "max_variant": bell.chsh_value(est).max_variant,
            }

    if args.sweep is not None:
        if args.measurement != "eta":
            raise UsageError("--sweep is defined for the eta measurement")
        rows = bell.sweep_tsirelson_path(args.sweep)
        csv_text = serialize.sweep_csv(rows)
        if args.plot:
            from . import plots

            plots.render_sweep(rows, args.plot)
        if args.csv:
            Path(args.csv).write_text(csv_text)
        if args.format == "csv":
            return csv_text, 0
        sweep_doc = {
            "grid_size": args.sweep,
            "values": [value for _, value in rows],
        }
        if args.csv:
            sweep_doc["csv_path"] = args.csv
        if args.plot:
            sweep_doc["plot_path"] = args.plot
        doc["sweep"] = sweep_doc

    return serialize.dump_json(doc), 0


def cmd_fine(args) -> tuple[str, int]:
    settings = _load_settings_args(args)
    fine = bell.fine_joint_readout(settings)
    ok = (
        fine.min_entry >= -1e-12
        and abs(fine.total - 1.0) <= 1e-12
        and fine.max_marginal_residual <= 1e-12
    )
    if args.format == "csv":
        lines = ["a1,a2,b1,b2,probability"]
        table = fine.table()
        for idx in np.ndindex(4, 4, 4, 4):
            lines.append(
                ",".join(str(i) for i in idx) + "," + repr(float(table[idx]))
            )
        return "\n".join(lines) + "\n", 0 if ok else 1
    doc = {
        "min_entry": fine.min_entry,
        "total": fine.total,
        "max_marginal_residual": fine.max_marginal_residual,
        "valid": bool(ok),
        "joint": fine.joint,
    }
    return serialize.dump_json(doc), 0 if ok else 1


def cmd_sample(args) -> tuple[str, int]:
    kind, p = serialize.load_state(serialize.read_json_arg(args.state))
    n = args.samples
    seed = _resolve_seed(args)
    counts = bell.sample_outcomes(p, n, seed)
    freq = counts / float(n)
    se = np.sqrt(np.clip(freq * (1.0 - freq), 0.0, None) / float(n))
    doc = {
        "kind": kind,
        "n": n,
        "seed": seed,
        "counts": counts,
        "frequencies": freq,
        "probs": p,
        "standard_errors": se,
        "max_abs_error": float(np.abs(freq - np.clip(p, 0.0, None)).max()),
    }
    if kind == "pair":
        matching = int(counts.reshape(4, 4).trace())
        doc["matching_pair_count"] = matching
    if args.plot:
        from . import plots

        plots.render_sample(freq, p, se, args.plot)
        doc["plot_path"] = args.plot
    if args.format == "csv":
        lines = ["outcome,count,frequency,probability,standard_error"]
        for k in range(counts.size):
            lines.append(
                f"{k},{int(counts[k])},{float(freq[k])!r},{float(p[k])!r},{float(se[k])!r}"
            )
        return "\n".join(lines) + "\n", 0
    return serialize.dump_json(doc), 0


def cmd_oracle_check(args) -> tuple[str, int]:
    _require_json(args)
    seed = _resolve_seed(args)
    report = crosscheck.oracle_report(args.cases, args.cases, seed)
    status = 0 if report["max_residual"] <= 1e-9 else 1
    return serialize.dump_json(report), status


_HANDLERS = {
    "state": cmd_state,
    "evolve": cmd_evolve,
    "measure": cmd_measure,
    "chsh": cmd_chsh,
    "fine": cmd_fine,
    "sample": cmd_sample,
    "oracle-check": cmd_oracle_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, status = _HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except QuasibitsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    _emit(text, args.output)
    return status


if __name__ == "__main__":
    sys.exit(main())
