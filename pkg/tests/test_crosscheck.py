"""Dual-route validation: frame contractions against the Hilbert oracle."""

from quasibits import crosscheck


def test_formula_checks_resolve_printed_ambiguities():
    report = crosscheck.formula_checks(seed=404, n_settings=40)

    pair = report["pair_outcome_law"]
    assert pair["resolved"] == "quarter_minus"
    assert pair["residual_quarter_minus"] <= 1e-12
    assert pair["residual_half_plus"] >= 0.5

    den = report["fine_denominator"]
    assert den["resolved"] == "plus_third"
    assert den["residual_plus_third"] <= 1e-12
    assert den["residual_minus_third"] >= 1e-3

    factor = report["general_output_factor"]
    assert factor["resolved"] == "with_quarter"
    assert factor["residual_with_quarter"] <= 1e-12
    assert factor["residual_without_quarter"] >= 1e-3


def test_single_qubit_routes_agree():
    report = crosscheck.single_qubit_equivalence(1000, seed=11)
    assert report["eta_residual"] <= 1e-10
    assert report["sic_residual"] <= 1e-10
    assert report["rotation_residual"] <= 1e-10
    assert report["improper_bloch_residual"] <= 1e-10


def test_two_qubit_routes_agree():
    report = crosscheck.two_qubit_equivalence(1000, seed=13)
    assert report["state_residual"] <= 1e-10
    assert report["behavior_residual"] <= 1e-10


def test_oracle_report_aggregate():
    report = crosscheck.oracle_report(200, 200, crosscheck.DEFAULT_SEED)
    assert report["max_residual"] <= 1e-9
    assert report["sic_effects_sum_residual"] <= 1e-12
    assert report["singlet_rotation_residual"]["proper"] <= 1e-12
    assert report["singlet_rotation_residual"]["improper"] <= 1e-12
    assert report["random_density_min_frame_entry"] >= -1e-12
    assert report["jacobi"]["two_by_two_residual"] <= 1e-10
    assert report["jacobi"]["conjugated_diagonal_residual"] <= 1e-10


def test_oracle_report_deterministic():
    a = crosscheck.oracle_report(50, 50, 3)
    b = crosscheck.oracle_report(50, 50, 3)
    assert a == b
