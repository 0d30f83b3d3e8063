"""End-to-end CLI tests: every subcommand exercised in process through
main(argv), with exit codes and emitted JSON/CSV checked against the
documented contract."""

import json
import math

import pytest

from linflow.cli import (
    EXIT_OK,
    EXIT_PARSE,
    EXIT_PRECONDITION,
    EXIT_UNDECIDED,
    EXIT_USAGE,
    main,
)


def spec_doc(*rows):
    return {"blocks": [{"m": m, "re": re, "im": im} for m, re, im in rows]}


def write_json(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def shear_file(tmp_path):
    # one defective real block, growth -1
    return write_json(tmp_path, "shear.json", spec_doc((2, "-1", "0")))


@pytest.fixture
def scalar_file(tmp_path):
    # -identity on the plane
    return write_json(
        tmp_path, "scalar.json", spec_doc((1, "-1", "0"), (1, "-1", "0"))
    )


@pytest.fixture
def spiral_file(tmp_path):
    return write_json(tmp_path, "spiral.json", spec_doc((1, "2", "6")))


@pytest.fixture
def saddle_file(tmp_path):
    return write_json(
        tmp_path, "saddle.json", spec_doc((1, "-1", "0"), (1, "2", "0"))
    )


# ---------------------------------------------------------------------------
# classify


def test_classify_yes_emits_verdict_json(capsys, shear_file, scalar_file):
    code, out, _ = run_cli(
        capsys, "classify", "HoelderEquiv", shear_file, scalar_file
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["relation"] == "HoelderEquiv"
    assert doc["decision"] == "Yes"
    assert doc["scaling"] is not None
    assert doc["left"] == spec_doc((2, -1, 0))
    assert doc["right"] == spec_doc((1, -1, 0), (1, -1, 0))
    assert doc["trace"] and all(
        set(e) == {"step", "outcome", "detail"} for e in doc["trace"]
    )


def test_classify_no_still_exits_zero(capsys, shear_file, scalar_file):
    code, out, _ = run_cli(capsys, "classify", "LipEquiv", shear_file, scalar_file)
    assert code == EXIT_OK
    assert json.loads(out)["decision"] == "No"


def test_classify_relation_name_is_forgiving(capsys, shear_file, scalar_file):
    code, out, _ = run_cli(
        capsys, "classify", "lipequiv", shear_file, scalar_file
    )
    assert code == EXIT_OK
    assert json.loads(out)["relation"] == "LipEquiv"


def test_classify_strict_turns_undecided_into_exit_4(capsys, tmp_path):
    # central rotation rates 1 vs 2 beside a saddle: genuinely out of scope
    a = write_json(
        tmp_path,
        "a.json",
        spec_doc((1, "0", "1"), (1, "-1", "0"), (1, "1", "0")),
    )
    b = write_json(
        tmp_path,
        "b.json",
        spec_doc((1, "0", "2"), (1, "-1", "0"), (1, "1", "0")),
    )
    code, out, _ = run_cli(capsys, "classify", "TopEquiv", a, b)
    assert code == EXIT_OK
    assert json.loads(out)["decision"] == "Undecided"

    code, out, _ = run_cli(capsys, "classify", "TopEquiv", a, b, "--strict")
    assert code == EXIT_UNDECIDED
    assert json.loads(out)["decision"] == "Undecided"


def test_unknown_relation_exits_1(capsys, shear_file, scalar_file):
    code, _, err = run_cli(capsys, "classify", "Bogus", shear_file, scalar_file)
    assert code == EXIT_USAGE
    assert "error:" in err


def test_missing_file_exits_2(capsys, shear_file, tmp_path):
    absent = str(tmp_path / "absent.json")
    code, _, err = run_cli(capsys, "classify", "LipEquiv", shear_file, absent)
    assert code == EXIT_PARSE
    assert "error:" in err


def test_malformed_json_exits_2(capsys, shear_file, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops", encoding="utf-8")
    code, _, err = run_cli(capsys, "classify", "LipEquiv", shear_file, str(bad))
    assert code == EXIT_PARSE
    assert "invalid JSON" in err


def test_malformed_block_payload_exits_2(capsys, shear_file, tmp_path):
    bad = write_json(tmp_path, "bad.json", spec_doc((0, "1", "0")))
    code, _, err = run_cli(capsys, "classify", "LipEquiv", shear_file, bad)
    assert code == EXIT_PARSE
    assert "error:" in err


def test_matrix_rows_file_is_ingested(capsys, shear_file, tmp_path):
    matrix = write_json(
        tmp_path,
        "matrix.json",
        {"dim": 2, "rows": [["-1", "1"], ["0", "-1"]]},
    )
    code, out, _ = run_cli(capsys, "classify", "LinEquiv", matrix, shear_file)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["decision"] == "Yes"
    assert doc["left"] == spec_doc((2, -1, 0))


# ---------------------------------------------------------------------------
# transform


def test_transform_scale_half(capsys, spiral_file):
    code, out, _ = run_cli(capsys, "transform", "scale:1/2", spiral_file)
    assert code == EXIT_OK
    assert json.loads(out) == spec_doc((1, 1, 3))


def test_transform_collapse_splits_rotating_line(capsys, spiral_file):
    code, out, _ = run_cli(capsys, "transform", "collapse", spiral_file)
    assert code == EXIT_OK
    assert json.loads(out) == spec_doc((1, 2, 0), (1, 2, 0))


def test_transform_decouple_forgets_every_rotation(capsys, tmp_path):
    spec = write_json(tmp_path, "s.json", spec_doc((2, "-1", "1")))
    code, out, _ = run_cli(capsys, "transform", "decouple", spec)
    assert code == EXIT_OK
    assert json.loads(out) == spec_doc((2, -1, 0), (2, -1, 0))


def test_transform_reverse(capsys, shear_file):
    code, out, _ = run_cli(capsys, "transform", "reverse", shear_file)
    assert code == EXIT_OK
    assert json.loads(out) == spec_doc((2, 1, 0))


def test_transform_realify_keeps_real_form(capsys, spiral_file):
    # a complex pair listed once is already the real rotation block
    code, out, _ = run_cli(capsys, "transform", "realify", spiral_file)
    assert code == EXIT_OK
    assert json.loads(out) == spec_doc((1, 2, 6))


def test_transform_unknown_op_exits_2(capsys, spiral_file):
    code, _, err = run_cli(capsys, "transform", "swizzle", spiral_file)
    assert code == EXIT_PARSE
    assert "unknown transform" in err


def test_transform_bad_scale_factor_exits_2(capsys, spiral_file):
    code, _, err = run_cli(capsys, "transform", "scale:x", spiral_file)
    assert code == EXIT_PARSE
    assert "malformed rational" in err


# ---------------------------------------------------------------------------
# invariants


def test_invariants_summary_for_stable_rotating_block(capsys, tmp_path):
    spec = write_json(tmp_path, "s.json", spec_doc((2, "-1", "1")))
    code, out, _ = run_cli(capsys, "invariants", spec)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert set(doc) == {
        "dim",
        "partition",
        "spectrum",
        "growth",
        "generic",
        "bounded",
        "coincidence",
        "minimal_period_over_two_pi",
        "distortion_subspace",
    }
    assert doc["dim"] == 4
    assert doc["partition"]["stable"] == 4
    assert doc["bounded"] is False
    assert doc["minimal_period_over_two_pi"] is None
    assert doc["distortion_subspace"]["coords"] == [0, 2]
    assert doc["spectrum"] == ["-1", "-1", "-1", "-1"]


def test_invariants_summary_for_center(capsys, tmp_path):
    spec = write_json(tmp_path, "s.json", spec_doc((1, "0", "1")))
    code, out, _ = run_cli(capsys, "invariants", spec)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["bounded"] is True
    assert doc["minimal_period_over_two_pi"] == "1"
    assert doc["distortion_subspace"] is None  # not stable


# ---------------------------------------------------------------------------
# catalog2d


def test_catalog2d_rows(capsys, spiral_file):
    code, out, _ = run_cli(capsys, "catalog2d", spiral_file)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert set(doc) == {"similar", "lipschitz", "lyapunov", "topological"}
    assert doc["similar"]["representative"] == spec_doc((1, 1, 3))
    assert doc["similar"]["scaling"] == "1/2"
    assert doc["lipschitz"]["representative"] == spec_doc((1, 1, 0), (1, 1, 0))
    assert doc["lyapunov"]["representative"] == doc["lipschitz"]["representative"]
    assert doc["topological"]["label"] == "node"


def test_catalog2d_nonplanar_exits_3(capsys, tmp_path):
    cube = write_json(tmp_path, "cube.json", spec_doc((3, "-1", "0")))
    code, _, err = run_cli(capsys, "catalog2d", cube)
    assert code == EXIT_PRECONDITION
    assert "error:" in err


# ---------------------------------------------------------------------------
# simulate


def test_simulate_csv_values(capsys, saddle_file):
    code, out, _ = run_cli(
        capsys, "simulate", saddle_file, "--point", "1,1", "--times", "0,1"
    )
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "t,x1,x2"
    row0 = [float(v) for v in lines[1].split(",")]
    row1 = [float(v) for v in lines[2].split(",")]
    assert row0 == [0.0, 1.0, 1.0]
    assert row1[0] == 1.0
    assert math.isclose(row1[1], math.exp(-1.0), rel_tol=1e-10)
    assert math.isclose(row1[2], math.exp(2.0), rel_tol=1e-10)


def test_simulate_t_range_row_count(capsys, saddle_file):
    code, out, _ = run_cli(
        capsys, "simulate", saddle_file, "--point", "1,0", "--t-range", "0,1,5"
    )
    assert code == EXIT_OK
    assert len(out.strip().splitlines()) == 6  # header + 5 samples


def test_simulate_wrong_point_count_exits_3(capsys, saddle_file):
    code, _, err = run_cli(
        capsys, "simulate", saddle_file, "--point", "1,2,3", "--times", "0"
    )
    assert code == EXIT_PRECONDITION
    assert "needs 2 coordinates" in err


def test_simulate_missing_point_flag_is_a_usage_error(capsys, saddle_file):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", saddle_file])
    assert exc.value.code == EXIT_USAGE


# ---------------------------------------------------------------------------
# verify


def test_verify_spiral_reports_residual_and_map(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify",
        "spiral:-1/2",
        "--times=-2,0,3",
        "--points",
        "8",
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["residual"] < 1e-9
    assert doc["round_trip"] < 1e-9
    assert doc["n_points"] == 8
    assert doc["worst_time"] in (-2.0, 0.0, 3.0)
    assert doc["map"]["source"] is not None
    assert doc["map"]["target"] is not None


def test_verify_unwind_runs(capsys):
    code, out, _ = run_cli(
        capsys,
        "verify",
        "unwind:2,-1,1",
        "--times=-1,0,2",
        "--points",
        "8",
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["residual"] < 1e-7
    assert doc["map"]["source"] == spec_doc((2, -1, 1))


def test_verify_uniform_without_spec_exits_2(capsys):
    code, _, err = run_cli(capsys, "verify", "uniform")
    assert code == EXIT_PARSE
    assert "needs a generator file" in err


def test_verify_unwind_bad_arity_exits_2(capsys):
    code, _, err = run_cli(capsys, "verify", "unwind:2,1")
    assert code == EXIT_PARSE
    assert "unwind:M,A,B" in err


def test_verify_unknown_construction_exits_2(capsys):
    code, _, err = run_cli(capsys, "verify", "mystery")
    assert code == EXIT_PARSE
    assert "unknown construction" in err


# ---------------------------------------------------------------------------
# audit and argument plumbing


def test_audit_emits_full_verdict_table(capsys, shear_file, scalar_file):
    code, out, _ = run_cli(capsys, "audit", shear_file, scalar_file)
    assert code == EXIT_OK
    doc = json.loads(out)
    assert set(doc) == {"verdicts", "violations", "clean"}
    assert doc["clean"] is True
    assert doc["violations"] == []
    assert len(doc["verdicts"]) == 11
    assert doc["verdicts"]["HoelderEquiv"] == "Yes"
    assert doc["verdicts"]["LipEquiv"] == "No"


def test_bare_invocation_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == EXIT_USAGE


def test_unknown_subcommand_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE
