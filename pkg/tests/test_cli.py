import csv
import io
import json

import jsonschema
import pytest
from conftest import SCHEMA_PATH

from calabi.cli import run


@pytest.fixture(scope="module")
def schema():
    with open(SCHEMA_PATH, encoding="utf-8") as fh:
        return json.load(fh)


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, schema, *argv, code=0):
    got, out, err = call(capsys, *argv)
    assert got == code, err
    data = json.loads(out)
    jsonschema.validate(data, schema)
    return data


def test_cone_solve_taub_bolt_weight(capsys, schema):
    data = report(capsys, schema, "cone-solve", "--m", "1", "--x", "3")
    assert data["outputs"]["quadratic"]["weights"] == ["12/11"]
    (adm,) = data["outputs"]["admissibility"]
    assert adm["verdict"] == "NowhereVanishing" and adm["r1"] == "6/11" and adm["d"] == "15/11"


def test_cone_solve_m2_nonexistence(capsys, schema):
    data = report(capsys, schema, "cone-solve", "--m", "2", "--x", "7/2")
    assert data["outputs"]["nonexistence"] is True
    assert data["outputs"]["quadratic"]["weights"] == []


def test_verify_taub_bolt(capsys, schema):
    data = report(capsys, schema, "verify", "--m", "1", "--a", "1", "--s", "6", "--points", "10")
    out = data["outputs"]
    assert data["ok"] and out["S"] == "0"
    assert len(out["points"]) == 10
    assert all(all(p["checks"].values()) for p in out["points"])
    assert out["conformal_einstein"]["max_residual"] == "0"
    assert out["scalar_identity"]["matches_S"]


def test_verify_non_bach_flat_still_consistent(capsys, schema):
    data = report(capsys, schema, "verify", "--m", "3", "--a", "1", "--s", "12", "--points", "3")
    assert data["outputs"]["S"] == "-5184"


def test_reports_are_byte_stable(capsys):
    argv = ["--seed", "7", "verify", "--m", "3", "--a", "1", "--s", "12", "--points", "3"]
    _, first, _ = call(capsys, *argv)
    _, second, _ = call(capsys, *argv)
    assert first == second
    _, third, _ = call(capsys, "--seed", "8", *argv[2:])
    assert third != first


def test_decimal_input_is_exact(capsys, schema):
    data = report(capsys, schema, "construct", "--m", "1", "--a", "1.0", "--s", "6.0")
    assert data["outputs"]["profile"]["q_factorial"] == {"q0": "9/8", "q1": "-3/4", "q3": "9/2", "q4": "-3"}
    assert data["outputs"]["bach_flat"]


def test_construct_cone(capsys, schema):
    code, out, _ = call(capsys, "construct-cone", "--m", "1", "--x", "3", "--weight", "12/11")
    assert code == 0
    assert json.loads(out)["outputs"]["bach_flat"]


def test_classify_from_file_and_stdin(capsys, schema, tmp_path, monkeypatch):
    _, out, _ = call(capsys, "construct", "--m", "1", "--a", "1", "--s", "6")
    path = tmp_path / "tb.json"
    path.write_text(out)
    data = report(capsys, schema, "classify", "--profile", str(path))
    assert data["outputs"]["classification"]["kind"] == "CompleteFiniteVolume"
    assert data["outputs"]["certificate"]["positive"]
    monkeypatch.setattr("sys.stdin", io.StringIO(out))
    data = report(capsys, schema, "classify", "--profile", "-")
    assert data["outputs"]["classification"]["kind"] == "CompleteFiniteVolume"


def test_classify_irrational_end(capsys, schema):
    data = report(capsys, schema, "classify", "--m", "1", "--a", "1", "--s", "4")
    assert data["outputs"]["classification"]["kind"] == "ConeAngleCompactification"
    assert data["outputs"]["certificate"] is None


def test_identities_suite(capsys, schema):
    data = report(capsys, schema, "identities", "--suite", "appendixA")
    assert data["ok"] and all(r["passed"] for r in data["outputs"]["results"])


def test_probe_modes(capsys, schema):
    data = report(capsys, schema, "probe", "--growth", "--conformal", "--m", "1", "--a", "1", "--s", "6")
    assert abs(data["outputs"]["value"] - 3) < 0.1
    data = report(capsys, schema, "probe", "--length", "--m", "1", "--a", "1", "--s", "6")
    assert data["outputs"]["diverges"] and data["outputs"]["endpoint"] == "3"
    data = report(capsys, schema, "probe", "--volume", "--m", "1", "--a", "1", "--s", "6", "--r-hi", "3")
    assert data["outputs"]["volume"].startswith("157.9136704174")


def test_probe_growth_csv(capsys):
    code, out, _ = call(capsys, "probe", "--growth", "--csv", "--m", "2", "--a", "1", "--s", "0")
    assert code == 0 and out.startswith("ell,R,volume\n")


def test_atlas_csv(capsys):
    code, out, _ = call(capsys, "atlas", "--m", "3", "--y-grid=-40:10:6")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["y"] for r in rows] == ["-40", "-30", "-20", "-10", "0", "10"]
    assert rows[4]["kind"] == "CompleteQuarticGrowth"


def test_sweep(capsys, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"kind": "cone", "ms": [1, 3], "xs": ["3", "7/2", "10"]}))
    code, out, _ = call(capsys, "sweep", "--spec", str(spec))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 6 and rows[0]["verdict_plus"] == "NowhereVanishing"
    spec.write_text(json.dumps({"kind": "atlas", "ms": [3, 4], "y_grid": "-10:0:3"}))
    code, out, _ = call(capsys, "sweep", "--spec", str(spec))
    assert code == 0 and len(out.strip().split("\n")) == 7


def test_output_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = call(capsys, "--output", str(target), "cone-solve", "--m", "1", "--x", "3")
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["command"] == "cone-solve"


@pytest.mark.parametrize(
    "argv,code",
    [
        (["cone-solve", "--m", "1", "--x", "1"], 3),  # degenerate polytope
        (["cone-solve", "--m", "0", "--x", "3"], 2),
        (["cone-solve", "--m", "1"], 2),
        (["cone-solve", "--m", "1", "--x", "abc"], 2),
        (["bogus"], 2),
        (["probe", "--length", "--m", "1", "--a", "1", "--s", "6", "--r-hi", "4"], 3),  # root inside
        (["probe", "--growth", "--m", "3", "--a", "1", "--s", "5"], 3),  # incomplete
        (["classify", "--m", "1"], 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert call(capsys, *argv)[0] == code


def test_failed_identity_exits_one(capsys, monkeypatch):
    from calabi import identities

    entry = identities.APPENDIX_B[0]
    flipped = type(entry)(entry.name, entry.lhs, entry.rhs, not entry.expect, entry.note, entry.ms)
    monkeypatch.setitem(identities.SUITES, "appendixB", [flipped])
    code, out, _ = call(capsys, "identities", "--suite", "appendixB")
    assert code == 1 and json.loads(out)["ok"] is False


def test_help_exits_zero(capsys):
    assert call(capsys, "--help")[0] == 0
