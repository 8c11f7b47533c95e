from __future__ import annotations

import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from ainfty import io
from ainfty.cli import main, parse_degrees
from ainfty.fixtures import gauge_variants
from ainfty.functors import gauge_functor, identity_functor

SCHEMA = json.loads(resources.files("ainfty.data").joinpath("report.schema.json").read_text("utf-8"))


def run(capsys, *argv: str) -> tuple[int, dict]:
    code = main([*argv, "--json"])
    out, err = capsys.readouterr()
    # quotient and fixture put the report on stderr when the category goes to stdout
    report = json.loads(err if err.strip() else out)
    jsonschema.validate(report, SCHEMA)
    return code, report


@pytest.fixture
def a2_file(tmp_path, fixtures):
    p = tmp_path / "a2.json"
    p.write_text(io.dump_category(fixtures["quiver_a2"]), encoding="utf-8")
    return p


def test_verify_a2(capsys, a2_file):
    code, rep = run(capsys, "verify", str(a2_file), "--max-arity", "6")
    assert code == 0 and rep["pass"] and rep["violations"] == []
    assert rep["details"]["max_arity"] == 6


def test_verify_corrupted(capsys, tmp_path, fixtures):
    data = io.category_to_dict(fixtures["quiver_a2"])
    data["mu"] = [e for e in data["mu"] if e["inputs"] != ["p01", "e0"]]
    p = tmp_path / "bad.json"
    p.write_text(io.dumps(data), encoding="utf-8")
    code, rep = run(capsys, "verify", str(p))
    assert code == 1 and not rep["pass"]
    assert len(rep["violations"]) == 1


def test_quotient_then_homology(capsys, tmp_path, fixtures):
    unit = tmp_path / "unit.json"
    unit.write_text(io.dump_category(fixtures["unit"]), encoding="utf-8")
    q = tmp_path / "q.json"
    code, rep = run(capsys, "quotient", str(unit), "--subcat", "P", "--max-word-length", "7", "-o", str(q))
    assert code == 0 and rep["details"]["contractible"] == {"P": False}
    code, rep = run(capsys, "homology", str(q), "P", "P", "--degrees", "-5..0")
    assert code == 0
    table = rep["tables"]["hom(P,P)"]
    assert sorted(map(int, table)) == list(range(-5, 1))
    assert all(e == {"dim": 0, "stable": True} for e in table.values())


def test_quotient_to_stdout(capsys, a2_file):
    assert main(["quotient", str(a2_file), "--subcat", "L1", "--max-word-length", "3"]) == 0
    out, err = capsys.readouterr()
    Q = io.category_from_dict(json.loads(out))
    assert "w:e1|p01" in Q.index
    assert err.startswith("PASS quotient")


def test_text_report(capsys, a2_file):
    assert main(["homology", str(a2_file), "L0", "L1", "--degrees", "-1..0"]) == 0
    out, _ = capsys.readouterr()
    assert out.splitlines()[0] == "PASS homology"
    assert "   0: 1  STABLE" in out


def test_unstable_exit(capsys, tmp_path, fixtures):
    # at length 2 the degree-0 class has not settled yet
    unit = tmp_path / "unit.json"
    unit.write_text(io.dump_category(fixtures["unit"]), encoding="utf-8")
    code, rep = run(capsys, "hochschild", str(unit), "--max-length", "2", "--degrees", "-3..0")
    unstable = [k for k, e in rep["tables"]["HH"].items() if not e["stable"]]
    assert unstable and code == 1 and rep["pass"]
    code, _ = run(capsys, "hochschild", str(unit), "--max-length", "2", "--degrees", "-3..0", "--allow-unstable")
    assert code == 0


def test_hochschild_unit(capsys, tmp_path, fixtures):
    unit = tmp_path / "unit.json"
    unit.write_text(io.dump_category(fixtures["unit"]), encoding="utf-8")
    code, rep = run(capsys, "hochschild", str(unit), "--max-length", "6", "--degrees", "-5..0")
    assert code == 0
    assert {k: e["dim"] for k, e in rep["tables"]["HH"].items()} == {str(k): int(k == 0) for k in range(-5, 1)}


def test_fixture_round_trip(capsys, tmp_path):
    for name in ("quiver_a3", "disk_s2_w1", "gauge_a4_left_unit", "retraction_toy_quotient"):
        out = tmp_path / f"{name}.json"
        code, _ = run(capsys, "fixture", name, "-o", str(out))
        assert code == 0
        text = out.read_text(encoding="utf-8")
        C = io.load_category(out, waive_arity_check=True)
        assert io.dump_category(C) == text


def test_fixture_model(capsys, tmp_path):
    from ainfty.fixtures import disk_with_stops_category, golden_disk_model

    model = tmp_path / "m.json"
    model.write_text(io.dumps(golden_disk_model().to_dict()), encoding="utf-8")
    out = tmp_path / "disk.json"
    code, rep = run(capsys, "fixture", "--model", str(model), "-o", str(out))
    assert code == 0
    assert io.load_category(out) == disk_with_stops_category(golden_disk_model())


def test_malformed_inputs(capsys, tmp_path):
    junk = tmp_path / "junk.json"
    junk.write_text("{not json", encoding="utf-8")
    code, rep = run(capsys, "verify", str(junk))
    assert code == 2 and rep["violations"][0]["location"] == "input"
    code, _ = run(capsys, "verify", str(tmp_path / "missing.json"))
    assert code == 2
    code, _ = run(capsys, "fixture", "no_such_fixture")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["homology", str(junk), "--degrees", "3..1"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_arity_waiver(capsys, tmp_path, fixtures):
    p = tmp_path / "acyclic.json"
    p.write_text(io.dump_category(fixtures["acyclic"]), encoding="utf-8")
    assert run(capsys, "verify", str(p))[0] == 2
    assert run(capsys, "verify", str(p), "--waive-arity-check")[0] == 0


def test_retract_toy(capsys, tmp_path):
    q, d = tmp_path / "q.json", tmp_path / "delta.json"
    run(capsys, "fixture", "retraction_toy_quotient", "-o", str(q), "--delta-output", str(d))
    code, rep = run(capsys, "retract", str(q), "--delta", str(d), "--element", "c")
    assert code == 0
    assert rep["details"] == {"result": ["w:b|a"], "iterations": 1, "witness": ["w:b|a'"]}
    d.write_text("[]", encoding="utf-8")
    code, rep = run(capsys, "retract", str(q), "--delta", str(d), "--element", "c")
    assert code == 1 and rep["violations"]


def test_action(capsys, tmp_path, fixtures):
    unit = tmp_path / "unit.json"
    unit.write_text(io.dump_category(fixtures["unit"]), encoding="utf-8")
    code, rep = run(capsys, "action", str(unit), "--epsilon", "0", "--max-length", "5")
    assert code == 0
    code, rep = run(capsys, "action", str(unit), "--cycle", "e", "--k", "1", "--epsilon", "1/16")
    assert code == 0
    assert rep["details"]["action"] == {"length": 1, "raw_sum": "3/2", "value": 1.5}
    assert rep["details"]["representative"] == ["e"]
    code, rep = run(capsys, "action", str(unit), "--cycle", "e,e", "--k", "1")
    assert code == 1
    with pytest.raises(SystemExit) as exc:
        main(["action", str(unit), "--epsilon", "-1/2"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_wlim(capsys, a2_file, tmp_path):
    out = tmp_path / "w.json"
    code, rep = run(capsys, "wlim", str(a2_file), "--stabilization-bound", "3", "--degrees", "-2..0", "-o", str(out))
    assert code == 0 and rep["tables"]["hom(L0,L1)"]["0"]["dim"] == 1
    assert io.load_category(out, waive_arity_check=True).objects


def _functor_file(tmp_path, F, src_name, tgt_name, fname):
    data = io.functor_to_dict(F, src_name, tgt_name)
    p = tmp_path / fname
    p.write_text(io.dumps(data), encoding="utf-8")
    return p


def test_functor_and_homotopy_check(capsys, tmp_path):
    C, g = gauge_variants()["gauge_a3_arrow_right"]
    F = gauge_functor(C, g, 4)
    (tmp_path / "src.json").write_text(io.dump_category(F.source), encoding="utf-8")
    (tmp_path / "tgt.json").write_text(io.dump_category(F.target), encoding="utf-8")
    good = _functor_file(tmp_path, F, "src.json", "tgt.json", "F.json")
    assert run(capsys, "functor-check", str(good), "--max-arity", "4")[0] == 0

    data = io.functor_to_dict(F, "src.json", "tgt.json")
    data["components"] = [c for c in data["components"] if c["arity"] != 2]
    bad = tmp_path / "bad.json"
    bad.write_text(io.dumps(data), encoding="utf-8")
    code, rep = run(capsys, "functor-check", str(bad), "--max-arity", "4")
    assert code == 1 and rep["violations"]

    (tmp_path / "c.json").write_text(io.dump_category(C), encoding="utf-8")
    _functor_file(tmp_path, identity_functor(C), "c.json", "c.json", "id.json")
    h = tmp_path / "h.json"
    h.write_text(io.dumps({"from_functor": "id.json", "to_functor": "id.json", "components": []}), encoding="utf-8")
    assert run(capsys, "homotopy-check", str(h), "--max-arity", "3")[0] == 0
    h.write_text(io.dumps({"from_functor": "id.json", "to_functor": "F.json", "components": []}), encoding="utf-8")
    code, rep = run(capsys, "homotopy-check", str(h), "--max-arity", "3")
    assert code == 2 and "SourceTargetMismatch" in rep["violations"][0]["detail"]


def test_parse_degrees():
    assert parse_degrees("-2..1") == [-2, -1, 0, 1]
    assert parse_degrees("3") == [3]


def test_module_entry_point(tmp_path, a2_file):
    proc = subprocess.run(
        [sys.executable, "-m", "ainfty", "verify", str(a2_file)], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and proc.stdout.startswith("PASS verify")
    assert Path(a2_file).exists()
