import json
from fractions import Fraction

import pytest

from billiardknots.braids import toric_pattern
from billiardknots.cli import main
from billiardknots.errors import SpecFileError
from billiardknots.invariants import pattern_jones
from billiardknots.pipeline import RealizationSpec
from billiardknots.presets import PRESETS, preset_listing
from billiardknots.serialization import verify_artifacts, write_artifacts
from billiardknots.stars import build_star, star_diagram_json


def test_spec_validation_errors():
    with pytest.raises(SpecFileError):
        RealizationSpec.from_dict(
            {"pattern": {"strands": 1, "repetitions": 3, "signs": []}}
        )
    with pytest.raises(SpecFileError):
        RealizationSpec.from_dict({"preset": "trefoil", "pattern": {}})
    with pytest.raises(SpecFileError):
        RealizationSpec.from_dict({})
    with pytest.raises(SpecFileError):
        RealizationSpec.from_dict({"preset": "not-a-preset"})
    with pytest.raises(SpecFileError):
        RealizationSpec.from_dict({"preset": "trefoil", "delta": "0"})
    with pytest.raises(SpecFileError):
        RealizationSpec.from_dict(
            {"pattern": {"strands": 2, "repetitions": 2, "signs": [[1], [2]]}}
        )
    with pytest.raises(SpecFileError):
        RealizationSpec.from_dict({"preset": "trefoil", "margin": 0.6})


def test_spec_from_dict_defaults_and_overrides():
    spec = RealizationSpec.from_dict({"preset": "trefoil"}, {"seed": 7, "f_max": 99})
    assert spec.seed == 7
    assert spec.f_max == 99
    assert spec.delta == Fraction(1, 1000)
    assert spec.pattern == PRESETS["trefoil"]


def test_presets_listing_contents(capsys):
    lines = preset_listing()
    assert len(lines) == 9
    joined = "\n".join(lines)
    assert "figure-eight: (3,2) padded to (3,8)" in joined
    assert any("star-9-3" in ln and "3-component link" in ln for ln in lines)
    assert main(["presets"]) == 0
    out = capsys.readouterr().out
    assert out.strip().count("\n") == 8


def test_star_10_3_diagram_export_matches_figure():
    data = star_diagram_json(build_star(10, 3))
    assert len(data["vertices"]) == 10
    assert len(data["crossings"]) == 20
    assert len(data["components"]) == 1


def _write_spec(tmp_path, payload, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


def test_cli_realize_verify_round_trip(tmp_path, torus25_result, capsys):
    spec = _write_spec(tmp_path, {"preset": "torus-2-5", "seed": 42})
    out = tmp_path / "out"
    assert main(["realize", str(spec), "--out", str(out), "--canonical"]) == 0
    for name in ("report.json", "trajectory.json", "table.json", "diagram.json",
                 "diagram.svg", "prism.obj"):
        assert (out / name).exists(), name
    capsys.readouterr()
    assert main(["verify", str(out / "report.json")]) == 0
    printed = capsys.readouterr().out
    assert "certify: pass" in printed

    report = json.loads((out / "report.json").read_text())
    assert report["certified"] is True
    assert report["spec"]["seed"] == 42
    assert "timings" not in report
    assert report["stages"]["certify"] == "pass"
    assert all(len(c["passages"]) == 2 for c in report["crossings"])
    expected = {str(e): c for e, c in pattern_jones(toric_pattern(2, 5)).items()}
    assert report["jones"]["constructed"] == expected
    assert report["jones"]["intended"] == expected

    svg = (out / "diagram.svg").read_text()
    assert svg.startswith("<svg") and "<path" in svg
    table = json.loads((out / "table.json").read_text())
    n_floor = len(table["floor"])
    obj_lines = (out / "prism.obj").read_text().splitlines()
    assert sum(1 for ln in obj_lines if ln.startswith("v ")) == 2 * n_floor
    assert sum(1 for ln in obj_lines if ln.startswith("f ")) == n_floor + 2


def test_cli_determinism(tmp_path):
    spec = _write_spec(tmp_path, {"preset": "unknot", "seed": 5})
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["realize", str(spec), "--out", str(out1), "--canonical"]) == 0
    assert main(["realize", str(spec), "--out", str(out2), "--canonical"]) == 0
    assert (out1 / "report.json").read_bytes() == (out2 / "report.json").read_bytes()
    assert (out1 / "trajectory.json").read_bytes() == (out2 / "trajectory.json").read_bytes()


def test_cli_spec_errors(tmp_path):
    bad = _write_spec(tmp_path, {"pattern": {"strands": 1, "repetitions": 3, "signs": []}})
    assert main(["realize", str(bad)]) == 3
    trunc = tmp_path / "trunc.json"
    trunc.write_text('{"preset": "tref')
    assert main(["realize", str(trunc)]) == 3
    assert main(["verify", str(trunc)]) == 3


def test_cli_search_exhaustion_exit_code(tmp_path):
    # margin 0.45 forces crossing heights into a band thinner than their
    # required separation: unsatisfiable, so the search must exhaust
    spec = _write_spec(tmp_path, {"preset": "torus-2-5", "seed": 42, "margin": 0.45, "f_max": 3})
    assert main(["realize", str(spec), "--out", str(tmp_path / "x")]) == 2


def test_cli_verify_detects_corruption(tmp_path, capsys):
    spec = _write_spec(tmp_path, {"preset": "torus-2-5", "seed": 42})
    out = tmp_path / "out"
    assert main(["realize", str(spec), "--out", str(out), "--canonical"]) == 0
    traj_path = out / "trajectory.json"
    data = json.loads(traj_path.read_text())
    data["components"][0]["points"][0][2] = "0.77777"
    traj_path.write_text(json.dumps(data))
    capsys.readouterr()
    assert main(["verify", str(out / "report.json")]) == 4
    printed = capsys.readouterr()
    assert "reflection law violated" in printed.out + printed.err


def test_cli_verify_detects_flipped_crossing(tmp_path, capsys):
    spec = _write_spec(tmp_path, {"preset": "torus-2-5", "seed": 42})
    out = tmp_path / "out"
    assert main(["realize", str(spec), "--out", str(out), "--canonical"]) == 0
    traj_path = out / "trajectory.json"
    data = json.loads(traj_path.read_text())
    ch = data["crossing_heights"][0]
    ch["z_a"], ch["z_b"] = ch["z_b"], ch["z_a"]  # flip one over/under
    traj_path.write_text(json.dumps(data))
    capsys.readouterr()
    assert main(["verify", str(out / "report.json")]) == 4
    printed = capsys.readouterr()
    assert "certify: FAIL" in printed.out


def test_verify_artifacts_reports_checks(tmp_path, trefoil_result):
    files = write_artifacts(trefoil_result, tmp_path / "t", canonical=True)
    outcome = verify_artifacts(files["report"])
    assert outcome.passed
    assert [name for name, _, _ in outcome.checks] == [
        "mirror_room_check", "verify_reflection", "certify",
    ]


def test_pipeline_records_stages(torus25_result):
    stages = set(torus25_result.stage_seconds)
    assert {"pad", "star", "perturb", "table", "arcs",
            "independence", "heights", "emit", "reflection", "certify"} <= stages
    assert torus25_result.passed
