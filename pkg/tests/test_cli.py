"""Command-line surface: exit codes, report files, tolerance plumbing.

Everything calls main() in process; exit codes are the contract (0 consistent
or completed, 2 hypothesis-violated / not a pole, 3 conclusion-violated,
1 usage, I/O, or geometry errors).
"""

import json

import numpy as np
import pytest

from ellipsoid_forge import Ellipsoid, PBall, save_body
from ellipsoid_forge.cli import main


@pytest.fixture(scope="module")
def specs(tmp_path_factory):
    root = tmp_path_factory.mktemp("bodies")
    paths = {}

    def put(name, body):
        p = root / (name + ".body")
        save_body(body, str(p))
        paths[name] = str(p)

    put("ball1", Ellipsoid.ball(1.0))
    put("ball2", Ellipsoid.ball(2.0))
    put("ball_half", Ellipsoid.ball(0.5))
    put("ellipsoid", Ellipsoid(np.zeros(3), np.diag([1.0, 4.0, 9.0])))
    put("l4", PBall(4.0, (1.0, 1.0, 1.0)))
    put("l4_double", PBall(4.0, (2.0, 2.0, 2.0)))
    bad = root / "broken.body"
    bad.write_text("ellipsoid-forge-body v1\nkind banana\n")
    paths["broken"] = str(bad)
    return paths


def test_validate_good_specs(specs, capsys):
    assert main(["body", "validate", specs["ball1"], specs["l4"]]) == 0
    out = capsys.readouterr().out
    assert out.count(": ok") == 2
    assert "kind ellipsoid" in out and "kind pball" in out


def test_validate_flags_broken_spec(specs, capsys):
    assert main(["body", "validate", specs["ball1"], specs["broken"]]) == 1
    captured = capsys.readouterr()
    assert "INVALID" in captured.err
    assert ": ok" in captured.out  # the good one is still reported


def test_check_t1_exit_zero_and_report(specs, tmp_path, capsys):
    r1 = tmp_path / "a.json"
    r2 = tmp_path / "b.json"
    argv = ["check", "t1", "--inner", specs["ellipsoid"],
            "--outer", specs["ball2"], "--apexes", "6", "--m", "32",
            "--pairs", "3"]
    assert main(argv + ["--report", str(r1)]) == 0
    assert main(argv + ["--report", str(r2)]) == 0
    assert r1.read_bytes() == r2.read_bytes()
    doc = json.loads(r1.read_text())
    assert doc["schema"] == "ellipsoid-forge/report-v1"
    assert doc["verdict"] == "consistent"
    out = capsys.readouterr().out
    assert "verdict consistent" in out
    assert "[pass] hypothesis inner-o-symmetry" in out


def test_check_seed_changes_report(specs, tmp_path):
    r1, r2 = tmp_path / "s0.json", tmp_path / "s7.json"
    argv = ["check", "radon", "--body", specs["ellipsoid"], "--planes", "2",
            "--diameters", "32"]
    assert main(argv + ["--seed", "0", "--report", str(r1)]) == 0
    assert main(argv + ["--seed", "7", "--report", str(r2)]) == 0
    a, b = json.loads(r1.read_text()), json.loads(r2.read_text())
    assert a["seed"] == 0 and b["seed"] == 7
    assert a["verdict"] == b["verdict"] == "consistent"


def test_check_t4_hypothesis_violation_exits_two(specs, capsys):
    code = main(["check", "t4", "--body", specs["l4_double"],
                 "--ball-radius", "1.0", "--samples", "6", "--m", "32"])
    assert code == 2
    assert "verdict hypothesis-violated" in capsys.readouterr().out


def test_forced_conclusion_violation_exits_three(specs, capsys):
    # an impossible ellipse gate fails the conclusion while hypotheses pass
    code = main(["check", "radon", "--body", specs["ellipsoid"],
                 "--planes", "2", "--diameters", "32",
                 "--tol", "ellipse=1e-30"])
    assert code == 3
    assert "verdict conclusion-violated" in capsys.readouterr().out


def test_check_pole_ball(specs, tmp_path, capsys):
    report = tmp_path / "pole.json"
    code = main(["check", "pole", "--body", specs["ball1"],
                 "--point", "2,0,0", "--report", str(report)])
    assert code == 0
    out = capsys.readouterr().out
    assert "classification projective hyperplane of symmetry" in out
    assert "graze-polar-agreement" in out
    doc = json.loads(report.read_text())
    assert doc["theorem"] == "pole"
    assert doc["polar"]["normal"][0] == pytest.approx(1.0)
    assert doc["polar"]["offset"] == pytest.approx(0.5, abs=1e-9)


def test_check_pole_center_at_infinity(specs, capsys):
    code = main(["check", "pole", "--body", specs["ball1"],
                 "--point", "0,0,0"])
    assert code == 0
    assert "classification projective centre" in capsys.readouterr().out


def test_check_pole_l4_exits_two(specs, capsys):
    code = main(["check", "pole", "--body", specs["l4"], "--point", "2,0,0"])
    assert code == 2
    assert "classification not a pole" in capsys.readouterr().out


def test_tolerance_env_and_flag_precedence(specs, monkeypatch):
    monkeypatch.setenv("ELLIPSOID_FORGE_TOLERANCES", "pole=1e-20")
    assert main(["check", "pole", "--body", specs["ball1"],
                 "--point", "2,0,0"]) == 2
    # the command line wins over the environment profile
    assert main(["check", "pole", "--body", specs["ball1"],
                 "--point", "2,0,0", "--tol", "pole=1e-3"]) == 0


def test_bad_tolerance_inputs(specs, capsys, monkeypatch):
    assert main(["check", "radon", "--body", specs["ellipsoid"],
                 "--tol", "bogus=1"]) == 1
    assert "unknown tolerance keys" in capsys.readouterr().err
    assert main(["check", "radon", "--body", specs["ellipsoid"],
                 "--tol", "pole"]) == 1
    monkeypatch.setenv("ELLIPSOID_FORGE_TOLERANCES", "wat=1e-3")
    assert main(["check", "radon", "--body", specs["ellipsoid"]]) == 1


def test_sample_graze_csv(specs, tmp_path, capsys):
    out = tmp_path / "graze.csv"
    code = main(["sample", "graze", "--body", specs["ball1"],
                 "--apex", "2,0,0", "--m", "32", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x1,x2,x3,residual"
    rows = np.array([[float(t) for t in ln.split(",")] for ln in lines[1:]])
    assert rows.shape == (32, 4)
    assert np.abs(rows[:, 0] - 0.5).max() < 1e-10
    meta = json.loads((tmp_path / "graze.csv.meta.json").read_text())
    assert meta["curve"] == "graze"
    assert "wrote 32 points" in capsys.readouterr().out


def test_sample_section_circle(specs, tmp_path):
    out = tmp_path / "sec.csv"
    code = main(["sample", "section", "--body", specs["ball1"],
                 "--normal", "0,0,1", "--offset", "0.0", "--m", "24",
                 "--out", str(out)])
    assert code == 0
    rows = np.array([[float(t) for t in ln.split(",")]
                     for ln in out.read_text().splitlines()[1:]])
    radii = np.linalg.norm(rows[:, :3], axis=1)
    assert np.abs(radii - 1.0).max() < 1e-9
    assert np.abs(rows[:, 2]).max() < 1e-12


def test_sample_missing_flags_exit_one(specs, tmp_path, capsys):
    assert main(["sample", "omega", "--body", specs["ball1"],
                 "--apex", "2,0,0", "--out", str(tmp_path / "x.csv")]) == 1
    assert "needs --apex and --apex2" in capsys.readouterr().err
    assert main(["sample", "graze", "--body", specs["ball1"],
                 "--apex", "2;0;0", "--out", str(tmp_path / "y.csv")]) == 1


def test_geometry_error_exits_one(specs, capsys):
    code = main(["check", "t1", "--inner", specs["ball2"],
                 "--outer", specs["ball1"]])
    assert code == 1
    assert "BodiesNotNested" in capsys.readouterr().err


def test_missing_file_exits_one(capsys):
    assert main(["check", "radon", "--body", "/nonexistent.body"]) == 1
    assert "error" in capsys.readouterr().err


def test_usage_error_exits_one(capsys):
    assert main(["check", "t1", "--inner", "only-this"]) == 1
    captured = capsys.readouterr()
    assert "usage" in captured.err


def test_sweep_radon_over_exponents(specs, tmp_path, capsys):
    report = tmp_path / "sweep.json"
    code = main(["sweep", "--check", "radon", "--exponents", "1.6:2.4:3",
                 "--planes", "2", "--diameters", "32",
                 "--report", str(report)])
    assert code == 0
    out = capsys.readouterr().out
    assert out.count("exponent") == 3
    doc = json.loads(report.read_text())
    verdicts = {row["exponent"]: row["verdict"] for row in doc["rows"]}
    assert verdicts[2.0] == "consistent"
    assert verdicts[1.6] == "hypothesis-violated"
    assert verdicts[2.4] == "hypothesis-violated"
