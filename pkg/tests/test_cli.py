import json
import shutil
import subprocess
import sys
from importlib.resources import files
from pathlib import Path

import pytest

from scenespec.cli import main

CORPUS = Path(str(files("scenespec.corpus")))
TABLE_CUBE = str(CORPUS / "table_cube.prs")


@pytest.fixture
def workdir(tmp_path):
    for name in ("table_cube.prs", "models.pm"):
        shutil.copy(CORPUS / name, tmp_path / name)
    return tmp_path


def test_check_ok(capsys):
    assert main(["check", TABLE_CUBE]) == 0
    assert "7 objects" in capsys.readouterr().out


def test_check_unknown_class(workdir, capsys):
    spec = workdir / "bad.prs"
    spec.write_text("t = Table\nx = Sphere on t\n")
    assert main(["check", str(spec)]) == 2
    err = capsys.readouterr().err
    assert "Sphere" in err and "2:5" in err


def test_check_syntax_error(workdir, capsys):
    spec = workdir / "bad.prs"
    spec.write_text("t = Table on\n")
    assert main(["check", str(spec)]) == 1
    assert capsys.readouterr().err.startswith("error: 1:")


def test_check_empty_region_lists_specifiers(workdir, capsys):
    spec = workdir / "empty.prs"
    spec.write_text(
        "c = Cube in Cuboid(V3D(0,0,0), V3D(0,1,0), V3D(1,1,1)),\n"
        "    in Cuboid(V3D(3,0,0), V3D(0,1,0), V3D(1,1,1))\n"
    )
    assert main(["check", str(spec)]) == 2
    err = capsys.readouterr().err
    assert err.count("in Cuboid") == 2 and "line 1" in err


def test_check_missing_file(tmp_path):
    assert main(["check", str(tmp_path / "nope.prs")]) == 3
    assert main(["check", TABLE_CUBE, "--models", str(tmp_path / "nope.pm")]) == 3


def test_bad_workspace():
    assert main(["check", TABLE_CUBE, "--workspace", "1,2,3"]) == 2


def test_tight_workspace_makes_region_empty(capsys):
    # the table top (z = 0.8) lies above this workspace, so nothing can rest on it
    assert main(["check", TABLE_CUBE, "--workspace=-0.5,-0.5,-0.5,0.5,0.5,0.5"]) == 2
    assert "tr_1" in capsys.readouterr().err


def test_generate_and_validate(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["generate", TABLE_CUBE, "--n", "5", "--seed", "42", "--out", str(out)]) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == ["scene_0.json", "scene_1.json", "scene_2.json", "scene_3.json", "scene_4.json", "stats.json"]
    assert json.loads((out / "scene_3.json").read_text())["seed"] == 45
    stats = json.loads((out / "stats.json").read_text())
    assert stats["scenes_emitted"] == 5 and stats["scenes_requested"] == 5
    capsys.readouterr()
    for k in range(5):
        assert main(["validate", TABLE_CUBE, str(out / f"scene_{k}.json")]) == 0
        assert json.loads(capsys.readouterr().out) == {"violations": []}


def test_generate_zero(tmp_path):
    out = tmp_path / "out"
    assert main(["generate", TABLE_CUBE, "--n", "0", "--out", str(out)]) == 0
    assert [p.name for p in out.iterdir()] == ["stats.json"]


def test_generate_repeatable(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["generate", TABLE_CUBE, "--seed", "9", "--out", str(a)]) == 0
    assert main(["generate", TABLE_CUBE, "--seed", "9", "--out", str(b)]) == 0
    assert (a / "scene_0.json").read_bytes() == (b / "scene_0.json").read_bytes()


def test_generate_retries_exhausted(workdir, capsys):
    spec = workdir / "clash.prs"
    spec.write_text("a = Cube at V3D((0, 0.01), 0, 0)\nb = Cube at V3D((0, 0.01), 0, 0)\n")
    code = main(["generate", str(spec), "--seed", "17", "--max-retries", "2", "--out", str(workdir / "o")])
    assert code == 4
    assert "seed=17" in capsys.readouterr().err


def test_validate_corrupted_and_malformed(tmp_path, capsys):
    out = tmp_path / "out"
    main(["generate", TABLE_CUBE, "--out", str(out)])
    doc = json.loads((out / "scene_0.json").read_text())
    cube = next(o for o in doc["objects"] if o["name"] == "_obj0")
    cube["position"][1] += 0.5
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    capsys.readouterr()
    assert main(["validate", TABLE_CUBE, str(bad)]) == 2
    report = json.loads(capsys.readouterr().out)
    assert report["violations"][0]["reason"] == "ContainmentViolation"
    assert report["violations"][0]["objects"] == ["_obj0"]

    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert main(["validate", TABLE_CUBE, str(broken)]) == 3
    assert main(["validate", TABLE_CUBE, str(tmp_path / "missing.json")]) == 3


def test_validate_wrong_spec(tmp_path, workdir):
    out = tmp_path / "out"
    main(["generate", TABLE_CUBE, "--out", str(out)])
    other = workdir / "one.prs"
    other.write_text("c = Cube\n")
    assert main(["validate", str(other), str(out / "scene_0.json")]) == 2


def test_baseline_report(capsys):
    assert main(["baseline", TABLE_CUBE, "--n", "3", "--seed", "1"]) == 0
    report = json.loads(capsys.readouterr().out)
    rows = {"ObjectCollision", "RelativePositionViolation", "ContainmentViolation", "Total"}
    assert set(report["naive"]) == rows and set(report["engine"]) == rows
    assert report["naive"]["Total"] == pytest.approx(
        sum(v for k, v in report["naive"].items() if k != "Total")
    )


def test_baseline_unconstrained_and_single(workdir, capsys):
    spec = workdir / "free.prs"
    spec.write_text("c = Cube\n")
    assert main(["baseline", str(spec), "--n", "1"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["naive"]["Total"] == 0 and report["engine"]["Total"] == 0


def test_baseline_budget_exhausted(workdir):
    spec = workdir / "never.prs"
    spec.write_text("c = Cube at V3D(5, 0, 0), in Cuboid(V3D(0,0,0), V3D(0,1,0), V3D(1,1,1))\n")
    # every naive draw lands at x=5, outside the cuboid
    assert main(["baseline", str(spec), "--n", "1", "--budget", "5"]) == 4


def test_console_script_and_stdout_clean(tmp_path):
    exe = shutil.which("scenespec")
    cmd = [exe] if exe else [sys.executable, "-m", "scenespec.cli"]
    r = subprocess.run(cmd + ["check", str(tmp_path / "none.prs")], capture_output=True, text=True)
    assert r.returncode == 3 and r.stdout == "" and "cannot read" in r.stderr
