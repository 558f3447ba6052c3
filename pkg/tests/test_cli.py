import csv
import io as pyio
import math
import subprocess
import sys

import numpy as np
import pytest

from geopga import io
from geopga.cli import parse_angle, run_command

PI = math.pi


def run(*argv):
    out, err = pyio.StringIO(), pyio.StringIO()
    code = run_command([str(a) for a in argv], out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("text, value", [("5pi", 5 * PI), ("pi", PI), ("-pi/2", -PI / 2),
                                         ("2*pi", 2 * PI), ("1.25", 1.25), ("0.5pi", 0.5 * PI)])
def test_parse_angle(text, value):
    assert parse_angle(text) == value


def test_parse_angle_rejects_garbage():
    import argparse
    for text in ("", "pie", "5pi/", "x"):
        with pytest.raises(argparse.ArgumentTypeError):
            parse_angle(text)


def test_winding_pipeline(tmp_path):
    w = tmp_path / "w.traj"
    code, out, _ = run("gen", "--kind", "winding", "--angle", "5pi", "--n", 1000,
                       "--axis", "0,0,1", "--seed", 7, "-o", w)
    assert code == 0
    code, out, _ = run("lift", w, "-o", tmp_path / "w.lift")
    assert code == 0
    final = float(out.split("final_norms=[")[1].split("]")[0])
    assert abs(final - 5 * PI) <= 1e-9
    assert "crossings=[5]" in out

    code, out, _ = run("fit", tmp_path / "w.lift", "--rank", 1, "-o", tmp_path / "w.model")
    assert code == 0
    ratio = float(out.split("sigma2/sigma1=")[1].split()[0])
    assert ratio <= 1e-12

    code, out, _ = run("stats", w, tmp_path / "w.lift", "-o", tmp_path / "hist.csv",
                       "--angular", tmp_path / "ang.csv")
    assert code == 0
    with open(tmp_path / "hist.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["bin_lo", "bin_hi", "count"]
    assert sum(int(r["count"]) for r in rows) == 1001
    with open(tmp_path / "ang.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["theta", "error"] and len(rows) == 1001

    code, out, _ = run("reconstruct", tmp_path / "w.model", "-o", tmp_path / "r.traj")
    assert code == 0
    _, X = io.parse_trajectory(io.read_text(w))
    _, Y = io.parse_trajectory(io.read_text(tmp_path / "r.traj"))
    assert np.abs(Y - X[1:]).max() <= 1e-10


def test_mean_command(tmp_path):
    for seed in (1, 2):
        assert run("gen", "--kind", "geodesic", "--manifold", "S2", "--angle", 0.5, "--n", 20,
                   "--seed", seed, "-o", tmp_path / f"{seed}.traj")[0] == 0
    code, out, _ = run("mean", tmp_path / "1.traj", tmp_path / "2.traj", "--tol", 1e-13,
                       "-o", tmp_path / "m.traj", "--lift-output", tmp_path / "m.lift")
    assert code == 0 and "iterations=" in out
    layout, M = io.parse_trajectory(io.read_text(tmp_path / "m.traj"))
    assert M.shape == (1, 3)
    lift = io.parse_lift(io.read_text(tmp_path / "m.lift"))
    assert len(lift) == 42
    assert run("fit", tmp_path / "m.lift", "--keep-first", "-o", tmp_path / "m.model")[0] == 0


def test_stats_without_lift_and_orth_metric(tmp_path):
    t = tmp_path / "t.traj"
    run("gen", "--kind", "random-walk", "--n", 50, "-o", t)
    code, out, _ = run("stats", t)
    assert code == 0 and "metric=log" in out
    code, out, _ = run("stats", t, "--metric", "orth")
    assert code == 0 and "metric=orth" in out
    code, _, err = run("stats", t, "--metric", "lift")
    assert code == 3 and err.startswith("error: validation:")


def test_projection_warning(tmp_path):
    R = np.eye(3)
    R[0, 1] = 1e-6
    path = tmp_path / "p.traj"
    io.write_text(path, io.serialize_trajectory(R.reshape(1, 9), "SO3"))
    code, out, _ = run("lift", path, "-o", tmp_path / "p.lift")
    assert code == 0 and "projected 1 component" in out


def test_exit_codes(tmp_path):
    assert run("bogus")[0] == 2
    assert run("gen", "--kind", "winding", "--bogus-flag", "-o", tmp_path / "x")[0] == 2
    assert run("gen", "--n", 0, "-o", tmp_path / "x")[0] == 3
    code, _, err = run("lift", tmp_path / "missing.traj", "-o", tmp_path / "x")
    assert code == 3 and err.count("\n") == 1
    bad = tmp_path / "bad.traj"
    bad.write_text("pga-traj 1\nlayout S2\n1\n0 0 x\n")
    code, _, err = run("lift", bad, "-o", tmp_path / "x")
    assert code == 3 and "line 4" in err
    anti = tmp_path / "anti.traj"
    anti.write_text("pga-traj 1\nlayout S2\n2\n0 0 1\n0 0 -1\n")
    code, _, err = run("lift", anti, "-o", tmp_path / "x")
    assert code == 4 and err.startswith("error: numerical:")
    w = tmp_path / "w.traj"
    run("gen", "--angle", "5pi", "-o", w)
    code, _, err = run("mean", w, "-o", tmp_path / "m")
    assert code == 4


def test_commands_are_deterministic(tmp_path):
    for name in ("a", "b"):
        run("gen", "--kind", "noisy", "--manifold", "SO3", "--seed", 99, "-o", tmp_path / f"{name}.traj")
        run("lift", tmp_path / f"{name}.traj", "-o", tmp_path / f"{name}.lift")
    assert (tmp_path / "a.traj").read_bytes() == (tmp_path / "b.traj").read_bytes()
    assert (tmp_path / "a.lift").read_bytes() == (tmp_path / "b.lift").read_bytes()


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "geopga", "gen", "--n", "3", "-o",
                          str(tmp_path / "e.traj")], capture_output=True, text=True)
    assert res.returncode == 0
    res = subprocess.run([sys.executable, "-m", "geopga"], capture_output=True, text=True)
    assert res.returncode == 2
