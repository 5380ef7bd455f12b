import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from fractalfn import io
from fractalfn.cli import main

CONFIGS = Path(__file__).resolve().parents[1] / "demos" / "configs"


def run(mode, cfg, out, *extra):
    return main([mode, "--config", str(CONFIGS / cfg), "--out", str(out), *extra])


def report(out):
    rows = (Path(out) / "report.txt").read_text().splitlines()
    return dict(r.split(" = ", 1) for r in rows if " = " in r)


def test_solve_outputs(tmp_path, capsys):
    assert run("solve", "solve_binary.cfg", tmp_path) == 0
    rep = report(tmp_path)
    assert rep["exit"] == "0" and float(rep["final_residual"]) <= 1e-10
    assert "mode = solve" in capsys.readouterr().out
    data = np.loadtxt(tmp_path / "fixed_point.csv", delimiter=",")
    assert np.max(np.abs(data[:, 1] - data[:, 0])) <= 1e-9  # identity system: f(x) = x
    assert (tmp_path / "graph.pgm").read_text().startswith("P2")
    assert len((tmp_path / "residuals.csv").read_text().splitlines()) == int(rep["iterations"])


def test_check_failure_exit_2(tmp_path):
    assert run("check", "check_c1_fail.cfg", tmp_path) == 2
    rows = (tmp_path / "report.txt").read_text().splitlines()
    lhs = [float(r.split(" = ")[1]) for r in rows if r.startswith("lhs = ")]
    assert lhs[0] == pytest.approx(1.2) and rows[-1] == "exit = 2"


def test_config_error_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("mode = solve\nN = 2\nlambda = 0\nS = 1.5\n")
    assert main(["solve", "--config", str(bad), "--out", str(tmp_path / "o")]) == 1
    assert "line 4" in capsys.readouterr().err


def test_missing_file_exit_1(tmp_path):
    assert main(["solve", "--config", str(tmp_path / "nope.cfg")]) == 1


def test_unknown_mode_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["dance", "--config", "x"])
    assert exc.value.code == 2


def test_interp_reports_knots(tmp_path):
    assert run("interp", "interp_affine.cfg", tmp_path) == 0
    rep = report(tmp_path)
    assert float(rep["max_knot_error"]) <= 1e-9 and rep["interpolates"] == "true"


def test_grid_override(tmp_path):
    assert run("solve", "solve_binary.cfg", tmp_path, "--grid", "64") == 0
    assert report(tmp_path)["grid"] == "64"
    assert len((tmp_path / "fixed_point.csv").read_text().splitlines()) == 65


def test_attract_corner(tmp_path):
    assert run("attract", "corner_attract.cfg", tmp_path) == 0
    rep = report(tmp_path)
    img = io.read_pgm(tmp_path / "attractor.pgm")
    assert img.shape == (512, 512) and (img == 255).sum() == int(rep["cells"])
    assert len((tmp_path / "attractor.csv").read_text().splitlines()) == int(rep["cells"])


def test_graph_ifs(tmp_path):
    assert run("graph-ifs", "graph_ifs.cfg", tmp_path) == 0
    rep = report(tmp_path)
    assert float(rep["q"]) < 1 and float(rep["invariance_distance"]) <= float(rep["invariance_threshold"])


def test_tensor(tmp_path):
    assert run("tensor", "tensor.cfg", tmp_path) == 0
    V = np.loadtxt(tmp_path / "surface.csv", delimiter=",")
    assert V.shape == (65, 65)
    assert (tmp_path / "surface_pgm.txt").exists()


@pytest.mark.parametrize(
    "mode, cfg",
    [("solve", "solve_binary.cfg"), ("attract", "corner_attract.cfg"), ("tensor", "tensor.cfg")],
)
def test_byte_identical_reruns(tmp_path, mode, cfg):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(mode, cfg, a, "--seed", "3") == run(mode, cfg, b, "--seed", "3")
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes(), n


def test_seed_changes_random_system(tmp_path):
    cfg = tmp_path / "r.cfg"
    cfg.write_text("mode = solve\nN = 2\nlambda = random\nS = random\ngrid = 32\n")
    outs = []
    for seed in ("1", "1", "2"):
        out = tmp_path / f"o{len(outs)}"
        assert main(["solve", "--config", str(cfg), "--out", str(out), "--seed", seed]) == 0
        outs.append((out / "fixed_point.csv").read_bytes())
    assert outs[0] == outs[1] != outs[2]


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "fractalfn.cli", "check", "--config", str(CONFIGS / "check_c1_fail.cfg"),
         "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2 and "exit = 2" in proc.stdout
