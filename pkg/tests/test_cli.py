import csv
import json
import re
import subprocess
import sys

import numpy as np
import pytest

from wavedrift.cli import RunConfig, main, parse_config
from wavedrift.errors import ConfigError

SMALL = ["--set", "nq=64", "--set", "np=32"]


def run(tmp_path, command, *args):
    out = tmp_path / command
    code = main(["--out", str(out), *args, command])
    return code, out


def load(path):
    return json.loads(path.read_text())


def test_defaults():
    cfg = parse_config()
    assert cfg == RunConfig()
    assert cfg.g == 9.81 and cfg.p0 == -1.0 and (cfg.nq, cfg.np) == (128, 64)
    assert cfg.gamma == [] and cfg.max_iter == 8 and cfg.tol == 1e-10


def test_config_file_and_overrides(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"gamma": [-0.1], "nq": 64}))
    cfg = parse_config(str(path), ["np=32", "solution_format=bin"])
    assert cfg.gamma == [-0.1] and (cfg.nq, cfg.np) == (64, 32) and cfg.solution_format == "bin"


@pytest.mark.parametrize("override,key", [("p0=0.5", "p0"), ("nq=63", "nq"), ("g=-1", "g"),
                                          ("gamma=[\"x\"]", "gamma"), ("foo=1", "foo"),
                                          ("solution_format=hdf5", "solution_format")])
def test_config_errors_name_the_key(tmp_path, capsys, override, key):
    with pytest.raises(ConfigError) as info:
        parse_config(None, [override])
    assert key in str(info.value)
    code, _ = run(tmp_path, "bifurcate", "--set", override)
    assert code == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ConfigError" and key in err["message"]


def test_bifurcate(tmp_path):
    code, out = run(tmp_path, "bifurcate")
    assert code == 0
    data = load(out / "bifurcation.json")
    lam = data["lambda"]
    assert abs(9.81 * lam**2 * np.tanh(lam) - 1) < 1e-8
    assert data["d"] == pytest.approx(lam, abs=1e-12) and data["c"] == pytest.approx(1 / lam, rel=1e-12)
    assert data["k"] == 1
    assert load(out / "effective_config.json")["g"] == 9.81


def test_bifurcation_failure_writes_error(tmp_path, capsys):
    code, out = run(tmp_path, "bifurcate", "--set", "lambda_bracket=[0.6, 1.0]")
    assert code == 3
    err = load(out / "error.json")
    assert err["error"] == "NoBifurcationError" and "no bifurcation in bracket" in err["message"]
    assert json.loads(capsys.readouterr().err) == err


def test_laminar_command(tmp_path):
    code, out = run(tmp_path, "laminar", "--set", "gamma=[-0.3]", "--set", "lam=1.0")
    assert code == 0
    data = load(out / "laminar.json")
    assert data["d"] == pytest.approx((np.sqrt(0.4) - 1) / -0.3, abs=1e-12)
    with open(out / "dispersion_scan.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["lambda", "residual"] and len(rows) == 42


def test_solve_writes_branch(tmp_path):
    code, out = run(tmp_path, "solve", *SMALL, "--set", "solution_format=bin")
    assert code == 0
    branch = load(out / "branch.json")
    n = len(branch["solutions"])
    assert n >= 3
    for rec in branch["solutions"]:
        assert rec["residual_norm"] < 1e-10 and rec["iterations"] <= 8
    h = np.fromfile(out / f"h_{n - 1:03d}.bin", dtype="<f8").reshape(load(out / f"frame_{n - 1:03d}.json")["shape"])
    assert h.shape == (64, 33) and np.all(h[:, 0] == 0)


def test_verify_passes(tmp_path):
    code, out = run(tmp_path, "verify", *SMALL)
    assert code == 0
    summary = load(out / "verify.json")
    assert summary["overall"] == "pass"
    assert all(r["failed"] == [] for r in summary["reports"])


def test_verify_zero_amplitude(tmp_path):
    code, out = run(tmp_path, "verify", "--set", "a_max=0")
    assert code == 0
    report = load(out / "report_000.json")
    assert report["overall"] == "pass" and report["meta"]["trivial_wave"] is True


def test_trace(tmp_path):
    code, out = run(tmp_path, "trace", *SMALL)
    assert code == 0
    summary = load(out / "trace_summary.json")
    assert len(summary) == 3
    for s in summary:
        assert abs(s["drift"] - s["drift_quadrature"]) < 1e-6
        assert s["psi_variation"] <= 1e-8
    assert summary[0]["p"] == -1.0 and summary[2]["p"] == pytest.approx(0.0, abs=1e-12)


def _attrs(tag):
    return dict(re.findall(r'([\w-]+)="([^"]*)"', tag))


def test_plot_arrows_and_surface(tmp_path):
    code, out = run(tmp_path, "plot", *SMALL)
    assert code == 0
    svg = (out / "figure1.svg").read_text()
    arrows = [_attrs(t) for t in re.findall(r"<line [^>]*>", svg) if 'class="arrow"' in t]
    assert arrows
    inside = [a for a in arrows if 0.05 < float(a["data-x"]) < np.pi - 0.05]
    assert inside and all(float(a["data-v"]) > 0 for a in inside)
    surface = _attrs(re.search(r'<polyline class="surface"[^>]*>', svg).group(0))
    pts = np.array([[float(v) for v in pt.split(",")] for pt in surface["points"].split()])
    # svg y grows downward: crest is the smallest y, found at x = 0; trough at x = pi
    xs = pts[:, 0]
    assert xs[np.argmin(pts[:, 1])] == pytest.approx(np.interp(0.0, [-np.pi, np.pi], [xs.min(), xs.max()]), abs=1.0)
    assert xs[np.argmax(pts[:, 1])] in (xs.min(), xs.max())
    fig2 = (out / "figure2.svg").read_text()
    drift = [float(_attrs(t)["data-drift"]) for t in re.findall(r"<circle [^>]*>", fig2)]
    assert len(drift) == 33 and all(d > 0 for d in drift[1:])


def test_rerun_from_effective_config_is_identical(tmp_path):
    code, first = run(tmp_path, "verify", *SMALL, "--set", "gamma=[-0.1]")
    assert code == 0
    second = tmp_path / "again"
    assert main(["--config", str(first / "effective_config.json"), "--out", str(second), "verify"]) == 0
    for name in ("verify.json", "report_000.json", "report_002.json", "effective_config.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_sweep(tmp_path):
    code, out = run(tmp_path, "sweep", *SMALL, "--set", "sweep_gammas=[[], [-0.1], [-0.6]]")
    jobs = load(out / "sweep.json")["jobs"]
    assert [j["status"] for j in jobs] == ["pass", "pass", "solver failed"]
    assert code == 3
    assert (out / "job_00" / "verify.json").exists()
    assert load(out / "job_02" / "error.json")["error"] == "StagnationError"


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "wavedrift.cli", "--out", str(tmp_path), "bifurcate"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert (tmp_path / "bifurcation.json").exists()
