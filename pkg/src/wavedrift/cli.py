"""Command-line driver.

    wavedrift [--config FILE] [--set key=value ...] [--out DIR] COMMAND

Commands: laminar, bifurcate, solve, trace, verify, plot, sweep.  Every run
writes ``effective_config.json`` to the output directory; feeding it back
with ``--config`` reproduces the same artifacts byte for byte.

Exit codes: 0 success, 2 configuration error, 3 solver failure,
4 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .core import VorticitySpec, WaveParameters
from .errors import ConfigError, StagnationError, WaveError
from .fields import derive_frame
from .kinematics import (integrate_trajectory, streamline, traversal_and_drift,
                         write_drift_json, write_streamline_csv, write_trajectory_csv)
from .laminar import dispersion_residual, find_bifurcation, solve_laminar
from .plots import drift_figure, streamline_figure
from .solver import continue_branch, solution_diagnostics
from .verify import run_all

log = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_VERIFY = 0, 2, 3, 4
COMMANDS = ("laminar", "bifurcate", "solve", "trace", "verify", "plot", "sweep")


@dataclass
class RunConfig:
    gamma: list = field(default_factory=list)
    g: float = 9.81
    p0: float = -1.0
    nq: int = 128
    np: int = 64
    a_max: float | None = None  # default 0.01 d
    da: float | None = None  # default 0.005 d
    tol: float = 1e-10
    max_iter: int = 8
    lambda_bracket: list = field(default_factory=lambda: [0.1, 1.0])
    lam: float | None = None  # laminar command; default is the bifurcation value
    scan_points: int = 41
    trace_starts: list | None = None  # [[x, y], ...]; default x = 0 at bed, mid-depth, surface
    trace_duration: float | None = None
    trace_dt: float | None = None
    plot_streamlines: bool = True
    plot_drift: bool = True
    solution_format: str = "csv"
    sweep_gammas: list = field(default_factory=lambda: [[], [-0.1]])

    def params(self):
        return WaveParameters(g=self.g, p0=self.p0, nq=self.nq, np_=self.np)

    def vorticity(self, coeffs=None):
        return VorticitySpec(tuple(self.gamma if coeffs is None else coeffs), -self.p0)


def _is_num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and np.isfinite(v)


def _check_gamma(key, v):
    if not isinstance(v, list) or not all(_is_num(c) for c in v):
        raise ConfigError(f"{key} must be a list of numbers", key)


def validate(cfg: RunConfig):
    """Range checks; raise ConfigError naming the offending key."""
    _check_gamma("gamma", cfg.gamma)
    for key in ("g", "p0", "tol"):
        if not _is_num(getattr(cfg, key)):
            raise ConfigError(f"{key} must be a number", key)
    if cfg.p0 >= 0:
        raise ConfigError("p0 must be negative", "p0")
    if cfg.g <= 0:
        raise ConfigError("g must be positive", "g")
    if cfg.tol <= 0:
        raise ConfigError("tol must be positive", "tol")
    for key, lo in (("nq", 16), ("np", 8), ("max_iter", 1), ("scan_points", 2)):
        v = getattr(cfg, key)
        if not isinstance(v, int) or isinstance(v, bool) or v < lo:
            raise ConfigError(f"{key} must be an integer >= {lo}", key)
    if cfg.nq % 2:
        raise ConfigError("nq must be even", "nq")
    for key in ("a_max", "trace_duration", "trace_dt", "da", "lam"):
        v = getattr(cfg, key)
        if v is None:
            continue
        if not _is_num(v):
            raise ConfigError(f"{key} must be a number or null", key)
        if v < 0 or (v == 0 and key != "a_max"):
            raise ConfigError(f"{key} must be positive", key)
    b = cfg.lambda_bracket
    if not (isinstance(b, list) and len(b) == 2 and all(_is_num(v) for v in b) and 0 < b[0] < b[1]):
        raise ConfigError("lambda_bracket must be [lo, hi] with 0 < lo < hi", "lambda_bracket")
    if cfg.trace_starts is not None:
        ok = isinstance(cfg.trace_starts, list) and all(
            isinstance(s, list) and len(s) == 2 and all(_is_num(v) for v in s) for s in cfg.trace_starts)
        if not ok:
            raise ConfigError("trace_starts must be a list of [x, y] pairs", "trace_starts")
    for key in ("plot_streamlines", "plot_drift"):
        if not isinstance(getattr(cfg, key), bool):
            raise ConfigError(f"{key} must be true or false", key)
    if cfg.solution_format not in ("csv", "bin"):
        raise ConfigError("solution_format must be 'csv' or 'bin'", "solution_format")
    if not isinstance(cfg.sweep_gammas, list) or not cfg.sweep_gammas:
        raise ConfigError("sweep_gammas must be a non-empty list", "sweep_gammas")
    for v in cfg.sweep_gammas:
        _check_gamma("sweep_gammas", v)
    return cfg


def parse_config(path=None, overrides=()) -> RunConfig:
    data = {}
    if path is not None:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}", "config") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config parse error: {exc}", "config") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object", "config")
    for item in overrides:
        key, sep, raw = item.partition("=")
        if not sep:
            raise ConfigError(f"override '{item}' is not key=value", key)
        try:
            data[key.strip()] = json.loads(raw)
        except json.JSONDecodeError:
            data[key.strip()] = raw
    known = {f.name for f in fields(RunConfig)}
    for key in data:
        if key not in known:
            raise ConfigError(f"unknown config key '{key}'", key)
    cfg = RunConfig(**data)
    # ints given as floats like 128.0 are accepted
    for key in ("nq", "np", "max_iter", "scan_points"):
        v = getattr(cfg, key)
        if isinstance(v, float) and v.is_integer():
            setattr(cfg, key, int(v))
    return validate(cfg)


def _dump_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(["" if v is None else repr(float(v)) for v in row])


# Commands ----------------------------------------------------------------------


def _bifurcation(cfg, gamma=None):
    gamma = cfg.vorticity() if gamma is None else gamma
    return find_bifurcation(gamma, cfg.p0, cfg.g, 1, tuple(cfg.lambda_bracket), cfg.np)


def _branch(cfg, gamma=None):
    gamma = cfg.vorticity() if gamma is None else gamma
    bif = _bifurcation(cfg, gamma)
    d = bif.depth
    a_max = 0.01 * d if cfg.a_max is None else cfg.a_max
    da = 0.005 * d if cfg.da is None else cfg.da
    return continue_branch(gamma, cfg.params(), a_max, da, cfg.tol, cfg.max_iter,
                           tuple(cfg.lambda_bracket), bifurcation=bif)


def cmd_laminar(cfg, out):
    gamma = cfg.vorticity()
    lam = cfg.lam if cfg.lam is not None else _bifurcation(cfg, gamma).lam
    prof = solve_laminar(gamma, cfg.p0, lam, cfg.g, cfg.np)
    _write_csv(out / "laminar_profile.csv", ["p", "H", "Hp"], zip(prof.p, prof.H, prof.Hp))
    rows = []
    for x in np.linspace(*cfg.lambda_bracket, cfg.scan_points):
        try:
            r = dispersion_residual(solve_laminar(gamma, cfg.p0, x, cfg.g, cfg.np), gamma, cfg.g)
        except StagnationError:
            r = None
        rows.append((x, r))
    _write_csv(out / "dispersion_scan.csv", ["lambda", "residual"], rows)
    _dump_json(out / "laminar.json", {"lambda": prof.lam, "d": prof.depth, "c": prof.c,
                                      "C": prof.C, "Q": prof.Q})
    return EXIT_OK


def cmd_bifurcate(cfg, out):
    bif = _bifurcation(cfg)
    prof = bif.profile
    _dump_json(out / "bifurcation.json", {"lambda": bif.lam, "d": prof.depth, "c": prof.c,
                                          "C": prof.C, "Q": prof.Q, "k": bif.k})
    return EXIT_OK


def _solution_record(i, a, sol, frame):
    diag = solution_diagnostics(sol)
    return {"index": i, "a": a, "amplitude": sol.amplitude, "Q": sol.Q, "d": frame.d, "c": frame.c,
            "C": frame.C, "iterations": sol.iterations, "residual_norm": sol.residual_norm,
            "max_slope": diag["max_slope"], "min_hp": diag["min_hp"]}


def cmd_solve(cfg, out):
    state = _branch(cfg)
    records = []
    for i, (a, sol) in enumerate(state.solutions):
        frame = derive_frame(sol)
        rec = _solution_record(i, a, sol, frame)
        records.append(rec)
        _dump_json(out / f"frame_{i:03d}.json", rec | {"shape": list(sol.h.values.shape)})
        if cfg.solution_format == "bin":
            np.ascontiguousarray(sol.h.values, dtype="<f8").tofile(out / f"h_{i:03d}.bin")
        else:
            grid = sol.params.grid
            qq, pp = grid.mesh()
            _write_csv(out / f"h_{i:03d}.csv", ["q", "p", "h"],
                       zip(qq.ravel(), pp.ravel(), sol.h.values.ravel()))
    _dump_json(out / "branch.json", {"lambda": state.bifurcation.lam, "halvings": state.halvings,
                                     "solutions": records})
    return EXIT_OK


def _default_starts(sol, frame):
    starts = []
    for p in (sol.params.p0, 0.5 * sol.params.p0, 0.0):
        y = frame.interp.evaluate(0.0, p)[0] - frame.d
        starts.append([0.0, y])
    return starts


def _trajectories(cfg, sol, frame):
    starts = cfg.trace_starts or _default_starts(sol, frame)
    return [integrate_trajectory(sol, frame, x, y, cfg.trace_duration, cfg.trace_dt) for x, y in starts]


def cmd_trace(cfg, out):
    sol = _branch(cfg).last
    frame = derive_frame(sol)
    summary = []
    for k, traj in enumerate(_trajectories(cfg, sol, frame)):
        write_trajectory_csv(out / f"trajectory_{k}.csv", traj)
        p = -float(traj.psi[0])
        write_streamline_csv(out / f"streamline_{k}.csv", streamline(sol, frame, p))
        tau_q, drift_q = traversal_and_drift(sol, frame, p)
        summary.append({"start": list(traj.start), "p": p, "tau": traj.tau, "drift": traj.drift,
                        "tau_quadrature": tau_q, "drift_quadrature": drift_q,
                        "psi_variation": float(np.ptp(traj.psi))})
    write_drift_json(out / "drift.json", sol, frame)
    _dump_json(out / "trace_summary.json", summary)
    return EXIT_OK


def _verify_branch(cfg, out, gamma=None):
    state = _branch(cfg, gamma)
    entries = []
    worst = EXIT_OK
    for i, (a, sol) in enumerate(state.solutions):
        report = run_all(sol)
        with open(out / f"report_{i:03d}.json", "w") as fh:
            fh.write(report.to_json())
        failed = [c.id for c in report.checks if c.counts_as_failure()] + list(report.meta["validation"])
        entries.append({"index": i, "a": a, "overall": report.overall, "failed": failed,
                        "applied": sum(c.applied for c in report.checks)})
        if report.overall != "pass":
            worst = EXIT_VERIFY
    overall = "pass" if worst == EXIT_OK else "fail"
    _dump_json(out / "verify.json", {"overall": overall, "reports": entries})
    return worst


def cmd_verify(cfg, out):
    return _verify_branch(cfg, out)


def cmd_plot(cfg, out):
    sol = _branch(cfg).last
    frame = derive_frame(sol)
    if cfg.plot_streamlines:
        (out / "figure1.svg").write_text(streamline_figure(sol, frame))
    if cfg.plot_drift:
        trajs = _trajectories(cfg, sol, frame) if not sol.is_trivial else []
        (out / "figure2.svg").write_text(drift_figure(sol, frame, trajs))
    return EXIT_OK


def cmd_sweep(cfg, out):
    rows = []
    worst = EXIT_OK
    for i, coeffs in enumerate(cfg.sweep_gammas):
        sub = out / f"job_{i:02d}"
        sub.mkdir(parents=True, exist_ok=True)
        try:
            code = _verify_branch(cfg, sub, cfg.vorticity(coeffs))
            rows.append({"gamma": coeffs, "status": "pass" if code == EXIT_OK else "verification failed"})
        except WaveError as exc:
            code = EXIT_SOLVER
            _dump_json(sub / "error.json", _error_record(exc))
            rows.append({"gamma": coeffs, "status": "solver failed", "error": str(exc)})
        worst = max(worst, code)
    _dump_json(out / "sweep.json", {"jobs": rows})
    return worst


HANDLERS = {"laminar": cmd_laminar, "bifurcate": cmd_bifurcate, "solve": cmd_solve,
            "trace": cmd_trace, "verify": cmd_verify, "plot": cmd_plot, "sweep": cmd_sweep}


def _error_record(exc):
    rec = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("key", "residual", "location"):
        v = getattr(exc, attr, None)
        if v is not None:
            rec[attr] = v
    return rec


def execute(command, cfg: RunConfig, out) -> int:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    _dump_json(out / "effective_config.json", asdict(cfg))
    try:
        return HANDLERS[command](cfg, out)
    except WaveError as exc:
        rec = _error_record(exc)
        _dump_json(out / "error.json", rec)
        print(json.dumps(rec, sort_keys=True), file=sys.stderr)
        return EXIT_SOLVER


def build_parser():
    ap = argparse.ArgumentParser(prog="wavedrift", description="Steady water waves with vorticity: "
                                 "branch solving, particle drift and property checks.")
    ap.add_argument("--config", help="JSON config file")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                    help="override a config key (value parsed as JSON); repeatable")
    ap.add_argument("--out", default="out", help="output directory (default: out)")
    ap.add_argument("-v", "--verbose", action="store_true")
    ap.add_argument("command", choices=COMMANDS)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = parse_config(args.config, args.set)
    except ConfigError as exc:
        print(json.dumps(_error_record(exc), sort_keys=True), file=sys.stderr)
        return EXIT_CONFIG
    return execute(args.command, cfg, args.out)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
