"""Streamlines, traversal times, drift and particle paths.

In the frame moving with the wave a particle on the level p = -psi moves
with dx/dt = -1/h_p, so crossing one period takes tau = int h_p dq and the
physical particle advances D = c tau - 2 pi per period.  D = 0 exactly when
the physical path is closed.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .core import diff_p, integrate_q
from .errors import OutsideFluidError
from .fields import PhysicalFrame, locate_hodograph
from .solver import WaveSolution


@dataclass(frozen=True)
class Streamline:
    p: float
    x: np.ndarray
    sigma: np.ndarray
    slope: np.ndarray

    @property
    def max_steepness(self):
        return float(np.max(np.abs(self.slope)))


@dataclass(frozen=True)
class Trajectory:
    start: tuple
    dt: float
    t: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    x: np.ndarray
    y: np.ndarray
    psi: np.ndarray
    tau: float | None
    drift: float | None

    @property
    def vertical_extent(self):
        return float(np.max(self.Y) - np.min(self.Y))


def streamline(sol: WaveSolution, frame: PhysicalFrame, p: float, samples=None) -> Streamline:
    x = sol.params.grid.q if samples is None else np.asarray(samples, dtype=float)
    h, hq, _ = frame.interp.row(x, p)
    if p == sol.params.p0:
        h, hq = np.zeros_like(h), np.zeros_like(hq)
    return Streamline(p=float(p), x=np.array(x), sigma=h - frame.d, slope=hq)


def traversal_and_drift(sol: WaveSolution, frame: PhysicalFrame, p: float):
    """(tau, D) on the level p; tau = 2 int_0^pi h_p dq."""
    grid = sol.params.grid
    _, _, hp = frame.interp.row(grid.q, p)
    tau = integrate_q(hp, grid.dq)
    return float(tau), float(frame.c * tau - 2 * np.pi)


def drift_profile(sol: WaveSolution, frame: PhysicalFrame):
    """(p levels, tau, D) on every grid level, straight from the discrete h_p."""
    grid = sol.params.grid
    hp = diff_p(sol.h.values, grid.dp)
    tau = integrate_q(hp, grid.dq)
    return grid.p.copy(), tau, frame.c * tau - 2 * np.pi


def _velocity(interp, x, y, d, p_guess):
    modes = interp.modes(x)
    p = interp.solve_p(x, y + d, p_guess, modes)
    _, hq, hp = interp.evaluate(x, p, modes)
    return -1.0 / hp, -hq / hp, p


def integrate_trajectory(sol: WaveSolution, frame: PhysicalFrame, X0: float, Y0: float,
                         duration: float | None = None, dt: float | None = None) -> Trajectory:
    """Classic RK4 in the steady frame; X = x + c t maps back to the physical frame."""
    period = 2 * np.pi / frame.c
    dt = period / 2000 if dt is None else dt
    duration = 2.5 * period if duration is None else duration
    _, p_start = locate_hodograph(sol, frame, X0, Y0)  # raises if outside
    interp, d = frame.interp, frame.d
    n = int(np.ceil(duration / dt))
    xs = np.empty(n + 1)
    ys = np.empty(n + 1)
    ps = np.empty(n + 1)
    x, y, p = float(X0), float(Y0), p_start
    xs[0], ys[0], ps[0] = x, y, p
    for i in range(n):
        k1x, k1y, p = _velocity(interp, x, y, d, p)
        k2x, k2y, pm = _velocity(interp, x + 0.5 * dt * k1x, y + 0.5 * dt * k1y, d, p)
        k3x, k3y, pm = _velocity(interp, x + 0.5 * dt * k2x, y + 0.5 * dt * k2y, d, pm)
        k4x, k4y, _ = _velocity(interp, x + dt * k3x, y + dt * k3y, d, pm)
        x += dt / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        y += dt / 6 * (k1y + 2 * k2y + 2 * k3y + k4y)
        xs[i + 1], ys[i + 1] = x, y
        ps[i + 1] = interp.solve_p(x, y + d, p, interp.modes(x))
    t = dt * np.arange(n + 1)
    tau = _period_from_crossings(t, xs)
    drift = None if tau is None else frame.c * tau - 2 * np.pi
    return Trajectory(start=(float(X0), float(Y0)), dt=dt, t=t, X=xs + frame.c * t, Y=ys,
                      x=xs, y=ys, psi=-ps, tau=tau, drift=drift)


def _period_from_crossings(t, x):
    """Time between the first two crossings of x = pi (mod 2 pi), x decreasing."""
    band = np.floor((x - np.pi) / (2 * np.pi))
    idx = np.flatnonzero(np.diff(band) != 0)
    if idx.size < 2:
        return None
    times = []
    for i in idx[:2]:
        level = np.pi + 2 * np.pi * band[i]  # the crossed value of x
        frac = (x[i] - level) / (x[i] - x[i + 1])
        times.append(t[i] + frac * (t[i + 1] - t[i]))
    return float(times[1] - times[0])


def mass_flux(sol: WaveSolution, frame: PhysicalFrame, x: float, n: int = 48) -> float:
    """int_{-d}^{eta(x)} (u - c) dy by Gauss-Legendre in y."""
    interp = frame.interp
    top = interp.evaluate(x, 0.0)[0]
    nodes, weights = np.polynomial.legendre.leggauss(n)
    ys = -frame.d + 0.5 * top * (nodes + 1)
    total = 0.0
    p = None
    for y, w in zip(ys, weights):
        try:
            _, p = locate_hodograph(sol, frame, x, y)
        except OutsideFluidError:  # pragma: no cover - nodes lie strictly inside
            raise
        _, _, hp = interp.evaluate(x, p)
        total += w * (-1.0 / hp)
    return float(0.5 * top * total)


def write_trajectory_csv(path, traj: Trajectory):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "X", "Y"])
        for row in zip(traj.t, traj.X, traj.Y):
            w.writerow([repr(float(v)) for v in row])


def write_streamline_csv(path, line: Streamline):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "sigma"])
        for row in zip(line.x, line.sigma):
            w.writerow([repr(float(v)) for v in row])


def drift_summary(sol, frame):
    p, tau, D = drift_profile(sol, frame)
    return [{"p": float(a), "tau": float(b), "drift": float(c)} for a, b, c in zip(p, tau, D)]


def write_drift_json(path, sol, frame):
    with open(path, "w") as fh:
        json.dump(drift_summary(sol, frame), fh, indent=2, sort_keys=True)
        fh.write("\n")
