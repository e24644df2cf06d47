"""Physical quantities recovered from a hodograph solution.

Velocities follow from the hodograph relations

    u - c = -1 / h_p,    v = -h_q / h_p,

with c fixed by requiring the horizontal velocity to have zero mean along
the flat bed.  Off-grid values come from a C^1 interpolant of h that is
trigonometric in q and cubic Hermite in p (using the discrete h_p as the
nodal slopes), so h_p at grid nodes is exactly the finite-difference h_p
and the level sets of the interpolant are exactly the particle paths of
the interpolated velocity field.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .core import diff_p, diff_q, diff_qq, integrate_q
from .errors import OutsideFluidError, StagnationError
from .solver import WaveSolution


def _cos_coefficients(values):
    """Cosine-series coefficients of even periodic data sampled at q = -pi + i dq."""
    n = values.shape[0]
    F = np.fft.rfft(np.roll(values, -n // 2, axis=0), axis=0).real / n
    F[1:n // 2] *= 2.0
    return F  # shape (n/2 + 1, ...)


class HodographInterpolant:
    """Evaluate h, h_q, h_p anywhere in the closed rectangle."""

    def __init__(self, sol: WaveSolution):
        grid = sol.params.grid
        self.p0 = grid.p0
        self.dp = grid.dp
        self.n = grid.np_
        self.k = np.arange(grid.nq // 2 + 1, dtype=float)
        hp = diff_p(sol.h.values, grid.dp)
        self.A = _cos_coefficients(sol.h.values).T.copy()  # (np+1, m)
        self.B = _cos_coefficients(hp).T.copy()

    def _hermite(self, p):
        s = (p - self.p0) / self.dp
        j = int(min(max(np.floor(s), 0), self.n - 1))
        t = s - j
        t2, t3 = t * t, t * t * t
        d = self.dp
        A, B = self.A, self.B
        val = ((2 * t3 - 3 * t2 + 1) * A[j] + (t3 - 2 * t2 + t) * d * B[j]
               + (-2 * t3 + 3 * t2) * A[j + 1] + (t3 - t2) * d * B[j + 1])
        der = ((6 * t2 - 6 * t) * A[j] / d + (3 * t2 - 4 * t + 1) * B[j]
               + (-6 * t2 + 6 * t) * A[j + 1] / d + (3 * t2 - 2 * t) * B[j + 1])
        return val, der

    def modes(self, q):
        kq = self.k * q
        return np.cos(kq), np.sin(kq)

    def evaluate(self, q, p, modes=None):
        """(h, h_q, h_p) at a single point."""
        cs, sn = self.modes(q) if modes is None else modes
        val, der = self._hermite(p)
        return float(val @ cs), float(-(self.k * val) @ sn), float(der @ cs)

    def row(self, q, p):
        """(h, h_q, h_p) along an array of q at a fixed level p."""
        q = np.asarray(q, dtype=float)
        val, der = self._hermite(p)
        kq = np.outer(q, self.k)
        c, s = np.cos(kq), np.sin(kq)
        return c @ val, -(s @ (self.k * val)), c @ der

    def solve_p(self, q, target, p_guess=None, modes=None, tol=1e-14, max_iter=50):
        """p with h(q, p) = target; Newton safeguarded by bisection on [p0, 0].

        Targets marginally outside [0, h(q, 0)] are extrapolated (used by the
        trajectory integrator at the free surface)."""
        modes = self.modes(q) if modes is None else modes
        lo, hi = self.p0, 0.0
        top = self.evaluate(q, 0.0, modes)[0]
        if p_guess is None:
            p_guess = self.p0 * (1.0 - target / top) if top > 0 else 0.5 * self.p0
        p = p_guess
        for _ in range(max_iter):
            h, _, hp = self.evaluate(q, p, modes)
            f = h - target
            if f > 0:
                hi = min(hi, p)
            else:
                lo = max(lo, p)
            step = f / hp
            p_new = p - step
            if not (self.p0 - 1e-3 * self.dp <= p_new <= 1e-3 * self.dp) or hp <= 0:
                p_new = 0.5 * (lo + hi)
            if abs(p_new - p) <= tol * max(1.0, abs(self.p0)):
                return p_new
            p = p_new
        return p


@dataclass(frozen=True)
class PhysicalFrame:
    d: float
    c: float
    C: float
    x: np.ndarray
    eta: np.ndarray
    eta_x: np.ndarray
    eta_xx: np.ndarray
    interp: HodographInterpolant

    @property
    def eta_crest(self):
        return float(self.eta[self.x.size // 2])

    def surface_at(self, x):
        """(eta, eta', eta'') at arbitrary x by trigonometric interpolation of the nodal values."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        k = np.arange(self.x.size // 2 + 1)
        out = []
        for arr, parity in ((self.eta, "even"), (self.eta_x, "odd"), (self.eta_xx, "even")):
            if parity == "even":
                a = _cos_coefficients(arr)
                out.append(np.cos(np.outer(x, k)) @ a)
            else:
                n = arr.size
                F = np.fft.rfft(np.roll(arr, -n // 2)).imag / n
                F[1:n // 2] *= -2.0
                F[n // 2] = 0.0
                out.append(np.sin(np.outer(x, k)) @ F)
        return tuple(out)


def derive_frame(sol: WaveSolution) -> PhysicalFrame:
    grid = sol.params.grid
    surf = sol.h.surface
    d = integrate_q(surf, grid.dq) / (2 * np.pi)
    hp_bed = diff_p(sol.h.values, grid.dp)[:, 0]
    c = integrate_q(1.0 / hp_bed, grid.dq) / (2 * np.pi)
    eta = surf - d
    return PhysicalFrame(
        d=float(d), c=float(c), C=float(sol.Q - 2 * sol.params.g * d), x=grid.q.copy(),
        eta=eta, eta_x=diff_q(eta, grid.dq), eta_xx=diff_qq(eta, grid.dq),
        interp=HodographInterpolant(sol),
    )


def velocity_at_hodograph(sol: WaveSolution, frame: PhysicalFrame, q, p):
    if not sol.params.p0 - 1e-12 <= p <= 1e-12:
        raise OutsideFluidError(f"p={p} outside [{sol.params.p0}, 0]")
    _, hq, hp = frame.interp.evaluate(q, p)
    if hp <= 0:
        raise StagnationError(f"stagnation query at (q, p) = ({q}, {p})")
    return frame.c - 1.0 / hp, -hq / hp


def locate_hodograph(sol: WaveSolution, frame: PhysicalFrame, x, y, tol=1e-12):
    """(q, p) of the physical point (x, y); psi(x, y) = -p."""
    q = float(x)
    top = frame.interp.evaluate(q, 0.0)[0]
    target = y + frame.d
    if target < -tol or target > top + tol:
        raise OutsideFluidError(f"({x}, {y}) outside fluid domain [-d, eta(x)] = [{-frame.d}, {top - frame.d}]")
    target = min(max(target, 0.0), top)
    if target == 0.0:
        return q, sol.params.p0
    if target == top:
        return q, 0.0
    return q, frame.interp.solve_p(q, target)


def surface_formulas(frame: PhysicalFrame, gamma0: float, x, g: float):
    """Closed-form surface values of psi_y^2, D_x psi_y^2, psi_xy, psi_yy from eta, eta', eta''."""
    eta, s, t = frame.surface_at(x)
    W = frame.C - 2 * g * eta
    if np.any(W <= 0):
        raise StagnationError("stagnation at surface (C - 2 g eta <= 0)")
    rW = np.sqrt(W)
    s2 = 1 + s**2
    psi_y2 = W / s2
    dx_psi_y2 = 2 * s * ((2 * g * eta - frame.C) * t - g * s2) / s2**2
    psi_xy = s * (2 * t * W + (1 - s**4) * g + gamma0 * rW * s2**1.5) / (s2**2.5 * rW)
    psi_yy = (t * W * (s**2 - 1) + 2 * g * s**2 * s2 - gamma0 * rW * s2**1.5) / (s2**2.5 * rW)
    return {"psi_y2": psi_y2, "Dx_psi_y2": dx_psi_y2, "psi_xy": psi_xy, "psi_yy": psi_yy}


def sample_fields(sol: WaveSolution, frame: PhysicalFrame, nx=65, ny=33):
    """Rows (x, y, u, v, psi) on a lattice over one period; points above the surface are skipped."""
    rows = []
    xs = np.linspace(-np.pi, np.pi, nx)
    ytop = float(np.max(frame.eta))
    ys = np.linspace(-frame.d, ytop, ny)
    for x in xs:
        eta_x = frame.interp.evaluate(x, 0.0)[0] - frame.d
        for y in ys:
            if y > eta_x:
                continue
            q, p = locate_hodograph(sol, frame, x, y)
            u, v = velocity_at_hodograph(sol, frame, q, p)
            rows.append((x, y, u, v, -p))
    return rows


def write_fields_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y", "u", "v", "psi"])
        for r in rows:
            w.writerow([repr(float(v)) for v in r])
