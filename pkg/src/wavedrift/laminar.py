"""Trivial (q-independent) flows and the bifurcation of wave branches from them.

A laminar flow H(p) solves H'' + gamma(-p) H'^3 = 0 with H(p0) = 0 and
H'(p0) = lam.  Linearising the hodograph problem about H with a
perturbation m(p) cos(k q) gives the shooting problem

    m'' + 3 gamma(-p) H'^2 m' - k^2 H'^2 m = 0,   m(p0) = 0, m'(p0) = 1,

and a wave of wavenumber k bifurcates where g m(0) H'(0)^3 = m'(0).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

from .core import HeightField, VorticitySpec, WaveParameters
from .errors import DomainError, NoBifurcationError, StagnationError

REFINE = 8


@dataclass(frozen=True)
class LaminarProfile:
    lam: float
    p0: float
    g: float
    p: np.ndarray
    H: np.ndarray
    Hp: np.ndarray

    @property
    def depth(self):
        return float(self.H[-1])

    @property
    def Q(self):
        """Bernoulli constant of the hodograph surface condition."""
        return 2.0 * self.g * self.H[-1] + 1.0 / self.Hp[-1] ** 2

    @property
    def c(self):
        # u = c - 1/H' vanishes on the bed
        return 1.0 / self.lam

    @property
    def C(self):
        return self.Q - 2.0 * self.g * self.depth

    def height_field(self, grid):
        if grid.np_ + 1 != self.p.size or not np.allclose(grid.p, self.p):
            raise DomainError("laminar profile sampled on a different p-grid")
        return HeightField(grid, np.broadcast_to(self.H, grid.shape))


def _stagnation_check(gamma: VorticitySpec, p0, lam):
    """Raise if 1/H'^2 = lam^-2 + 2 int_{p0}^p gamma(-s) ds reaches 0 on [p0, 0]."""
    smax = -p0
    c = np.asarray(gamma.coefficients, dtype=float)
    if c.size == 0:
        return
    A = P.polyint(c)
    # w as a polynomial in s = -p
    w = -2.0 * A
    w[0] += lam**-2 + 2.0 * P.polyval(smax, A)
    roots = [r.real for r in P.polyroots(w) if abs(r.imag) < 1e-12 and 0.0 <= r.real <= smax] if w.size > 1 else []
    if P.polyval(0.0, w) <= 0.0 and not roots:
        roots = [0.0]
    if roots:
        s_stag = max(roots)  # first hit travelling up from the bed
        raise StagnationError(f"laminar stagnation at p = {-s_stag:.6g}", location=-s_stag)


def _rk4_profile(gamma, p0, lam, n, k=0, refine=REFINE):
    """Integrate (H, H', m, m') from the bed; returns samples at the n+1 grid levels."""
    smax = -p0
    nsteps = n * refine
    h = -p0 / nsteps
    k2 = float(k) ** 2
    # gamma(-p) at every step and half-step
    G = [float(v) for v in gamma(np.clip(-(p0 + 0.5 * h * np.arange(2 * nsteps + 1)), 0.0, smax))]

    def rhs(Gv, H1, m, m1):
        H12 = H1 * H1
        return H1, -Gv * H12 * H1, m1, -3.0 * Gv * H12 * m1 + k2 * H12 * m

    H, H1, m, m1 = 0.0, float(lam), 0.0, 1.0
    out = np.empty((n + 1, 4))
    out[0] = (H, H1, m, m1)
    h2, h6 = 0.5 * h, h / 6.0
    for i in range(nsteps):
        g0, gh, g1 = G[2 * i], G[2 * i + 1], G[2 * i + 2]
        a = rhs(g0, H1, m, m1)
        b = rhs(gh, H1 + h2 * a[1], m + h2 * a[2], m1 + h2 * a[3])
        c = rhs(gh, H1 + h2 * b[1], m + h2 * b[2], m1 + h2 * b[3])
        d = rhs(g1, H1 + h * c[1], m + h * c[2], m1 + h * c[3])
        H += h6 * (a[0] + 2.0 * b[0] + 2.0 * c[0] + d[0])
        H1 += h6 * (a[1] + 2.0 * b[1] + 2.0 * c[1] + d[1])
        m += h6 * (a[2] + 2.0 * b[2] + 2.0 * c[2] + d[2])
        m1 += h6 * (a[3] + 2.0 * b[3] + 2.0 * c[3] + d[3])
        if (i + 1) % refine == 0:
            out[(i + 1) // refine] = (H, H1, m, m1)
    return out


def solve_laminar(gamma: VorticitySpec, p0: float, lam: float, g: float = 9.81, np_: int = 64) -> LaminarProfile:
    if not lam > 0:
        raise DomainError("lambda must be positive")
    if not p0 < 0:
        raise DomainError("p0 must be negative")
    _stagnation_check(gamma, p0, lam)
    y = _rk4_profile(gamma, p0, lam, np_)
    p = np.linspace(p0, 0.0, np_ + 1)
    return LaminarProfile(lam=float(lam), p0=float(p0), g=float(g), p=p, H=y[:, 0], Hp=y[:, 1])


def dispersion_residual(profile: LaminarProfile, gamma: VorticitySpec, g: float, k: int = 1) -> float:
    """g m(0) H'(0)^3 - m'(0); zero at a bifurcation point."""
    _stagnation_check(gamma, profile.p0, profile.lam)
    y = _rk4_profile(gamma, profile.p0, profile.lam, profile.p.size - 1, k=k)
    H1, m, m1 = y[-1, 1], y[-1, 2], y[-1, 3]
    return float(g * m * H1**3 - m1)


@dataclass(frozen=True)
class Bifurcation:
    lam: float
    k: int
    profile: LaminarProfile
    m: np.ndarray  # eigenfunction on the p-grid, m(0) = 1
    mp: np.ndarray

    @property
    def depth(self):
        return self.profile.depth

    @property
    def c(self):
        return self.profile.c


def find_bifurcation(gamma: VorticitySpec, p0: float, g: float, k: int = 1,
                     bracket=(0.1, 1.0), np_: int = 64, xtol=1e-13) -> Bifurcation:
    def f(lam):
        prof = solve_laminar(gamma, p0, lam, g, np_)
        return dispersion_residual(prof, gamma, g, k)

    lo, hi = bracket
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        lam = lo
    elif fhi == 0.0:
        lam = hi
    elif np.sign(flo) == np.sign(fhi):
        raise NoBifurcationError(f"no bifurcation in bracket [{lo}, {hi}]")
    else:
        lam = brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
    profile = solve_laminar(gamma, p0, lam, g, np_)
    y = _rk4_profile(gamma, p0, lam, np_, k=k)
    scale = y[-1, 2]
    return Bifurcation(lam=float(lam), k=k, profile=profile, m=y[:, 2] / scale, mp=y[:, 3] / scale)


def linear_seed(bif: Bifurcation, eps: float, params: WaveParameters):
    """h = H(p) + eps m(p) cos(k q); Newton initial guess only."""
    grid = params.grid
    base = bif.profile.height_field(grid).values
    qq = grid.q[:, None]
    h = base + eps * bif.m[None, :] * np.cos(bif.k * qq)
    return HeightField(grid, h), bif.profile.Q
