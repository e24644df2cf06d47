"""Finite-difference discretisation of the hodograph problem

    (1 + h_q^2) h_pp - 2 h_p h_q h_pq + h_p^2 h_qq + gamma(-p) h_p^3 = 0,   p0 < p < 0
    1 + h_q^2 + (2 g h - Q) h_p^2 = 0,                                     p = 0
    h = 0,                                                                 p = p0

solved by Newton's method on the half period q in [0, pi] (evenness by
reflection) with the Bernoulli constant Q as an extra unknown and the
crest-to-trough amplitude as the closing equation.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .core import HeightField, VorticitySpec, WaveParameters
from .errors import DomainError, SolverError, StagnationError
from .laminar import Bifurcation, find_bifurcation, linear_seed

log = logging.getLogger(__name__)

EVEN_TOL = 1e-10


@dataclass(frozen=True)
class WaveSolution:
    h: HeightField
    Q: float
    gamma: VorticitySpec
    params: WaveParameters
    tol: float = 1e-10
    iterations: int = 0
    residual_norm: float = 0.0
    lam: float | None = None  # bed slope of the laminar flow this wave sits on

    @property
    def amplitude(self):
        s = self.h.surface
        g = self.params.grid
        return 0.5 * float(s[g.crest_index] - s[0])

    @property
    def is_trivial(self):
        return float(np.ptp(self.h.surface)) == 0.0 or self.amplitude <= 1e-14


@dataclass
class BranchState:
    solutions: list = field(default_factory=list)  # (a, WaveSolution)
    step: float = 0.0
    halvings: int = 0
    bifurcation: Bifurcation | None = None

    @property
    def amplitudes(self):
        return [a for a, _ in self.solutions]

    @property
    def last(self):
        return self.solutions[-1][1]


# Sparse stencils ------------------------------------------------------------


def _q_ops(n, dq, periodic):
    """First and second q-derivative matrices; mirror rows at both ends if not periodic."""
    e = np.ones(n)
    if periodic:
        D1 = sp.diags([-e[:-1], e[:-1]], [-1, 1], shape=(n, n), format="lil")
        D1[0, n - 1] = -1.0
        D1[n - 1, 0] = 1.0
        D2 = sp.diags([e[:-1], -2 * e, e[:-1]], [-1, 0, 1], shape=(n, n), format="lil")
        D2[0, n - 1] = 1.0
        D2[n - 1, 0] = 1.0
    else:
        D1 = sp.diags([-e[:-1], e[:-1]], [-1, 1], shape=(n, n), format="lil")
        D1[0, 1] = 0.0
        D1[n - 1, n - 2] = 0.0
        D2 = sp.diags([e[:-1], -2 * e, e[:-1]], [-1, 0, 1], shape=(n, n), format="lil")
        D2[0, 1] = 2.0
        D2[n - 1, n - 2] = 2.0
    return D1.tocsr() / (2 * dq), D2.tocsr() / dq**2


def _p_ops(n1, dp):
    e = np.ones(n1)
    D1 = sp.diags([-e[:-1], e[:-1]], [-1, 1], shape=(n1, n1), format="lil")
    D1[0, :3] = [-3.0, 4.0, -1.0]
    D1[n1 - 1, n1 - 3:] = [1.0, -4.0, 3.0]
    D2 = sp.diags([e[:-1], -2 * e, e[:-1]], [-1, 0, 1], shape=(n1, n1), format="lil")
    D2[0, :4] = [2.0, -5.0, 4.0, -1.0]
    D2[n1 - 1, n1 - 4:] = [-1.0, 4.0, -5.0, 2.0]
    return D1.tocsr() / (2 * dp), D2.tocsr() / dp**2


class _Stencils:
    def __init__(self, nq_nodes, params, periodic):
        grid = params.grid
        n1 = grid.np_ + 1
        Dq1, Dqq1 = _q_ops(nq_nodes, grid.dq, periodic)
        Dp1, Dpp1 = _p_ops(n1, grid.dp)
        Iq, Ip = sp.identity(nq_nodes, format="csr"), sp.identity(n1, format="csr")
        self.Dq = sp.kron(Dq1, Ip, format="csr")
        self.Dqq = sp.kron(Dqq1, Ip, format="csr")
        self.Dp = sp.kron(Iq, Dp1, format="csr")
        self.Dpp = sp.kron(Iq, Dpp1, format="csr")
        self.Dqp = sp.kron(Dq1, Dp1, format="csr")
        self.shape = (nq_nodes, n1)
        jj = np.tile(np.arange(n1), nq_nodes)
        self.surface = jj == n1 - 1
        self.interior = (jj > 0) & ~self.surface
        self.unknown = jj > 0

    def derivatives(self, v):
        return self.Dq @ v, self.Dp @ v, self.Dqq @ v, self.Dpp @ v, self.Dqp @ v


def _gamma_nodes(gamma, params, nq_nodes):
    p = params.grid.p
    return np.tile(gamma(np.clip(-p, 0.0, -params.p0)), nq_nodes)


def _nodal_residual(st, v, Q, gam, g):
    hq, hp, hqq, hpp, hqp = st.derivatives(v)
    if np.any(hp <= 0.0):
        k = int(np.argmin(hp))
        raise StagnationError("stagnation in iterate (h_p <= 0)", location=np.unravel_index(k, st.shape))
    R = (1 + hq**2) * hpp - 2 * hp * hq * hqp + hp**2 * hqq + gam * hp**3
    S = 1 + hq**2 + (2 * g * v - Q) * hp**2
    F = np.where(st.surface, S, R)
    F[~st.unknown] = 0.0
    return F, (hq, hp, hqq, hpp, hqp)


def residual(h: HeightField, Q: float, gamma: VorticitySpec, params: WaveParameters, check_even=True):
    """Nodal residual on the full grid: interior rows carry the field equation,
    the p = 0 row the Bernoulli condition; the bed row is zero."""
    if h.grid != params.grid:
        raise DomainError("height field grid does not match parameters")
    if check_even and h.evenness_defect() > EVEN_TOL * max(1.0, float(np.max(np.abs(h.values)))):
        raise DomainError("height field is not even in q")
    if np.any(h.values[:, 0] != 0.0):
        raise DomainError("height field violates h = 0 on the bed")
    st = _Stencils(params.nq, params, periodic=True)
    F, _ = _nodal_residual(st, h.values.ravel(), Q, _gamma_nodes(gamma, params, params.nq), params.g)
    return F.reshape(st.shape)


def _jacobian(st, v, Q, gam, g, derivs):
    hq, hp, hqq, hpp, hqp = derivs
    D = sp.diags
    J_int = (D(2 * hq * hpp - 2 * hp * hqp) @ st.Dq
             + D(-2 * hq * hqp + 2 * hp * hqq + 3 * gam * hp**2) @ st.Dp
             + D(1 + hq**2) @ st.Dpp
             - D(2 * hp * hq) @ st.Dqp
             + D(hp**2) @ st.Dqq)
    J_srf = (D(2 * hq) @ st.Dq + D(2 * (2 * g * v - Q) * hp) @ st.Dp + D(2 * g * hp**2))
    J = D(st.interior.astype(float)) @ J_int + D(st.surface.astype(float)) @ J_srf
    return J.tocsr(), -hp**2 * st.surface


class _HalfSystem:
    """Unknowns: h on [0, pi] x (p0, 0], then Q."""

    def __init__(self, gamma, params):
        self.params = params
        self.m = params.nq // 2 + 1
        self.st = _Stencils(self.m, params, periodic=False)
        self.gam = _gamma_nodes(gamma, params, self.m)
        n1 = params.np_ + 1
        self.cols = np.flatnonzero(self.st.unknown)
        self.crest = 0 * n1 + n1 - 1
        self.trough = (self.m - 1) * n1 + n1 - 1

    def unpack(self, x):
        v = np.zeros(self.m * (self.params.np_ + 1))
        v[self.cols] = x[:-1]
        return v, x[-1]

    def pack(self, half_values, Q):
        return np.r_[half_values.ravel()[self.cols], Q]

    def evaluate(self, x, a, jacobian=True):
        v, Q = self.unpack(x)
        F, derivs = _nodal_residual(self.st, v, Q, self.gam, self.params.g)
        amp = v[self.crest] - v[self.trough] - 2.0 * a
        Fx = np.r_[F[self.cols], amp]
        if not jacobian:
            return Fx, None
        J, dQ = _jacobian(self.st, v, Q, self.gam, self.params.g, derivs)
        J = J[self.cols][:, self.cols]
        row = np.zeros(len(self.cols))
        row[np.searchsorted(self.cols, self.crest)] = 1.0
        row[np.searchsorted(self.cols, self.trough)] = -1.0
        Jx = sp.bmat([[J, sp.csr_matrix(dQ[self.cols][:, None])],
                      [sp.csr_matrix(row[None, :]), None]], format="csc")
        return Fx, Jx


def discrete_laminar(gamma: VorticitySpec, params: WaveParameters, lam: float, seed=None,
                     tol=1e-10, max_iter=20) -> WaveSolution:
    """The q-independent solution of the discrete problem with bed slope D_p h(p0) = lam."""
    from .laminar import solve_laminar

    grid = params.grid
    n1 = grid.np_ + 1
    if seed is None:
        seed = solve_laminar(gamma, params.p0, lam, params.g, grid.np_)
    H = np.array(seed.H, dtype=float)
    Q = float(seed.Q)
    dp, g = grid.dp, params.g
    gam = gamma(np.clip(-grid.p, 0.0, -params.p0))
    prev = np.inf
    for it in range(max_iter + 1):
        Hp = np.empty(n1)
        Hp[1:-1] = (H[2:] - H[:-2]) / (2 * dp)
        Hp[0] = (-3 * H[0] + 4 * H[1] - H[2]) / (2 * dp)
        Hp[-1] = (3 * H[-1] - 4 * H[-2] + H[-3]) / (2 * dp)
        if np.any(Hp <= 0):
            raise SolverError("stagnation in iterate (laminar)")
        Hpp = (H[2:] - 2 * H[1:-1] + H[:-2]) / dp**2
        F = np.r_[Hpp + gam[1:-1] * Hp[1:-1] ** 3,
                  1 + (2 * g * H[-1] - Q) * Hp[-1] ** 2,
                  Hp[0] - lam]
        res = float(np.max(np.abs(F)))
        if res < tol and (res < 1e-13 or res > 0.5 * prev):
            break
        if it == max_iter:
            raise SolverError("laminar solve diverged", residual=res)
        prev = res
        # unknowns H[1:], Q
        J = np.zeros((n1, n1))
        for r, j in enumerate(range(1, n1 - 1)):
            c = 3 * gam[j] * Hp[j] ** 2 / (2 * dp)
            for jj, w in ((j - 1, 1 / dp**2 - c), (j, -2 / dp**2), (j + 1, 1 / dp**2 + c)):
                if jj > 0:
                    J[r, jj - 1] += w
        r = n1 - 2
        k = 2 * (2 * g * H[-1] - Q) * Hp[-1] / (2 * dp)
        J[r, n1 - 2] += 2 * g * Hp[-1] ** 2 + 3 * k
        J[r, n1 - 3] += -4 * k
        if n1 - 4 >= 0:
            J[r, n1 - 4] += k
        J[r, n1 - 1] = -Hp[-1] ** 2
        J[n1 - 1, 0] = 4 / (2 * dp)
        J[n1 - 1, 1] = -1 / (2 * dp)
        dx = np.linalg.solve(J, -F)
        H[1:] += dx[:-1]
        Q += dx[-1]
    h = HeightField(grid, np.broadcast_to(H, grid.shape))
    sol = WaveSolution(h=h, Q=float(Q), gamma=gamma, params=params, tol=tol, iterations=it,
                       residual_norm=res, lam=float(lam))
    return sol


def newton_solve(seed: HeightField, Q_guess: float, a: float, gamma: VorticitySpec,
                 params: WaveParameters, tol: float = 1e-10, max_iter: int = 8,
                 lam: float | None = None) -> WaveSolution:
    """Solve for (h, Q) with h(0,0) - h(pi,0) = 2a.

    Raises SolverError ("newton diverged" / "stagnation in iterate") so the
    continuation driver can shorten its step.
    """
    if a < 0:
        raise DomainError("amplitude must be non-negative")
    grid = params.grid
    if seed.grid != grid:
        raise DomainError("seed grid does not match parameters")
    if np.any(seed.values[:, 0] != 0.0):
        raise DomainError("seed violates h = 0 on the bed")
    if seed.evenness_defect() > EVEN_TOL * max(1.0, float(np.max(np.abs(seed.values)))):
        raise DomainError("seed is not even in q")
    if a == 0.0:
        bed = np.mean((-3 * seed.values[:, 0] + 4 * seed.values[:, 1] - seed.values[:, 2]) / (2 * grid.dp))
        return discrete_laminar(gamma, params, float(bed), tol=tol)

    system = _HalfSystem(gamma, params)
    x = system.pack(seed.values[grid.half], Q_guess)
    res = np.inf
    for it in range(max_iter + 1):
        try:
            F, J = system.evaluate(x, a, jacobian=True)
        except StagnationError as exc:
            raise SolverError(f"stagnation in iterate at iteration {it}", residual=res) from exc
        res = float(np.max(np.abs(F)))
        log.debug("newton it=%d a=%.6g residual=%.3e", it, a, res)
        if res < tol:
            break
        if it == max_iter or not np.isfinite(res):
            raise SolverError(f"newton diverged: residual {res:.3e} after {it} iterations", residual=res)
        x = x - splu(J).solve(F)
    v, Q = system.unpack(x)
    half = v.reshape(system.m, grid.np_ + 1)
    h = HeightField(grid, grid.expand_half(half))
    return WaveSolution(h=h, Q=float(Q), gamma=gamma, params=params, tol=tol,
                        iterations=it, residual_norm=res, lam=lam)


def continue_branch(gamma: VorticitySpec, params: WaveParameters, a_max: float, da: float,
                    tol: float = 1e-10, max_iter: int = 8, bracket=(0.1, 1.0),
                    bifurcation: Bifurcation | None = None) -> BranchState:
    """Step the amplitude from 0 to ``a_max``, halving the step on failure."""
    bif = bifurcation or find_bifurcation(gamma, params.p0, params.g, 1, bracket, params.np_)
    laminar = discrete_laminar(gamma, params, bif.lam, tol=tol)
    state = BranchState(solutions=[(0.0, laminar)], step=da, bifurcation=bif)
    if a_max <= 0:
        return state
    if da <= 0:
        raise DomainError("continuation step must be positive")
    min_step = da / 64.0
    a = 0.0
    while a < a_max * (1 - 1e-12):
        a_try = min(a + state.step, a_max)
        if len(state.solutions) == 1:
            seed, Qg = linear_seed(bif, a_try, params)
            seed = HeightField(params.grid, seed.values + laminar.h.values - bif.profile.height_field(params.grid).values)
        else:
            (a0, s0), (a1, s1) = state.solutions[-2], state.solutions[-1]
            t = (a_try - a1) / (a1 - a0)
            seed = HeightField(params.grid, s1.h.values + t * (s1.h.values - s0.h.values))
            Qg = s1.Q + t * (s1.Q - s0.Q)
        try:
            sol = newton_solve(seed, Qg, a_try, gamma, params, tol, max_iter, lam=bif.lam)
        except SolverError as exc:
            state.step *= 0.5
            state.halvings += 1
            log.info("step failed at a=%.6g (%s); step -> %.3g", a_try, exc, state.step)
            if state.step < min_step:
                break
            continue
        state.solutions.append((a_try, sol))
        a = a_try
        state.step = min(da, 2 * state.step)
    if len(state.solutions) == 1:
        raise SolverError("branch start failed")
    return state


def solution_diagnostics(sol: WaveSolution) -> dict:
    from .core import diff_q

    grid = sol.params.grid
    eta = sol.h.surface
    slope = diff_q(eta, grid.dq)
    F = residual(sol.h, sol.Q, sol.gamma, sol.params, check_even=False)
    hp = _hp_full(sol)
    return {
        "max_residual": float(np.max(np.abs(F))),
        "min_hp": float(np.min(hp)),
        "evenness_defect": sol.h.evenness_defect(),
        "max_slope": float(np.max(np.abs(slope))),
        "amplitude": sol.amplitude,
    }


def _hp_full(sol):
    from .core import diff_p

    return diff_p(sol.h.values, sol.params.grid.dp)


def validate_solution(sol: WaveSolution, tol: float | None = None) -> list:
    """Names of violated invariants (empty list means valid)."""
    grid = sol.params.grid
    tol = 10 * sol.tol if tol is None else tol
    out = []
    v = sol.h.values
    if np.any(v[:, 0] != 0.0):
        out.append("bottom condition h(q, p0) = 0 violated")
    hp = _hp_full(sol)
    if np.any(hp <= 0):
        out.append("h_p > 0 violated (stagnation)")
        return out
    scale = max(1.0, float(np.max(np.abs(v))))
    if sol.h.evenness_defect() > EVEN_TOL * scale:
        out.append(f"evenness violated (defect {sol.h.evenness_defect():.3e})")
    try:
        F = residual(sol.h, sol.Q, sol.gamma, sol.params, check_even=False)
    except StagnationError:
        out.append("h_p > 0 violated (stagnation)")
        return out
    fi = float(np.max(np.abs(F[:, 1:-1])))
    fs = float(np.max(np.abs(F[:, -1])))
    if not fi < tol:
        out.append(f"interior residual {fi:.3e} exceeds {tol:.1e}")
    if not fs < tol:
        out.append(f"surface residual {fs:.3e} exceeds {tol:.1e}")
    if not sol.is_trivial:
        eta_half = v[grid.half, -1]
        steps = np.diff(eta_half)
        if np.any(steps >= 0):
            k = int(np.argmax(steps))
            out.append(f"surface not strictly decreasing from crest to trough near q={grid.dq * (k + 0.5):.4f}")
    if sol.amplitude < -1e-14:
        out.append("negative amplitude (crest below trough)")
    return out
