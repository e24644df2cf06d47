"""Numerical certification of the monotonicity, drift and surface-bound
properties on a computed wave.

Every check is gated on the hypotheses under which the property is known to
hold (sign of the vorticity and its derivatives, slope bound, amplitude).
Strict inequalities are tested as ``value > -tol`` and the extremal value is
reported as the margin.  Derivatives here are built by nesting the first
derivative operators of :mod:`wavedrift.core`, deliberately not the compact
stencils of the solver, so that the identity residuals measure genuine
discretisation error rather than echoing the Newton residual.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import cumulative_p, diff_p, diff_q, integrate_q
from .fields import PhysicalFrame, derive_frame, surface_formulas
from .kinematics import drift_profile, mass_flux
from .solver import WaveSolution, solution_diagnostics, validate_solution

SLOPE_LIMIT = 1.0 / np.sqrt(3.0)
SMALL_AMPLITUDE = 0.05  # fraction of the depth
SURFACE_FORMULA_RTOL = 5e-2
# nested one-sided end stencils lose one order per nesting; the identities
# involve up to three nested p-derivatives, so these rows are excluded
EDGE_ROWS = 3
FLUX_TOL = 1e-4
STOKES_TOL = 1e-10
POS_FLOOR = 1e-10  # well above round-off, well below any physical signal at a = 0.01 d
SCALE_FLOOR = 1e-8  # relative checks fall back to absolute below this, in units of c/d


@dataclass
class CheckResult:
    id: str
    applied: bool
    verdict: str  # "pass" | "fail" | "skipped"
    margin: float | None = None
    tolerance: float | None = None
    worst_location: dict | None = None
    note: str = ""
    regime: str = "guaranteed"
    pos_floor: float | None = None  # strict checks: the peak value must exceed this
    peak: float | None = None

    def counts_as_failure(self):
        return self.applied and self.verdict == "fail" and self.regime == "guaranteed"


@dataclass
class VerificationReport:
    meta: dict
    checks: list = field(default_factory=list)

    @property
    def overall(self):
        if self.meta.get("validation"):
            return "fail"
        return "fail" if any(c.counts_as_failure() for c in self.checks) else "pass"

    def to_dict(self):
        return {"meta": self.meta, "checks": [_clean(asdict(c)) for c in self.checks],
                "overall": self.overall}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    def by_id(self, cid):
        return next(c for c in self.checks if c.id == cid)


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


class _Context:
    """Derived arrays shared by all suites (half period q in [0, pi])."""

    def __init__(self, sol: WaveSolution, frame: PhysicalFrame):
        self.sol, self.frame = sol, frame
        grid = sol.params.grid
        self.grid = grid
        self.dq, self.dp = grid.dq, grid.dp
        h = sol.h.values
        hq = diff_q(h, self.dq)
        hp = diff_p(h, self.dp)
        self.full = {
            "h": h, "hq": hq, "hp": hp,
            "hqq": diff_q(hq, self.dq), "hpp": diff_p(hp, self.dp), "hqp": diff_p(hq, self.dp),
        }
        half = grid.half
        self.d = {k: v[half] for k, v in self.full.items()}
        self.q = grid.dq * np.arange(half.size)
        self.p = grid.p
        self.m = half.size
        gam = sol.gamma
        self.gamma = gam
        self.gam_p = gam(np.clip(-self.p, 0.0, -sol.params.p0))
        self.dgam_p = gam(np.clip(-self.p, 0.0, -sol.params.p0), 1)
        self.diag = solution_diagnostics(sol)
        self.max_slope = self.diag["max_slope"]
        self.trivial = sol.is_trivial
        self.small = sol.amplitude <= SMALL_AMPLITUDE * frame.d
        self.g = sol.params.g

    def loc(self, k, j):
        return {"q": float(self.q[k]), "p": float(self.p[j])}


def _skip(cid, reason):
    return CheckResult(cid, applied=False, verdict="skipped", note=reason)


def _positive(cid, values, tol, locate, note="", regime="guaranteed", strict=True):
    """Check values > -tol; margin = min(values).

    For a strict inequality the largest value must also exceed POS_FLOOR, so
    a field sitting at round-off level cannot pass vacuously."""
    values = np.asarray(values, dtype=float)
    idx = np.unravel_index(int(np.argmin(values)), values.shape)
    margin = float(values[idx])
    ok = margin > -tol
    floor = peak = None
    if strict:
        floor, peak = POS_FLOOR, float(np.max(values))
        ok = ok and peak > floor
    return CheckResult(cid, True, "pass" if ok else "fail", margin, tol,
                       locate(*idx) if values.ndim == 2 else locate(idx[0]), note, regime,
                       pos_floor=floor, peak=peak)


def _bound(cid, value, tol, where=None, note=""):
    """Check value <= tol; margin = value."""
    return CheckResult(cid, True, "pass" if value <= tol else "fail", float(value), tol, where, note)


def measured_tol_eq(ctx: _Context):
    """10 x the divergence-identity residual scale, floored at round-off."""
    res = _divergence_residuals(ctx)
    return max(10.0 * float(np.max(np.abs(res))), 1e-12)


# Monotonicity ----------------------------------------------------------------


def check_monotonicity_suite(sol, frame, tol_eq=None):
    ctx = sol if isinstance(sol, _Context) else _Context(sol, frame)
    tol = measured_tol_eq(ctx) if tol_eq is None else tol_eq
    d, m = ctx.d, ctx.m
    gam = ctx.gamma
    out = []
    inner = slice(1, m - 1)
    levels = slice(1, None)
    trivial = "trivial wave (flat streamlines); strict claim not applicable"

    hq = d["hq"]
    if ctx.trivial:
        out.append(_skip("streamline_slope_negative", trivial))
        out.append(_skip("max_steepness_increasing", trivial))
    else:
        out.append(_positive("streamline_slope_negative", -hq[inner, levels], tol,
                             lambda k, j: ctx.loc(k + 1, j + 1)))
        steep = np.max(np.abs(hq), axis=0)
        out.append(_positive("max_steepness_increasing", np.diff(steep), tol,
                             lambda j: {"p": float(ctx.p[j + 1])}))

    u = frame.c - 1.0 / d["hp"]
    if gam.sign_on_range(1) in ("zero", "positive", "nonnegative") and gam.is_nonpositive_on_range:
        if ctx.trivial and gam.is_zero:
            out.append(_skip("max_u_increasing", trivial))
        else:
            out.append(_positive("max_u_increasing", np.diff(np.max(u, axis=0)), tol,
                                 lambda j: {"p": float(ctx.p[j + 1])}))
    else:
        out.append(_skip("max_u_increasing", "gamma' >= 0 and gamma <= 0 required"))

    v = -hq / d["hp"]
    if ctx.trivial:
        out.append(_skip("vertical_velocity_positive", trivial))
    else:
        out.append(_positive("vertical_velocity_positive", v[inner, levels], tol,
                             lambda k, j: ctx.loc(k + 1, j + 1)))
    if gam.sign_on_range(1) not in ("zero", "negative", "nonpositive"):
        out.append(_skip("max_v_increasing", "gamma' <= 0 required"))
    elif ctx.trivial:
        out.append(_skip("max_v_increasing", trivial))
    else:
        out.append(_positive("max_v_increasing", np.diff(np.max(np.abs(v), axis=0)), tol,
                             lambda j: {"p": float(ctx.p[j + 1])}))

    if gam.is_nonpositive_on_range:
        u_srf = frame.c - 1.0 / ctx.full["hp"][:, -1]
        dxu = diff_q(u_srf, ctx.dq)[ctx.grid.half]
        out.append(_positive("surface_u_nonincreasing", -dxu[inner], tol,
                             lambda k: {"x": float(ctx.q[k + 1])}, strict=False))
    else:
        out.append(_skip("surface_u_nonincreasing", "gamma <= 0 required"))

    if not gam.is_zero:
        out.append(_skip("hqp_negative", "gamma = 0 required"))
    elif ctx.max_slope > SLOPE_LIMIT:
        out.append(_skip("hqp_negative", "max|eta'| <= 1/sqrt(3) required"))
    elif ctx.trivial:
        out.append(_skip("hqp_negative", trivial))
    else:
        # h_qp = 0 on q = 0, pi by symmetry: drop those columns and their neighbours
        out.append(_positive("hqp_negative", -d["hqp"][2:m - 2, :], tol,
                             lambda k, j: ctx.loc(k + 2, j)))

    g0 = float(gam(0.0))
    if not (g0 >= 0 and gam.sign_on_range(1) in ("zero", "negative", "nonpositive")
            and gam.sign_on_range(2) in ("zero", "negative", "nonpositive")):
        out.append(_skip("psi_xy_negative", "gamma(0) >= 0, gamma' <= 0, gamma'' <= 0 required"))
    elif ctx.trivial:
        out.append(_skip("psi_xy_negative", trivial))
    else:
        psi_xy = (d["hqp"] - d["hpp"] * hq / d["hp"]) / d["hp"] ** 2
        out.append(_positive("psi_xy_negative", -psi_xy[inner, :], tol,
                             lambda k, j: ctx.loc(k + 1, j),
                             regime="guaranteed" if ctx.small else "outside",
                             note="" if ctx.small else "outside guaranteed regime"))

    out.append(_max_u_location(ctx, u))
    return out


def _max_u_location(ctx, u):
    k, j = np.unravel_index(int(np.argmax(u)), u.shape)
    where = ctx.loc(k, j)
    cid = "max_u_location"
    if j != u.shape[1] - 1:
        return CheckResult(cid, True, "pass", 0.0, 0.0, where,
                           "maximum of u not on the surface; claim vacuous")
    if k == 0 or ctx.trivial and np.allclose(u[:, j], u[0, j]):
        return CheckResult(cid, True, "pass", 0.0, 0.0, where, "maximum at the crest")
    frame = ctx.frame
    cu = frame.c - u[k, j]
    g0 = float(ctx.gamma(0.0))
    eta_xx = frame.eta_xx[ctx.grid.half][k]
    margin = min(ctx.g - cu * g0, -eta_xx)
    return CheckResult(cid, True, "pass" if margin > 0 else "fail", float(margin), 0.0, where,
                       "maximum on the concave part of the surface")


# Drift -----------------------------------------------------------------------


def check_drift_suite(sol, frame, tol_eq=None):
    ctx = sol if isinstance(sol, _Context) else _Context(sol, frame)
    tol = measured_tol_eq(ctx) if tol_eq is None else tol_eq
    gam = ctx.gamma
    _, _, D = drift_profile(ctx.sol, frame)
    out = []
    trivial_zero = ctx.trivial and gam.is_zero
    if not gam.is_nonpositive_on_range:
        out.append(_skip("forward_drift_positive", "gamma <= 0 required"))
    elif trivial_zero:
        out.append(_skip("forward_drift_positive", "trivial wave: D = 0 identically"))
    else:
        r = _positive("forward_drift_positive", D[1:], tol, lambda j: {"p": float(ctx.p[j + 1])})
        r.note = f"D(p0) = {D[0]:.6e}"
        if D[0] < -1e-6:
            r.verdict = "fail"
            r.note += " < -1e-6"
        out.append(r)

    irrot = gam.is_zero and ctx.max_slope <= SLOPE_LIMIT
    negative = gam.is_negative_on_range
    if not (irrot or negative):
        out.append(_skip("drift_increasing", "gamma = 0 with max|eta'| <= 1/sqrt(3), or gamma < 0, required"))
    elif trivial_zero:
        out.append(_skip("drift_increasing", "trivial wave: D = 0 identically"))
    else:
        regime = "guaranteed" if irrot or ctx.small else "outside"
        out.append(_positive("drift_increasing", np.diff(D), tol, lambda j: {"p": float(ctx.p[j + 1])},
                             note="" if regime == "guaranteed" else "outside guaranteed regime",
                             regime=regime))

    if not negative:
        out.append(_skip("drift_derivative_positive", "gamma < 0 required"))
    else:
        d = ctx.d
        integrand = d["hpp"] / d["hp"]  # psi_yy / psi_y^2 with dx = dq
        vals = integrate_q(integrand, ctx.dq, half=True)
        regime = "guaranteed" if ctx.small else "outside"
        out.append(_positive("drift_derivative_positive", vals, tol, lambda j: {"p": float(ctx.p[j])},
                             note="" if ctx.small else "outside guaranteed regime", regime=regime))
    return out


# Identities ------------------------------------------------------------------


def divergence_sides(ctx):
    """Per level: int_0^pi |psi_y|(1 + sigma'^2) dx and c pi + int int gamma dA."""
    d = ctx.d
    lhs = integrate_q((1 + d["hq"] ** 2) / d["hp"], ctx.dq, half=True)
    # int_{p0}^{p} gamma(-p') h_p dp' = gamma(-p) h + int_{p0}^{p} gamma'(-p') h dp'
    inner = ctx.gam_p[None, :] * d["h"] + cumulative_p(ctx.dgam_p[None, :] * d["h"], ctx.dp)
    rhs = ctx.frame.c * np.pi + integrate_q(inner, ctx.dq, half=True)
    return lhs, rhs


def _divergence_residuals(ctx):
    lhs, rhs = divergence_sides(ctx)
    return lhs - rhs


def operator_residuals(ctx):
    """Pointwise residuals of the differentiated field equations on the full grid.

    Keys: 'hq' (q-derivative), 'hp' (p-derivative), 'hqp' (mixed identity with
    the gamma' term multiplying h_p^2 directly), 'diffeo' (gamma = 0 only).
    """
    f = ctx.full
    dq, dp = ctx.dq, ctx.dp
    hq, hp, hqq, hpp, hqp = f["hq"], f["hp"], f["hqq"], f["hpp"], f["hqp"]
    G = ctx.gam_p[None, :]
    G1 = ctx.dgam_p[None, :]

    def derivs(w):
        wq, wp = diff_q(w, dq), diff_p(w, dp)
        return wq, wp, diff_q(wq, dq), diff_p(wp, dp), diff_p(wq, dp)

    out = {}
    wq, wp, wqq, wpp, wqp = derivs(hq)
    out["hq"] = ((1 + hq**2) * wpp - 2 * hp * hq * wqp + hp**2 * wqq + 2 * hq * hpp * wq
                 + (3 * G * hp**2 - 2 * hq * hqp) * wp)
    wq, wp, wqq, wpp, wqp = derivs(hp)
    out["hp"] = ((1 + hq**2) * wpp - 2 * hq * hp * wqp + hp**2 * wqq - 2 * hp * hqp * wq
                 + hp * (2 * hqq + 3 * G * hp) * wp - G1 * hp**2 * hp)
    w = hqp
    wq, wp, wqq, wpp, wqp = derivs(w)
    s = 1 + hq**2
    lhs = ((1 + hq**2) * wpp - 2 * hp * hq * wqp + hp**2 * wqq
           + (4 * hq * hpp - 2 * hp * hqp - 2 * hq * hp**2 * hqq / s) * wq
           + (3 * G * hp**2 - 2 * hq * hqp + 4 * hq**2 * hqq * hp / s - 2 * hpp * s / hp) * wp
           + (2 * (hqq * hpp - hqp**2) * (1 - 3 * hq**2) / s - 3 * G1 * hp**2) * w)
    rhs = 2 * hq * hp**2 / s * (G * (hqq * hpp + 2 * hqp**2) - G1 * hp * hqq)
    out["hqp"] = lhs - rhs
    out["diffeo"] = (hq * hpp - hp * hqp) ** 2 + hpp**2 + hp**2 * (hqq * hpp - hqp**2)
    return out


def _rows():
    return slice(EDGE_ROWS, -EDGE_ROWS)


def identity_residual_norms(sol, frame=None):
    """Max |residual| of each operator identity away from the top and bottom rows."""
    frame = derive_frame(sol) if frame is None else frame
    ctx = _Context(sol, frame)
    res = operator_residuals(ctx)
    return {k: float(np.max(np.abs(v[:, _rows()]))) for k, v in res.items()}


def identity_tolerance(ctx):
    """(dq^2 + dp^2) max|h|: the allowance for a second-order consistent residual."""
    return (ctx.dq**2 + ctx.dp**2) * float(np.max(np.abs(ctx.full["h"])))


def check_identity_suite(sol, frame, tol_eq=None):
    ctx = sol if isinstance(sol, _Context) else _Context(sol, frame)
    tol = measured_tol_eq(ctx) if tol_eq is None else tol_eq
    gam = ctx.gamma
    c = frame.c
    out = []
    lhs, rhs = divergence_sides(ctx)
    res = np.abs(lhs - rhs)
    j = int(np.argmax(res))
    out.append(_bound("divergence_identity", float(res[j]), 1e-4 * c * np.pi, {"p": float(ctx.p[j])}))
    if gam.is_nonpositive_on_range:
        out.append(_positive("divergence_integral_nondecreasing_with_depth", -np.diff(lhs), tol,
                             lambda j: {"p": float(ctx.p[j + 1])}, strict=False))
        if ctx.trivial and gam.is_zero:
            out.append(_skip("cpi_bound", "trivial wave: all levels flat"))
        else:
            abs_psi_y = integrate_q(1.0 / ctx.d["hp"], ctx.dq, half=True)
            out.append(_positive("cpi_bound", c * np.pi - abs_psi_y[1:], tol,
                                 lambda j: {"p": float(ctx.p[j + 1])}))
    else:
        out.append(_skip("divergence_integral_nondecreasing_with_depth", "gamma <= 0 required"))
        out.append(_skip("cpi_bound", "gamma <= 0 required"))

    ops = operator_residuals(ctx)
    itol = identity_tolerance(ctx)
    names = {"hq": "hq_operator_identity", "hp": "hp_operator_identity", "hqp": "hqp_operator_identity"}
    for key, cid in names.items():
        r = np.abs(ops[key][:, _rows()])
        k, j = np.unravel_index(int(np.argmax(r)), r.shape)
        out.append(_bound(cid, float(r[k, j]), itol,
                          {"q": float(ctx.grid.q[k]), "p": float(ctx.p[j + EDGE_ROWS])}))
    if gam.is_zero:
        r = np.abs(ops["diffeo"][:, _rows()])
        k, j = np.unravel_index(int(np.argmax(r)), r.shape)
        out.append(_bound("hdiffeomorphism_identity", float(r[k, j]), itol,
                          {"q": float(ctx.grid.q[k]), "p": float(ctx.p[j + EDGE_ROWS])}))
        f = ctx.full
        gap = f["hqp"] ** 2 - f["hqq"] * f["hpp"]
        out.append(_positive("hqp_squared_dominates", gap[:, _rows()], itol,
                             lambda k, j: {"q": float(ctx.grid.q[k]), "p": float(ctx.p[j + EDGE_ROWS])},
                             strict=False))
    else:
        out.append(_skip("hdiffeomorphism_identity", "gamma = 0 required"))
        out.append(_skip("hqp_squared_dominates", "gamma = 0 required"))

    p0 = ctx.sol.params.p0
    flux_err = [(abs(mass_flux(ctx.sol, frame, x) - p0), x) for x in (0.0, np.pi / 2, np.pi)]
    worst = max(flux_err)
    out.append(_bound("mass_flux_constant", worst[0], FLUX_TOL, {"x": float(worst[1])}))

    u_bed = frame.c - 1.0 / ctx.full["hp"][:, 0]
    stokes = abs(integrate_q(u_bed, ctx.dq))
    out.append(_bound("stokes_condition", float(stokes), STOKES_TOL * max(1.0, c), {"p": float(p0)}))
    return out


# Surface ---------------------------------------------------------------------


def check_surface_suite(sol, frame, tol_eq=None):
    ctx = sol if isinstance(sol, _Context) else _Context(sol, frame)
    g = ctx.g
    out = []
    half = ctx.grid.half
    x = ctx.q
    eta, eta_x, eta_xx = frame.eta[half], frame.eta_x[half], frame.eta_xx[half]
    inner = slice(1, ctx.m - 1)
    if ctx.gamma.is_nonpositive_on_range:
        W0 = frame.C - 2 * g * eta[0]
        btol = 1e-8 * g
        loc = lambda k: {"x": float(x[k + 1])}  # noqa: E731
        out.append(_positive("eta_xx_lower_bound", (eta_xx + g / W0)[inner], btol, loc, strict=False))
        out.append(_positive("eta_x_lower_bound", (eta_x + g * x / W0)[inner], btol, loc, strict=False))
        out.append(_positive("eta_lower_bound", (eta - eta[0] + g * x**2 / (2 * W0))[inner], btol, loc,
                             strict=False))
    else:
        for cid in ("eta_xx_lower_bound", "eta_x_lower_bound", "eta_lower_bound"):
            out.append(_skip(cid, "gamma <= 0 required"))

    f = ctx.full
    hq, hp = f["hq"][:, -1], f["hp"][:, -1]
    grad2 = (1 + hq**2) / hp**2
    bern = np.abs(grad2 + 2 * g * frame.eta - frame.C)
    k = int(np.argmax(bern))
    out.append(_bound("surface_bernoulli", float(bern[k]), 1e-8, {"x": float(frame.x[k])}))

    closed = surface_formulas(frame, float(ctx.gamma(0.0)), x, g)
    d = ctx.d
    floor = SCALE_FLOOR * frame.c / frame.d  # flat surfaces give round-off sized values
    fd_xy = ((d["hqp"] - d["hpp"] * d["hq"] / d["hp"]) / d["hp"] ** 2)[:, -1]
    fd_yy = (d["hpp"] / d["hp"] ** 3)[:, -1]
    for cid, a, b in (("psi_xy_closed_form", closed["psi_xy"], fd_xy),
                      ("psi_yy_closed_form", closed["psi_yy"], fd_yy)):
        scale = max(float(np.max(np.abs(b))), floor)
        err = float(np.max(np.abs(a - b))) / scale
        kk = int(np.argmax(np.abs(a - b)))
        out.append(_bound(cid, err, SURFACE_FORMULA_RTOL, {"x": float(x[kk])},
                          "relative to max |finite-difference value|"))
    half_hp = hp[half]
    rel = np.abs(closed["psi_y2"] * half_hp**2 - 1.0)
    k = int(np.argmax(rel))
    out.append(_bound("psi_y2_formula", float(rel[k]), 1e-8, {"x": float(x[k])},
                      "relative to |psi_y|^2 = 1/h_p^2"))
    fd = diff_q(1.0 / hp**2, ctx.dq)[half]
    err = float(np.max(np.abs(closed["Dx_psi_y2"] - fd)))
    scale = max(float(np.max(np.abs(fd))), floor * frame.c / frame.d)
    kk = int(np.argmax(np.abs(closed["Dx_psi_y2"] - fd)))
    out.append(_bound("dx_psi_y2_closed_form", err / scale, SURFACE_FORMULA_RTOL,
                      {"x": float(x[kk])}, "relative to max |finite-difference value|"))
    return out


# Report ----------------------------------------------------------------------

CHECK_IDS = (
    "streamline_slope_negative", "max_steepness_increasing", "max_u_increasing",
    "vertical_velocity_positive", "max_v_increasing", "surface_u_nonincreasing",
    "hqp_negative", "psi_xy_negative", "max_u_location",
    "forward_drift_positive", "drift_increasing", "drift_derivative_positive",
    "divergence_identity", "divergence_integral_nondecreasing_with_depth", "cpi_bound",
    "hq_operator_identity", "hp_operator_identity", "hqp_operator_identity",
    "hdiffeomorphism_identity", "hqp_squared_dominates", "mass_flux_constant", "stokes_condition",
    "eta_xx_lower_bound", "eta_x_lower_bound", "eta_lower_bound", "surface_bernoulli",
    "psi_xy_closed_form", "psi_yy_closed_form", "psi_y2_formula", "dx_psi_y2_closed_form",
)


def run_all(sol: WaveSolution, frame: PhysicalFrame | None = None) -> VerificationReport:
    violations = validate_solution(sol)
    meta = {
        "gamma": list(sol.gamma.coefficients),
        "g": sol.params.g,
        "p0": sol.params.p0,
        "grid": {"nq": sol.params.nq, "np": sol.params.np_},
        "amplitude": sol.amplitude,
        "Q": sol.Q,
        "validation": violations,
    }
    if violations:
        reason = "invalid solution: " + "; ".join(violations)
        return VerificationReport(meta=_clean(meta), checks=[_skip(cid, reason) for cid in CHECK_IDS])
    frame = derive_frame(sol) if frame is None else frame
    ctx = _Context(sol, frame)
    tol = measured_tol_eq(ctx)
    meta.update({"d": frame.d, "c": frame.c, "C": frame.C, "max_slope": ctx.max_slope,
                 "trivial_wave": ctx.trivial, "small_amplitude": ctx.small, "tol_eq": tol})
    checks = []
    checks += check_monotonicity_suite(ctx, frame, tol)
    checks += check_drift_suite(ctx, frame, tol)
    checks += check_identity_suite(ctx, frame, tol)
    checks += check_surface_suite(ctx, frame, tol)
    return VerificationReport(meta=_clean(meta), checks=checks)
