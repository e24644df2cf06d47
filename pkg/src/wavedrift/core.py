"""Shared types, vorticity polynomials, the hodograph grid and the
finite-difference / quadrature primitives used by every other module.

Grid arrays are stored with shape ``(nq, np_ + 1)``: axis 0 runs over the
periodic q-nodes ``-pi, -pi + dq, ..., pi - dq`` and axis 1 over the p-nodes
``p0, ..., 0`` (index 0 is the flat bed, index ``np_`` the free surface).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DomainError

_SIGN_SAMPLES = 2001


@dataclass(frozen=True)
class VorticitySpec:
    """Polynomial vorticity function gamma(s) = sum c_i s**i on [0, smax].

    ``smax`` is ``-p0``.  An empty coefficient list is the irrotational case.
    """

    coefficients: tuple = ()
    smax: float = 1.0

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        # trailing zeros carry no information and would confuse degree checks
        while coeffs and coeffs[-1] == 0.0:
            coeffs = coeffs[:-1]
        object.__setattr__(self, "coefficients", coeffs)
        if not self.smax > 0:
            raise DomainError("vorticity range [0, smax] needs smax > 0")

    def __call__(self, s, order=0):
        """Evaluate gamma (or its ``order``-th derivative) without domain checks."""
        c = np.asarray(self.coefficients, dtype=float)
        if c.size == 0:
            return np.zeros_like(np.asarray(s, dtype=float)) * 1.0
        if order:
            c = P.polyder(c, order)
            if c.size == 0:
                return np.zeros_like(np.asarray(s, dtype=float)) * 1.0
        return P.polyval(s, c)

    def antiderivative(self, s):
        """int_0^s gamma."""
        c = np.asarray(self.coefficients, dtype=float)
        if c.size == 0:
            return np.zeros_like(np.asarray(s, dtype=float)) * 1.0
        return P.polyval(s, P.polyint(c))

    def range_extrema(self, order=0):
        """(min, max) of the ``order``-th derivative over [0, smax], exactly."""
        c = np.asarray(self.coefficients, dtype=float)
        if order:
            c = P.polyder(c, order) if c.size else c
        if c.size == 0:
            return 0.0, 0.0
        candidates = [0.0, self.smax]
        if c.size > 2:
            for r in P.polyroots(P.polyder(c)):
                if abs(r.imag) < 1e-12 and 0.0 < r.real < self.smax:
                    candidates.append(r.real)
        vals = P.polyval(np.array(candidates), c)
        return float(vals.min()), float(vals.max())

    def sign_on_range(self, order=0):
        """'zero', 'positive', 'negative', 'nonnegative', 'nonpositive' or 'mixed'."""
        lo, hi = self.range_extrema(order)
        if lo == 0.0 and hi == 0.0:
            return "zero"
        if lo > 0:
            return "positive"
        if hi < 0:
            return "negative"
        if lo >= 0:
            return "nonnegative"
        if hi <= 0:
            return "nonpositive"
        return "mixed"

    @property
    def is_zero(self):
        return len(self.coefficients) == 0

    @property
    def is_constant(self):
        return len(self.coefficients) <= 1

    @property
    def is_nonpositive_on_range(self):
        return self.range_extrema()[1] <= 0.0

    @property
    def is_negative_on_range(self):
        return self.range_extrema()[1] < 0.0

    @property
    def derivative_sign_on_range(self):
        return self.sign_on_range(1)

    def dense_extrema(self, order=0, n=_SIGN_SAMPLES):
        """Brute-force (min, max) by sampling; used to cross-check ``range_extrema``."""
        vals = self(np.linspace(0.0, self.smax, n), order)
        return float(np.min(vals)), float(np.max(vals))


def eval_vorticity(spec: VorticitySpec, s: float) -> float:
    if not 0.0 <= s <= spec.smax:
        raise DomainError(f"s={s} outside vorticity range [0, {spec.smax}]")
    return float(spec(s))


def eval_vorticity_derivative(spec: VorticitySpec, s: float) -> float:
    if not 0.0 <= s <= spec.smax:
        raise DomainError(f"s={s} outside vorticity range [0, {spec.smax}]")
    return float(spec(s, 1))


@dataclass(frozen=True)
class WaveParameters:
    g: float = 9.81
    p0: float = -1.0
    nq: int = 128
    np_: int = 64

    L = 2.0 * np.pi

    def __post_init__(self):
        if not self.g > 0:
            raise DomainError("g must be positive")
        if not self.p0 < 0:
            raise DomainError("p0 must be negative")
        if self.nq < 16 or self.nq % 2:
            raise DomainError("nq must be even and >= 16")
        if self.np_ < 8:
            raise DomainError("np must be >= 8")

    @cached_property
    def grid(self) -> HodographGrid:
        return HodographGrid(self.nq, self.np_, self.p0)


@dataclass(frozen=True)
class HodographGrid:
    nq: int
    np_: int
    p0: float
    q: np.ndarray = field(init=False, repr=False, compare=False)
    p: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        q = -np.pi + self.dq * np.arange(self.nq)
        p = np.linspace(self.p0, 0.0, self.np_ + 1)
        q.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def dq(self):
        return 2.0 * np.pi / self.nq

    @property
    def dp(self):
        return -self.p0 / self.np_

    @property
    def shape(self):
        return (self.nq, self.np_ + 1)

    @property
    def crest_index(self):
        """Index of q = 0."""
        return self.nq // 2

    @property
    def half(self):
        """Full-grid q indices of the half period q = 0, dq, ..., pi."""
        m = self.nq // 2
        return np.r_[np.arange(m, self.nq), 0]

    def mirror(self):
        """Index map i -> index of -q_i."""
        return (-np.arange(self.nq)) % self.nq

    def expand_half(self, half_values):
        """Even extension of values given on q in [0, pi] to the full grid."""
        half_values = np.asarray(half_values)
        idx = np.abs(np.arange(self.nq) - self.nq // 2)
        return half_values[idx]

    def mesh(self):
        return np.meshgrid(self.q, self.p, indexing="ij")


@dataclass(frozen=True)
class HeightField:
    """h(q_i, p_j) on a hodograph grid."""

    grid: HodographGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != self.grid.shape:
            raise DomainError(f"height field shape {v.shape} != grid {self.grid.shape}")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def evenness_defect(self):
        v = self.values
        return float(np.max(np.abs(v - v[self.grid.mirror()])))

    @property
    def surface(self):
        return self.values[:, -1]


# Finite differences ---------------------------------------------------------


def diff_q(f, dq):
    """Second-order periodic central difference along axis 0."""
    f = np.asarray(f, dtype=float)
    return (np.roll(f, -1, axis=0) - np.roll(f, 1, axis=0)) / (2.0 * dq)


def diff_qq(f, dq):
    f = np.asarray(f, dtype=float)
    return (np.roll(f, -1, axis=0) - 2.0 * f + np.roll(f, 1, axis=0)) / dq**2


def diff_p(f, dp):
    """Second-order derivative along the last axis, one-sided at both ends."""
    f = np.asarray(f, dtype=float)
    out = np.empty_like(f)
    out[..., 1:-1] = (f[..., 2:] - f[..., :-2]) / (2.0 * dp)
    out[..., 0] = (-3.0 * f[..., 0] + 4.0 * f[..., 1] - f[..., 2]) / (2.0 * dp)
    out[..., -1] = (3.0 * f[..., -1] - 4.0 * f[..., -2] + f[..., -3]) / (2.0 * dp)
    return out


def diff_pp(f, dp):
    """Compact second derivative in p; second-order one-sided 4-point rows at the ends."""
    f = np.asarray(f, dtype=float)
    out = np.empty_like(f)
    out[..., 1:-1] = (f[..., 2:] - 2.0 * f[..., 1:-1] + f[..., :-2]) / dp**2
    out[..., 0] = (2.0 * f[..., 0] - 5.0 * f[..., 1] + 4.0 * f[..., 2] - f[..., 3]) / dp**2
    out[..., -1] = (2.0 * f[..., -1] - 5.0 * f[..., -2] + 4.0 * f[..., -3] - f[..., -4]) / dp**2
    return out


def integrate_q(values, dq, half=False):
    """Trapezoid rule in q.

    Full period: ``values`` holds the ``nq`` periodic samples (spectrally
    accurate).  Half period: ``values`` holds samples on ``0, dq, ..., pi``
    (``nq/2 + 1`` points, last axis or axis 0).
    """
    values = np.asarray(values, dtype=float)
    if not half:
        return dq * np.sum(values, axis=0)
    return dq * (np.sum(values, axis=0) - 0.5 * (values[0] + values[-1]))


def cumulative_p(values, dp):
    """Cumulative trapezoid along the last axis, starting from 0 at the bed."""
    values = np.asarray(values, dtype=float)
    out = np.zeros_like(values)
    out[..., 1:] = np.cumsum(0.5 * dp * (values[..., 1:] + values[..., :-1]), axis=-1)
    return out
