"""Plain-text SVG figures with fixed styling.

Every drawn element carries its data values as attributes (data-x, data-u,
...) so tests and CI can read the geometry back without rasterising.
Coordinates are written with fixed precision, which keeps the output
byte-stable between runs.
"""
from __future__ import annotations

import numpy as np

from .fields import locate_hodograph, velocity_at_hodograph
from .kinematics import drift_profile, streamline

WIDTH, HEIGHT = 800, 420
MARGIN = 50
STROKE = {"axis": "#000000", "streamline": "#1f4e79", "arrow": "#b22222",
          "surface": "#000000", "drift": "#1f4e79", "orbit": "#b22222"}


def _f(v):
    return f"{v:.3f}"


def _fd(v):
    return repr(float(v))


class _Panel:
    """Affine map from data ranges to a pixel box (y axis pointing up)."""

    def __init__(self, x0, y0, w, h, xr, yr):
        self.x0, self.y0, self.w, self.h = x0, y0, w, h
        self.xr, self.yr = xr, yr

    def __call__(self, x, y):
        px = self.x0 + (x - self.xr[0]) / (self.xr[1] - self.xr[0]) * self.w
        py = self.y0 + self.h - (y - self.yr[0]) / (self.yr[1] - self.yr[0]) * self.h
        return px, py

    def frame(self, xlabel, ylabel, title):
        x0, y0, w, h = self.x0, self.y0, self.w, self.h
        return [
            f'<rect class="axes" x="{_f(x0)}" y="{_f(y0)}" width="{_f(w)}" height="{_f(h)}" '
            f'fill="none" stroke="{STROKE["axis"]}" stroke-width="1"/>',
            f'<text x="{_f(x0 + w / 2)}" y="{_f(y0 + h + 30)}" text-anchor="middle" font-size="12">{xlabel}</text>',
            f'<text x="{_f(x0 - 35)}" y="{_f(y0 + h / 2)}" text-anchor="middle" font-size="12" '
            f'transform="rotate(-90 {_f(x0 - 35)} {_f(y0 + h / 2)})">{ylabel}</text>',
            f'<text x="{_f(x0 + w / 2)}" y="{_f(y0 - 10)}" text-anchor="middle" font-size="13">{title}</text>',
            f'<text x="{_f(x0)}" y="{_f(y0 + h + 15)}" text-anchor="middle" font-size="10">{self.xr[0]:.3g}</text>',
            f'<text x="{_f(x0 + w)}" y="{_f(y0 + h + 15)}" text-anchor="middle" font-size="10">{self.xr[1]:.3g}</text>',
            f'<text x="{_f(x0 - 5)}" y="{_f(y0 + h)}" text-anchor="end" font-size="10">{self.yr[0]:.3g}</text>',
            f'<text x="{_f(x0 - 5)}" y="{_f(y0 + 8)}" text-anchor="end" font-size="10">{self.yr[1]:.3g}</text>',
        ]


def _polyline(panel, xs, ys, cls, extra=""):
    pts = " ".join(f"{_f(a)},{_f(b)}" for a, b in (panel(x, y) for x, y in zip(xs, ys)))
    return (f'<polyline class="{cls}" {extra}points="{pts}" fill="none" '
            f'stroke="{STROKE[cls]}" stroke-width="1"/>')


def _document(body):
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">')
    return "\n".join([head, '<rect width="100%" height="100%" fill="#ffffff"/>', *body, "</svg>"]) + "\n"


def streamline_figure(sol, frame, n_lines=9, n_arrow_x=17, n_arrow_y=6):
    """Streamlines over one period, crest at x = 0, plus physical-frame velocity arrows."""
    p0 = sol.params.p0
    top = float(np.max(frame.eta))
    panel = _Panel(MARGIN + 20, MARGIN, WIDTH - 2 * MARGIN - 20, HEIGHT - 2 * MARGIN,
                   (-np.pi, np.pi), (-frame.d, top + 0.05 * frame.d))
    body = panel.frame("x", "y", "streamlines and velocity field")
    xs = np.linspace(-np.pi, np.pi, 129)
    for p in np.linspace(p0, 0.0, n_lines):
        line = streamline(sol, frame, p, xs)
        cls = "surface" if p == 0.0 else "streamline"
        body.append(_polyline(panel, xs, line.sigma, cls, f'data-p="{_fd(p)}" '))
    # arrows: interior points only, scaled by the largest speed
    ax = np.linspace(-np.pi, np.pi, n_arrow_x)[1:-1]
    samples = []
    for x in ax:
        eta_x = frame.interp.evaluate(x, 0.0)[0] - frame.d
        for frac in np.linspace(0.0, 1.0, n_arrow_y + 2)[1:-1]:
            y = -frame.d + frac * (eta_x + frame.d)
            q, p = locate_hodograph(sol, frame, x, y)
            u, v = velocity_at_hodograph(sol, frame, q, p)
            samples.append((x, y, u, v))
    speed = max(float(np.hypot(u, v)) for _, _, u, v in samples) or 1.0
    length = 0.8 * panel.w / (n_arrow_x - 1)
    for x, y, u, v in samples:
        px, py = panel(x, y)
        # arrow directions drawn in pixel space (v up is -y on screen)
        dx, dy = length * u / speed, -length * v / speed
        body.append(
            f'<line class="arrow" data-x="{_fd(x)}" data-y="{_fd(y)}" data-u="{_fd(u)}" data-v="{_fd(v)}" '
            f'x1="{_f(px)}" y1="{_f(py)}" x2="{_f(px + dx)}" y2="{_f(py + dy)}" '
            f'stroke="{STROKE["arrow"]}" stroke-width="1"/>'
        )
    return _document(body)


def drift_figure(sol, frame, trajectories=()):
    """Left: D(p) per period.  Right: particle paths in the physical frame,
    shifted so each starts at the origin."""
    p, _, D = drift_profile(sol, frame)
    half = (WIDTH - 3 * MARGIN) / 2
    h = HEIGHT - 2 * MARGIN
    dr = (min(0.0, float(np.min(D))), float(np.max(D)) or 1.0)
    left = _Panel(MARGIN + 10, MARGIN, half - 10, h, (dr[0], dr[1] * 1.05 if dr[1] > 0 else 1.0),
                  (float(p[0]), float(p[-1])))
    body = left.frame("drift per period D", "p", "drift profile")
    body.append(_polyline(left, D, p, "drift"))
    for pj, Dj in zip(p, D):
        px, py = left(Dj, pj)
        body.append(f'<circle class="drift-point" data-p="{_fd(pj)}" data-drift="{_fd(Dj)}" '
                    f'cx="{_f(px)}" cy="{_f(py)}" r="1.5" fill="{STROKE["drift"]}"/>')
    if trajectories:
        X = np.concatenate([t.X - t.X[0] for t in trajectories])
        Y = np.concatenate([t.Y - t.Y[0] for t in trajectories])
        pad_x = 0.05 * (np.ptp(X) or 1.0)
        pad_y = 0.05 * (np.ptp(Y) or 1.0)
        right = _Panel(2 * MARGIN + half + 10, MARGIN, half - 10, h,
                       (float(X.min() - pad_x), float(X.max() + pad_x)),
                       (float(Y.min() - pad_y), float(Y.max() + pad_y)))
        body += right.frame("X - X0", "Y - Y0", "particle paths")
        for t in trajectories:
            extra = f'data-x0="{_fd(t.start[0])}" data-y0="{_fd(t.start[1])}" '
            if t.drift is not None:
                extra += f'data-drift="{_fd(t.drift)}" '
            step = max(1, t.X.size // 600)
            body.append(_polyline(right, t.X[::step] - t.X[0], t.Y[::step] - t.Y[0], "orbit", extra))
    return _document(body)
