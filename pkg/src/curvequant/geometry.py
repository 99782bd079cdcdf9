"""Plane curves, uniform measures on them, and Voronoi-split quadrature.

Supports are finite unions of segments and circular arcs, parametrized by
arc length. Distortion integrals against a finite site set are computed by
splitting every curve at the Voronoi breakpoints and applying fixed-order
Gauss-Legendre panels on each smooth piece.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

PARAM_TOL = 1e-12
_PREGRID = 1024
_GL_PANELS = 16

_gl_nodes, _gl_weights = np.polynomial.legendre.leggauss(10)

TWO_PI = 2.0 * math.pi


class DegenerateCellError(ValueError):
    """A Voronoi cell that was asked for carries (numerically) zero mass."""


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("point coordinates must be finite")


@dataclass(frozen=True)
class Segment:
    p0: Point2
    p1: Point2

    def __post_init__(self):
        if self.p0.x == self.p1.x and self.p0.y == self.p1.y:
            raise ValueError("segment endpoints must differ")


@dataclass(frozen=True)
class Arc:
    """Circular arc traversed counterclockwise from theta0 to theta1."""

    center: Point2
    radius: float
    theta0: float
    theta1: float

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError("arc radius must be positive and finite")
        # at most one full turn, so arc length is unambiguous
        if not (self.theta0 < self.theta1 <= self.theta0 + TWO_PI):
            raise ValueError("need theta0 < theta1 <= theta0 + 2*pi")


Curve = Segment | Arc


@dataclass(frozen=True)
class ParamPoint:
    """Arc-length position s on the curve at curve_index in some curve list."""

    curve_index: int
    s: float


@dataclass(frozen=True)
class UniformCurveMeasure:
    """Uniform probability measure on a finite union of curves."""

    curves: tuple[Curve, ...]
    total_length: float = field(init=False)
    density: float = field(init=False)

    def __post_init__(self):
        curves = tuple(self.curves)
        if not curves:
            raise ValueError("measure needs at least one curve")
        object.__setattr__(self, "curves", curves)
        total = sum(curve_length(c) for c in curves)
        object.__setattr__(self, "total_length", total)
        object.__setattr__(self, "density", 1.0 / total)


def curve_length(c: Curve) -> float:
    if isinstance(c, Segment):
        return math.hypot(c.p1.x - c.p0.x, c.p1.y - c.p0.y)
    return c.radius * (c.theta1 - c.theta0)


def curve_eval(c: Curve, s: float) -> Point2:
    """Unit-speed point on c at arc length s, with s in [0, length]."""
    length = curve_length(c)
    slack = PARAM_TOL * max(1.0, length)
    if s < -slack or s > length + slack:
        raise ValueError(f"arc-length parameter {s} outside [0, {length}]")
    s = min(max(s, 0.0), length)
    x, y = _eval_array(c, np.array([s]))[0]
    return Point2(float(x), float(y))


def sq_dist(p: Point2, q: Point2) -> float:
    return (p.x - q.x) ** 2 + (p.y - q.y) ** 2


def _eval_array(c: Curve, s: np.ndarray) -> np.ndarray:
    """Vectorized curve_eval without range checks; returns an (k, 2) array."""
    if isinstance(c, Segment):
        length = curve_length(c)
        t = s / length
        x = c.p0.x + t * (c.p1.x - c.p0.x)
        y = c.p0.y + t * (c.p1.y - c.p0.y)
    else:
        ang = c.theta0 + s / c.radius
        x = c.center.x + c.radius * np.cos(ang)
        y = c.center.y + c.radius * np.sin(ang)
    return np.stack([x, y], axis=-1)


def _sites_array(sites) -> np.ndarray:
    if len(sites) == 0:
        raise ValueError("site list must be nonempty")
    return np.array([(p.x, p.y) for p in sites], dtype=float)


def _owners(c: Curve, s: np.ndarray, sites_xy: np.ndarray) -> np.ndarray:
    """Index of the nearest site at each parameter; ties to the lower index."""
    pts = _eval_array(c, s)
    d2 = ((pts[:, None, :] - sites_xy[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d2, axis=1)


def voronoi_breakpoints(c: Curve, sites) -> list[float]:
    """Arc-length values where the nearest-site index changes along c.

    Changes are detected on a 1024-point pre-grid and each one is located by
    bisection to 1e-12 parameter tolerance. Curve endpoints are excluded.
    """
    sites_xy = _sites_array(sites)
    length = curve_length(c)
    grid = np.linspace(0.0, length, _PREGRID + 1)
    owners = _owners(c, grid, sites_xy)
    flip = owners[:-1] != owners[1:]
    lo = grid[:-1][flip]
    hi = grid[1:][flip]
    left = owners[:-1][flip]
    while lo.size and np.max(hi - lo) > PARAM_TOL:
        mid = 0.5 * (lo + hi)
        same = _owners(c, mid, sites_xy) == left
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    out: list[float] = []
    for s in 0.5 * (lo + hi):
        s = float(s)
        if s <= PARAM_TOL or s >= length - PARAM_TOL:
            continue
        if out and s - out[-1] <= PARAM_TOL:
            continue
        out.append(s)
    return out


def _pieces(c: Curve, sites_xy: np.ndarray):
    """Split c at breakpoints; yield (s0, s1, owner_index) per smooth piece."""
    length = curve_length(c)
    cuts = [0.0]
    cuts.extend(voronoi_breakpoints(c, [Point2(x, y) for x, y in sites_xy]))
    cuts.append(length)
    for s0, s1 in zip(cuts[:-1], cuts[1:]):
        if s1 - s0 <= 0.0:
            continue
        mid = np.array([0.5 * (s0 + s1)])
        owner = int(_owners(c, mid, sites_xy)[0])
        yield s0, s1, owner


def _gl_integral_min_sqdist(c: Curve, s0: float, s1: float, sites_xy: np.ndarray) -> float:
    """Integral of min-squared-distance over one smooth piece (GL panels)."""
    h = (s1 - s0) / _GL_PANELS
    starts = s0 + h * np.arange(_GL_PANELS)
    s = (starts[:, None] + 0.5 * h * (_gl_nodes[None, :] + 1.0)).ravel()
    pts = _eval_array(c, s)
    d2 = ((pts[:, None, :] - sites_xy[None, :, :]) ** 2).sum(axis=2).min(axis=1)
    w = np.tile(0.5 * h * _gl_weights, _GL_PANELS)
    return float(d2 @ w)


def distortion(measure: UniformCurveMeasure, sites) -> float:
    """Mean squared distance from the support to the nearest site.

    Computed as density * sum over Voronoi-split pieces of Gauss-Legendre
    panel integrals; the integrand is smooth on each piece, so the fixed
    10-point x 16-panel rule is accurate to roundoff here.
    """
    sites_xy = _sites_array(sites)
    total = 0.0
    for c in measure.curves:
        for s0, s1, _ in _pieces(c, sites_xy):
            total += _gl_integral_min_sqdist(c, s0, s1, sites_xy)
    return measure.density * total


def _piece_moment(c: Curve, s0: float, s1: float) -> tuple[float, float]:
    """Closed-form first moment: integral of the position over [s0, s1]."""
    ds = s1 - s0
    if isinstance(c, Segment):
        mid = _eval_array(c, np.array([0.5 * (s0 + s1)]))[0]
        return float(mid[0]) * ds, float(mid[1]) * ds
    r = c.radius
    a0 = c.theta0 + s0 / r
    a1 = c.theta0 + s1 / r
    mx = c.center.x * ds + r * r * (math.sin(a1) - math.sin(a0))
    my = c.center.y * ds - r * r * (math.cos(a1) - math.cos(a0))
    return mx, my


def voronoi_cell_stats(measure: UniformCurveMeasure, sites):
    """Per-site Voronoi cell mass and unnormalized position moment.

    Returns (masses, moments): masses is an (m,) probability vector and
    moments an (m, 2) array of arc-length integrals of the position over each
    cell, so moments[i] / (cell arc length) is the conditional mean. Both use
    exact piece lengths and closed-form moments, no quadrature.
    """
    sites_xy = _sites_array(sites)
    m = len(sites_xy)
    lengths = np.zeros(m)
    moments = np.zeros((m, 2))
    for c in measure.curves:
        for s0, s1, owner in _pieces(c, sites_xy):
            lengths[owner] += s1 - s0
            mx, my = _piece_moment(c, s0, s1)
            moments[owner, 0] += mx
            moments[owner, 1] += my
    return lengths * measure.density, moments


def voronoi_masses(measure: UniformCurveMeasure, sites) -> list[float]:
    """Probability mass of each site's Voronoi cell on the support."""
    masses, _ = voronoi_cell_stats(measure, sites)
    return [float(v) for v in masses]


def conditional_mean(measure: UniformCurveMeasure, sites, site_index: int) -> Point2:
    """Mean of the measure restricted to the indexed site's Voronoi cell."""
    masses, moments = voronoi_cell_stats(measure, sites)
    mass = masses[site_index]
    if mass <= 1e-12:
        raise DegenerateCellError(f"cell {site_index} has zero mass")
    cell_length = mass * measure.total_length
    return Point2(float(moments[site_index, 0] / cell_length),
                  float(moments[site_index, 1] / cell_length))


def project_to_curve(c: Curve, p: Point2) -> float:
    """Arc-length parameter of the point on c closest to p."""
    length = curve_length(c)
    if isinstance(c, Segment):
        vx, vy = c.p1.x - c.p0.x, c.p1.y - c.p0.y
        t = ((p.x - c.p0.x) * vx + (p.y - c.p0.y) * vy) / (vx * vx + vy * vy)
        return min(max(t, 0.0), 1.0) * length
    dx, dy = p.x - c.center.x, p.y - c.center.y
    if dx == 0.0 and dy == 0.0:
        return 0.5 * length
    phi = math.atan2(dy, dx)
    rel = (phi - c.theta0) % TWO_PI
    if rel <= c.theta1 - c.theta0:
        return rel * c.radius
    # outside the angular window: nearer endpoint wins
    e0 = curve_eval(c, 0.0)
    e1 = curve_eval(c, length)
    return 0.0 if sq_dist(p, e0) <= sq_dist(p, e1) else length
