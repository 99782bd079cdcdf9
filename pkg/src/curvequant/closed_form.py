"""Closed-form optimal quantizers: intervals, a constraining line, the
half-circle boundary, and the equilateral triangle.

Every operation returns the explicit point configuration together with the
published distortion expression for it. Point formulas are exact optima;
see the per-scenario notes on the error expressions for n where an
extrapolated polynomial is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from curvequant.geometry import Point2

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class IntervalScenario:
    """Uniform law on [a, b] with a distinguished subinterval [c, d]."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("need a < b")
        if not (self.a <= self.c < self.d <= self.b):
            raise ValueError("need a <= c < d <= b")


@dataclass(frozen=True)
class LineConstraintScenario:
    """Uniform law on [a, b] x {0}, quantizer points confined to y = m*x + c.

    The optional window (d, e) restricts where along the line points may go;
    when present it must be wide enough that the unconstrained-on-the-line
    optimum already fits, which is the inequality checked below.
    """

    a: float
    b: float
    m: float
    c: float
    d: float | None = None
    e: float | None = None

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("need a < b")
        if (self.d is None) != (self.e is None):
            raise ValueError("window needs both d and e")
        if self.d is not None:
            if not self.d < self.e:
                raise ValueError("need d < e")
            mm = self.m * self.m + 1.0
            if mm * self.d + self.m * self.c > self.a or mm * self.e + self.m * self.c < self.b:
                raise ValueError("window does not contain the optimal points")


@dataclass(frozen=True)
class ClosedFormResult:
    points: tuple[Point2, ...]
    error: float
    allocation: tuple[int, ...] | None = None


def interval_interior(m: int, scen: IntervalScenario) -> ClosedFormResult:
    """m points on [c, d] including both ends, error against uniform [a, b]."""
    if m < 2:
        raise ValueError("interior placement needs m >= 2")
    step = (scen.d - scen.c) / (m - 1)
    points = tuple(Point2(scen.c + (j - 1) * step, 0.0) for j in range(1, m + 1))
    error = (scen.d - scen.c) ** 3 / (12.0 * (scen.b - scen.a) * (m - 1) ** 2)
    return ClosedFormResult(points, error)


def interval_left_endpoint(n: int, a: float, b: float) -> ClosedFormResult:
    """Optimal n points on [a, b] when a itself must be one of them."""
    if a >= b:
        raise ValueError("need a < b")
    if n < 1:
        raise ValueError("need n >= 1")
    step = 2.0 * (b - a) / (2 * n - 1)
    points = tuple(Point2(a + (j - 1) * step, 0.0) for j in range(1, n + 1))
    error = (b - a) ** 2 / (3.0 * (2 * n - 1) ** 2)
    return ClosedFormResult(points, error)


def interval_right_endpoint(n: int, a: float, b: float) -> ClosedFormResult:
    """Mirror of interval_left_endpoint: the right endpoint b is forced.

    Equals the left-endpoint configuration translated by (b-a)/(2n-1).
    """
    if a >= b:
        raise ValueError("need a < b")
    if n < 1:
        raise ValueError("need n >= 1")
    shift = (b - a) / (2 * n - 1)
    base = interval_left_endpoint(n, a, b)
    points = tuple(Point2(p.x + shift, 0.0) for p in base.points)
    return ClosedFormResult(points, base.error)


def _line_floor(scen: LineConstraintScenario) -> float:
    # mean squared distance from the support to the line itself
    a, b, m, c = scen.a, scen.b, scen.m, scen.c
    mm1 = 1.0 + m * m
    if m == 0.0:
        return c * c / mm1
    num = (m * b + c) ** 3 - (m * a + c) ** 3
    return num / (3.0 * m * (b - a) * mm1)


def line_constraint_optimal(n: int, scen: LineConstraintScenario) -> ClosedFormResult:
    """Optimal n points on the line y = m*x + c for uniform [a, b] x {0}.

    The point abscissas are exact optima for every n. The error field carries
    the published closed-form value: the two- and three-point expressions are
    exact, and the general-n polynomial is the published extrapolation of
    them (exact whenever m = 0; for n = 1 the orthogonal-decomposition value
    is used since no published expression covers it).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    a, b, m, c = scen.a, scen.b, scen.m, scen.c
    mm1 = 1.0 + m * m
    xs = [(2 * i - 1) * (b - a) / (2 * n * mm1) + (a - c * m) / mm1 for i in range(1, n + 1)]
    points = tuple(Point2(x, m * x + c) for x in xs)
    if n == 1:
        error = _line_floor(scen) + (b - a) ** 2 / (12.0 * mm1)
    elif n == 2:
        error = (a * a * (16 * m * m + 1) + 2 * a * b * (8 * m * m - 1) + 48 * a * c * m
                 + b * b * (16 * m * m + 1) + 48 * b * c * m + 48 * c * c) / (48.0 * mm1)
    else:
        error = (-48 * (a - b) ** 2 * m * m
                 + (a - b) * (a - b + 72 * c * m + 8 * (11 * a - 2 * b) * m * m) * n
                 - 12 * (a - b) * m * (5 * c + (4 * a + b) * m) * n * n
                 + 12 * (c + a * m) ** 2 * n ** 3) / (12.0 * mm1 * n ** 3)
    return ClosedFormResult(points, error)


def line_constraint_exact_error(n: int, scen: LineConstraintScenario) -> float:
    """True distortion of the line_constraint_optimal configuration.

    Orthogonal decomposition: squared distance to a line point splits into
    the fixed distance-to-line part plus a one-dimensional n-means problem
    along the line, giving floor + (b-a)^2 / (12 (1+m^2) n^2).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    return _line_floor(scen) + (scen.b - scen.a) ** 2 / (12.0 * (1.0 + scen.m ** 2) * n * n)


def semicircle_error(n1: int, n2: int) -> float:
    """Distortion on the closed half-disk boundary with n1 diameter points
    and n2 arc points, endpoints shared, all equally spaced."""
    if n1 < 2 or n2 < 2:
        raise ValueError("need n1 >= 2 and n2 >= 2")
    return (2.0 / (3.0 * (2.0 + math.pi))) * (
        1.0 / (n1 - 1) ** 2
        - 6.0 * (n2 - 1) * math.sin(math.pi / (2.0 * (n2 - 1)))
        + 3.0 * math.pi
    )


def semicircle_conditional(n: int, n1: int) -> ClosedFormResult:
    """Optimal n points on the half-disk boundary with n1 on the diameter.

    The two corner points (+-1, 0) count toward both the diameter and the
    arc, so the arc receives n - n1 + 2 points of which n - n1 are interior.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if not 2 <= n1 <= n:
        raise ValueError("need 2 <= n1 <= n")
    n2 = n - n1 + 2
    points = [Point2(-1.0 + 2.0 * (j - 1) / (n1 - 1), 0.0) for j in range(1, n1 + 1)]
    for j in range(2, n2):
        ang = (j - 1) * math.pi / (n2 - 1)
        points.append(Point2(math.cos(ang), math.sin(ang)))
    return ClosedFormResult(tuple(points), semicircle_error(n1, n2), (n1, n2))


def triangle_error(n1: int, n2: int, n3: int) -> float:
    """Distortion for an equilateral unit triangle with nj points per side
    (vertices shared between adjacent sides)."""
    if min(n1, n2, n3) < 2:
        raise ValueError("all side counts must be >= 2")
    return (1.0 / 36.0) * (1.0 / (n1 - 1) ** 2 + 1.0 / (n2 - 1) ** 2 + 1.0 / (n3 - 1) ** 2)


def triangle_split(n: int) -> tuple[int, int, int]:
    """Per-side counts (vertices double-counted) that balance the three sides."""
    if n < 3:
        raise ValueError("need n >= 3")
    k, r = divmod(n, 3)
    if r == 0:
        return (k + 1, k + 1, k + 1)
    if r == 1:
        return (k + 2, k + 1, k + 1)
    return (k + 2, k + 2, k + 1)


def triangle_conditional(n: int) -> ClosedFormResult:
    """Optimal n points on the boundary of the unit equilateral triangle.

    Sides are traversed (0,0)->(1,0)->(1/2, sqrt3/2)->(0,0); each side
    contributes its equally spaced points minus the shared far vertex, so
    exactly n distinct points come back.
    """
    n1, n2, n3 = triangle_split(n)
    points: list[Point2] = []
    for x in (j / (n1 - 1) for j in range(n1 - 1)):
        points.append(Point2(x, 0.0))
    for x in (j / (n2 - 1) for j in range(n2 - 1)):
        points.append(Point2(-x / 2.0 + 1.0, SQRT3 * x / 2.0))
    for x in (j / (n3 - 1) for j in range(n3 - 1)):
        points.append(Point2(-x / 2.0 + 0.5, -SQRT3 * x / 2.0 + SQRT3 / 2.0))
    return ClosedFormResult(tuple(points), triangle_error(n1, n2, n3), (n1, n2, n3))


def exam1_conditional(n: int) -> ClosedFormResult:
    """Conditional quantizer for uniform [0,1] x {0} with the origin forced
    and n further points confined to the line y = x/4 + 1/4.

    Returns n + 1 points total, indexed the way the published formulas are:
    the error field carries the published V_{n+1} expression, which is an
    extrapolated polynomial; exam1_exact_error gives the true distortion of
    the same configuration.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    d = (n * n + n * math.sqrt(17.0 * n * n + 52.0) - 4.0) / (16.0 * n * n - 4.0)
    points = [Point2(0.0, 0.0)]
    for i in range(1, n + 1):
        x = -(8.0 * d * (2 * i - 2 * n - 1) - 16.0 * i + n + 8.0) / (17.0 * n)
        points.append(Point2(x, x / 4.0 + 0.25))
    error = d ** 3 / 3.0 + (
        d * d * (3 * n ** 3 - 12 * n ** 2 + 26 * n - 12)
        + 2 * d * (3 * n ** 3 - 3 * n ** 2 - 8 * n + 12)
        + 3 * n ** 3 + 18 * n ** 2 - 10 * n - 12
    ) / (51.0 * n ** 3)
    return ClosedFormResult(tuple(points), error)


def exam1_breakpoint(n: int) -> float:
    """Boundary d between the forced origin's cell and the line points' cells."""
    if n < 1:
        raise ValueError("need n >= 1")
    return (n * n + n * math.sqrt(17.0 * n * n + 52.0) - 4.0) / (16.0 * n * n - 4.0)


def exam1_exact_error(n: int) -> float:
    """True distortion of the exam1_conditional configuration.

    Splits at d: the origin owns [0, d), the line points quantize the
    pushforward of [d, 1] at the one-dimensional n-means rate.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    d = exam1_breakpoint(n)
    return d ** 3 / 3.0 + (8.0 - (1.0 + d) ** 3) / 51.0 + (4.0 / 51.0) * (1.0 - d) ** 3 / (n * n)
