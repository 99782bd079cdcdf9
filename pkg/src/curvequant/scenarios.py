"""Canonical measures and problems for the worked scenario gallery.

Every scenario that appears in the CLI, the tests, or the verification
gallery is built here exactly once, so the solver, the closed forms, and
the command line all agree on what "semicircle" or "exam1" means.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from curvequant import closed_form as cf
from curvequant.allocation import semicircle_allocate
from curvequant.geometry import Arc, Point2, Segment, UniformCurveMeasure
from curvequant.solver import CurveConstraint, FreePlane, Problem

LINE_HALF_WIDTH = 40.0


def interval_measure(a: float = 0.0, b: float = 1.0) -> UniformCurveMeasure:
    return UniformCurveMeasure((Segment(Point2(a, 0.0), Point2(b, 0.0)),))


def semicircle_measure() -> UniformCurveMeasure:
    return UniformCurveMeasure((
        Segment(Point2(-1.0, 0.0), Point2(1.0, 0.0)),
        Arc(Point2(0.0, 0.0), 1.0, 0.0, math.pi),
    ))


TRIANGLE_VERTICES = (Point2(0.0, 0.0), Point2(1.0, 0.0), Point2(0.5, math.sqrt(3.0) / 2.0))


def triangle_measure() -> UniformCurveMeasure:
    o, a, b = TRIANGLE_VERTICES
    return UniformCurveMeasure((Segment(o, a), Segment(a, b), Segment(b, o)))


def line_segment(m: float, c: float, half_width: float = LINE_HALF_WIDTH) -> Segment:
    return Segment(Point2(-half_width, m * -half_width + c),
                   Point2(half_width, m * half_width + c))


# ---------------------------------------------------------------------------
# problems


def interval_free_problem(n: int, beta: tuple[Point2, ...] = ()) -> Problem:
    return Problem(interval_measure(), (FreePlane(),), n, beta=beta)


def interval_left_problem(n: int) -> Problem:
    return interval_free_problem(n, beta=(Point2(0.0, 0.0),))


def interval_right_problem(n: int) -> Problem:
    return interval_free_problem(n, beta=(Point2(1.0, 0.0),))


def interval_interior_problem(n: int) -> Problem:
    return interval_free_problem(n, beta=(Point2(0.0, 0.0), Point2(1.0, 0.0)))


def interval_support_problem(n: int, beta: tuple[Point2, ...] = ()) -> Problem:
    """Points constrained to the support segment itself (sandwich scenarios)."""
    measure = interval_measure()
    return Problem(measure, (CurveConstraint(measure.curves[0]),), n, beta=beta)


def semicircle_problem(n: int) -> Problem:
    measure = semicircle_measure()
    constraints = tuple(CurveConstraint(c) for c in measure.curves)
    return Problem(measure, constraints, n, beta=(Point2(-1.0, 0.0), Point2(1.0, 0.0)))


def triangle_problem(n: int) -> Problem:
    measure = triangle_measure()
    constraints = tuple(CurveConstraint(c) for c in measure.curves)
    return Problem(measure, constraints, n, beta=TRIANGLE_VERTICES)


def line_problem(n: int, m: float, c: float) -> Problem:
    return Problem(interval_measure(), (CurveConstraint(line_segment(m, c)),), n)


def exam1_problem(n: int) -> Problem:
    """Shallow line y = x/4 + 1/4 with the origin forced: n line points + beta."""
    return Problem(interval_measure(), (CurveConstraint(line_segment(0.25, 0.25)),),
                   n + 1, beta=(Point2(0.0, 0.0),))


def exam2_problem(n: int) -> Problem:
    """Steep line y = x + 4 with the origin forced; degenerate for n >= 2."""
    return Problem(interval_measure(), (CurveConstraint(line_segment(1.0, 4.0)),),
                   n, beta=(Point2(0.0, 0.0),))


def offset_beta_problem(n_free: int) -> Problem:
    """Free points on [0,1] with beta just off the support at (0, 1/100)."""
    return Problem(interval_measure(), (FreePlane(),), n_free + 1,
                   beta=(Point2(0.0, 0.01),))


# ---------------------------------------------------------------------------
# verification gallery: scenario name -> problem + known-good configuration


@dataclass(frozen=True)
class GalleryEntry:
    build: Callable[[int], Problem]
    config: Callable[[int], tuple[Point2, ...]]
    n_range: tuple[int, int]


def _semicircle_config(n: int) -> tuple[Point2, ...]:
    return cf.semicircle_conditional(n, semicircle_allocate(n).parts[0]).points


GALLERY: dict[str, GalleryEntry] = {
    "interval-left": GalleryEntry(
        interval_left_problem,
        lambda n: cf.interval_left_endpoint(n, 0.0, 1.0).points,
        (1, 10)),
    "interval-right": GalleryEntry(
        interval_right_problem,
        lambda n: cf.interval_right_endpoint(n, 0.0, 1.0).points,
        (1, 10)),
    "interval-interior": GalleryEntry(
        interval_interior_problem,
        lambda n: cf.interval_interior(n, cf.IntervalScenario(0.0, 1.0, 0.0, 1.0)).points,
        (2, 10)),
    "line-shallow": GalleryEntry(
        lambda n: line_problem(n, 0.25, 0.25),
        lambda n: cf.line_constraint_optimal(
            n, cf.LineConstraintScenario(0.0, 1.0, 0.25, 0.25)).points,
        (1, 10)),
    "line-steep": GalleryEntry(
        lambda n: line_problem(n, 1.0, 4.0),
        lambda n: cf.line_constraint_optimal(
            n, cf.LineConstraintScenario(0.0, 1.0, 1.0, 4.0)).points,
        (1, 10)),
    "semicircle": GalleryEntry(
        semicircle_problem, _semicircle_config, (3, 12)),
    "triangle": GalleryEntry(
        triangle_problem,
        lambda n: cf.triangle_conditional(n).points,
        (3, 12)),
    "exam1": GalleryEntry(
        exam1_problem,
        lambda n: cf.exam1_conditional(n).points,
        (3, 10)),
}
