"""Morphometric observables of a simulation state.

Ring quotient (proliferative fraction of the total tumor mass), thresholded
tumor region, its lumped area, the radius of its smallest enclosing circle,
and the surface quotient (area over enclosing-disc area).  All functions are
pure and operate on immutable snapshots, so they are safe to call
concurrently.

On coarse meshes the surface quotient can exceed 1 because the thresholded
region is measured through vertex lumped weights while the enclosing radius
is measured through vertex coordinates; this is a known discretization
artifact that vanishes under refinement and is covered by tests rather than
hidden.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .errors import EmptyRegionError, InvalidParameterError
from .mesh import StructuredTriMesh, lumped_integral

__all__ = [
    "DEFAULT_THRESHOLD",
    "MetricsSample",
    "ThresholdedRegion",
    "ring_quotient",
    "threshold_indicator",
    "tumor_area",
    "max_radius",
    "surface_quotient",
    "total_density",
    "compute_sample",
]

DEFAULT_THRESHOLD = 0.001

# Seed for the shuffle inside the enclosing-circle search; fixed so repeated
# runs perform identical arithmetic.
_SHUFFLE_SEED = 20260809


@dataclass(frozen=True)
class MetricsSample:
    """One time point of the observable set.

    ``sq`` and ``r_max`` are NaN when the thresholded region is empty (a
    vanished tumor has no meaningful shape); ``rq`` falls back to 1 in that
    case, matching its value for a purely proliferative seed.
    """

    time: float
    rq: float
    sq: float
    area: float
    r_max: float
    tumor_density: float
    total_tn_density: float
    phi_density: float


@dataclass(frozen=True)
class ThresholdedRegion:
    """Vertices where the total tumor density reaches the threshold."""

    indices: np.ndarray
    coordinates: np.ndarray

    def __len__(self) -> int:
        return int(self.indices.size)


def ring_quotient(state, mesh: StructuredTriMesh) -> float:
    """Proliferative share of the total tumor mass, in [0, 1] for
    nonnegative fields.

    A vanishing denominator (no tumor at all) returns 1: the state is treated
    as all proliferative, which keeps the value continuous with a necrosis
    free seed.
    """
    numerator = lumped_integral(mesh, state.t_field)
    denominator = lumped_integral(mesh, state.t_field + state.n_field)
    if abs(denominator) < 1e-14:
        return 1.0
    return numerator / denominator


def threshold_indicator(
    state, mesh: StructuredTriMesh, theta: float = DEFAULT_THRESHOLD
) -> ThresholdedRegion:
    """Vertices with T + N >= theta (inclusive)."""
    mask = (state.t_field + state.n_field) >= theta
    indices = np.flatnonzero(mask)
    return ThresholdedRegion(indices=indices, coordinates=mesh.vertices[indices])


def tumor_area(region: ThresholdedRegion, mesh: StructuredTriMesh) -> float:
    """Lumped area of the thresholded region (0 for an empty region)."""
    return float(mesh.lumped_weights[region.indices].sum())


def max_radius(region: ThresholdedRegion) -> float:
    """Radius of the smallest circle enclosing the region's vertices."""
    if len(region) == 0:
        raise EmptyRegionError("cannot enclose an empty region")
    circle = _smallest_enclosing_circle(region.coordinates)
    return circle[2]


def surface_quotient(
    state, mesh: StructuredTriMesh, theta: float = DEFAULT_THRESHOLD
) -> float:
    """Region area divided by the area of its smallest enclosing circle.

    Near 1 for round regions, near 0 for irregular ones.  A region smaller
    than half a cell edge cannot resolve any shape and is defined to be
    perfectly regular (returns 1).  An empty region is an error; report a
    vanished tumor upstream instead of assigning it a regularity.
    """
    region = threshold_indicator(state, mesh, theta)
    if len(region) == 0:
        raise EmptyRegionError("thresholded region is empty")
    radius = max_radius(region)
    if radius < mesh.cell_edge / 2.0:
        return 1.0
    return tumor_area(region, mesh) / (math.pi * radius * radius)


def total_density(state, mesh: StructuredTriMesh, selector: str) -> float:
    """Lumped integral of the selected field combination.

    ``selector`` is one of "T", "N", "T+N", "Phi".
    """
    if selector == "T":
        values = state.t_field
    elif selector == "N":
        values = state.n_field
    elif selector == "T+N":
        values = state.t_field + state.n_field
    elif selector == "Phi":
        values = state.phi_field
    else:
        raise InvalidParameterError(f"unknown density selector {selector!r}")
    return lumped_integral(mesh, values)


def compute_sample(
    state, mesh: StructuredTriMesh, theta: float = DEFAULT_THRESHOLD
) -> MetricsSample:
    """Evaluate the full observable set for one state."""
    region = threshold_indicator(state, mesh, theta)
    if len(region) == 0:
        sq = float("nan")
        r_max = float("nan")
    else:
        r_max = max_radius(region)
        if r_max < mesh.cell_edge / 2.0:
            sq = 1.0
        else:
            sq = tumor_area(region, mesh) / (math.pi * r_max * r_max)
    return MetricsSample(
        time=state.time,
        rq=ring_quotient(state, mesh),
        sq=sq,
        area=tumor_area(region, mesh),
        r_max=r_max,
        tumor_density=total_density(state, mesh, "T"),
        total_tn_density=total_density(state, mesh, "T+N"),
        phi_density=total_density(state, mesh, "Phi"),
    )


# ---------------------------------------------------------------------------
# Smallest enclosing circle: randomized incremental construction with exact
# one/two/three point circles.  Expected linear time; deterministic because
# the shuffle seed is fixed.


# Containment uses a 1 + 1e-14 multiplicative slack so candidate circles that
# touch a point within rounding error are accepted.
_EPS = 1.0 + 1e-14


def _contains(circle, p) -> bool:
    return math.hypot(p[0] - circle[0], p[1] - circle[1]) <= circle[2] * _EPS


def _diameter_circle(a, b):
    cx = (a[0] + b[0]) / 2.0
    cy = (a[1] + b[1]) / 2.0
    r = max(math.hypot(cx - a[0], cy - a[1]), math.hypot(cx - b[0], cy - b[1]))
    return (cx, cy, r)


def _circumcircle(a, b, c):
    """Circle through three points, or None when they are collinear."""
    # Translate toward the origin before solving; keeps the 2x2 system well
    # scaled for nearly degenerate triangles.
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2.0
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2.0
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if d == 0.0:
        return None
    ux = (
        (ax * ax + ay * ay) * (by - cy)
        + (bx * bx + by * by) * (cy - ay)
        + (cx * cx + cy * cy) * (ay - by)
    ) / d
    uy = (
        (ax * ax + ay * ay) * (cx - bx)
        + (bx * bx + by * by) * (ax - cx)
        + (cx * cx + cy * cy) * (bx - ax)
    ) / d
    r = max(
        math.hypot(ux - ax, uy - ay),
        math.hypot(ux - bx, uy - by),
        math.hypot(ux - cx, uy - cy),
    )
    return (ux + ox, uy + oy, r)


def _cross(ox, oy, ax, ay, bx, by) -> float:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def _circle_two_fixed(points, a, b):
    """Smallest circle through a and b containing points[:len(points)]."""
    base = _diameter_circle(a, b)
    left = None
    right = None
    for q in points:
        if _contains(base, q):
            continue
        side = _cross(a[0], a[1], b[0], b[1], q[0], q[1])
        cand = _circumcircle(a, b, q)
        if cand is None:
            continue
        cand_side = _cross(a[0], a[1], b[0], b[1], cand[0], cand[1])
        if side > 0.0:
            if left is None or cand_side > _cross(
                a[0], a[1], b[0], b[1], left[0], left[1]
            ):
                left = cand
        elif side < 0.0:
            if right is None or cand_side < _cross(
                a[0], a[1], b[0], b[1], right[0], right[1]
            ):
                right = cand
    if left is None and right is None:
        return base
    if left is None:
        return right
    if right is None:
        return left
    return left if left[2] <= right[2] else right


def _circle_one_fixed(points, a):
    circle = (a[0], a[1], 0.0)
    for i, q in enumerate(points):
        if not _contains(circle, q):
            if circle[2] == 0.0:
                circle = _diameter_circle(a, q)
            else:
                circle = _circle_two_fixed(points[: i + 1], a, q)
    return circle


def _smallest_enclosing_circle(coordinates) -> tuple[float, float, float]:
    points = [(float(x), float(y)) for x, y in np.asarray(coordinates)]
    random.Random(_SHUFFLE_SEED).shuffle(points)
    circle = None
    for i, p in enumerate(points):
        if circle is None or not _contains(circle, p):
            circle = _circle_one_fixed(points[: i + 1], p)
    return circle
