"""Symmetric skeleton polygons: coordinates, areas, and validity checks.

A polygon here has an even number n of sides, unit diameter, and a skeleton
(the graph of vertex pairs at distance exactly 1) consisting of an (n-1)-cycle
star plus one pendant edge lying on the polygon's axis of symmetry.  The whole
shape is determined by the n/2 turning angles of the star chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ANGLE_SUM_TOL = 1e-9
CLOSURE_TOL = 1e-9
MIRROR_TOL = 1e-12
SMALL_TOL = 1e-9
_BOUND_SLACK = 1e-9


class SkeletonError(ValueError):
    """The angles do not close up into a valid star skeleton."""


@dataclass(frozen=True)
class AngleVector:
    """Turning angles theta_0..theta_{n/2-1} of the star chain.

    theta_0 is the half-aperture at the apex (between the pendant edge and the
    first chain edge); theta_k is the interior turn at chain vertex k.  A
    feasible vector sums to pi/2, and the chain then ends on a horizontal step.
    """

    n: int
    theta: tuple[float, ...]

    def __post_init__(self):
        if self.n % 2 != 0 or self.n < 6:
            raise ValueError(f"n must be even and >= 6, got {self.n}")
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))
        if len(self.theta) != self.n // 2:
            raise ValueError(f"expected {self.n // 2} angles, got {len(self.theta)}")
        if not (-_BOUND_SLACK <= self.theta[0] <= math.pi / 6 + _BOUND_SLACK):
            raise ValueError(f"theta_0 = {self.theta[0]} outside [0, pi/6]")
        for k, t in enumerate(self.theta[1:], start=1):
            if not (-_BOUND_SLACK <= t <= math.pi / 3 + _BOUND_SLACK):
                raise ValueError(f"theta_{k} = {t} outside [0, pi/3]")

    @property
    def angle_sum_residual(self) -> float:
        return math.fsum(self.theta) - math.pi / 2

    @property
    def closure_residual(self) -> float:
        m = self.n // 2
        x, _ = chain_coordinates(self.theta)
        return x[m - 1] - half_sign(self.n)


@dataclass(frozen=True)
class SmallPolygon:
    """An n-gon with its unit-distance skeleton and convex boundary order."""

    n: int
    vertices: tuple[tuple[float, float], ...]
    skeleton_edges: tuple[tuple[int, int], ...]
    boundary: tuple[int, ...]


@dataclass(frozen=True)
class AreaReport:
    area: float
    upper_bound: float
    gap: float
    diameter: float
    is_convex: bool
    is_symmetric: bool
    is_small: bool

    @property
    def is_valid(self) -> bool:
        return self.is_convex and self.is_symmetric and self.is_small


def upper_bound(n: int) -> float:
    """Area bound no unit-diameter n-gon (n even) can reach."""
    _require_even(n, minimum=6)
    return n / 2 * math.sin(math.pi / n) - (n - 1) / 2 * math.tan(math.pi / (2 * n - 2))


def regular_area(n: int) -> float:
    """Area of the regular unit-diameter n-gon, n even."""
    _require_even(n, minimum=4)
    return n / 8 * math.sin(2 * math.pi / n)


def half_sign(n: int) -> float:
    """The required x-coordinate of chain vertex n/2 - 1: +1/2 or -1/2."""
    return 0.5 if (n // 2) % 2 == 0 else -0.5


def chain_coordinates(theta) -> tuple[np.ndarray, np.ndarray]:
    """Vertices 0..m of the star chain from its m turning angles.

    Steps are unit vectors that alternate direction: step j points at angle
    (sum of the first j+1 turns) from the +y axis, flipped every other step.
    """
    th = np.asarray(theta, dtype=float)
    s = np.cumsum(th)
    sign = np.where(np.arange(len(th)) % 2 == 0, 1.0, -1.0)
    x = np.concatenate(([0.0], np.cumsum(sign * np.sin(s))))
    y = np.concatenate(([0.0], np.cumsum(sign * np.cos(s))))
    return x, y


def skeleton_edge_list(n: int) -> tuple[tuple[int, int], ...]:
    """The (n-1)-cycle v_0 v_1 ... v_{n-2} plus the pendant edge v_0 v_{n-1}."""
    edges = [(k, k + 1) for k in range(n - 2)]
    edges.append((n - 2, 0))
    edges.append((0, n - 1))
    return tuple(edges)


def boundary_order(vertices) -> tuple[int, ...]:
    """Convex boundary order by polar angle about the vertex centroid."""
    pts = np.asarray(vertices, dtype=float)
    cx, cy = pts.mean(axis=0)
    ang = np.arctan2(pts[:, 1] - cy, pts[:, 0] - cx)
    order = sorted(range(len(pts)), key=lambda i: ang[i])
    k = order.index(0)
    return tuple(order[k:] + order[:k])


def polygon_from_vertices(n: int, vertices) -> SmallPolygon:
    """Assemble a SmallPolygon from raw vertices (standard skeleton indexing)."""
    _require_even(n, minimum=6)
    verts = tuple((float(x), float(y)) for x, y in vertices)
    if len(verts) != n:
        raise ValueError(f"expected {n} vertices, got {len(verts)}")
    return SmallPolygon(
        n=n,
        vertices=verts,
        skeleton_edges=skeleton_edge_list(n),
        boundary=boundary_order(verts),
    )


def vertices_from_angles(a: AngleVector) -> SmallPolygon:
    """Build the polygon: chain vertices 0..n/2, mirrors, and the apex (0, 1).

    Raises SkeletonError when the chain does not end at x = +-1/2, i.e. the
    horizontal closing edge of the star cannot exist for these angles.
    """
    if abs(a.angle_sum_residual) > ANGLE_SUM_TOL:
        raise ValueError(
            f"angles sum to pi/2 + {a.angle_sum_residual:.3e}; not a closed star"
        )
    n, m = a.n, a.n // 2
    x, y = chain_coordinates(a.theta)
    residual = x[m - 1] - half_sign(n)
    if abs(residual) > CLOSURE_TOL:
        raise SkeletonError(
            f"chain midpoint x = {x[m - 1]:.12f}, expected {half_sign(n):+.1f} "
            f"(residual {residual:.3e})"
        )
    verts = np.zeros((n, 2))
    verts[: m + 1, 0] = x
    verts[: m + 1, 1] = y
    for k in range(m + 1, n - 1):
        verts[k, 0] = -verts[n - 1 - k, 0]
        verts[k, 1] = verts[n - 1 - k, 1]
    verts[n - 1] = (0.0, 1.0)
    return polygon_from_vertices(n, verts)


def area_dissection(a: AngleVector) -> float:
    """Polygon area as twice the sum of the star's triangle areas.

    The first triangle (apex, origin, first chain vertex) contributes
    sin(theta_0)/2; triangle k >= 2 spans the origin and chain vertices
    k-1, k+1, giving the cross-product form below.
    """
    m = a.n // 2
    x, y = chain_coordinates(a.theta)
    k = np.arange(2, m)
    return math.sin(a.theta[0]) + float(np.sum(x[k + 1] * y[k - 1] - y[k + 1] * x[k - 1]))


def area_shoelace(p: SmallPolygon) -> float:
    """Standard signed-area sum over the convex boundary, as an absolute value."""
    pts = np.asarray(p.vertices, dtype=float)[list(p.boundary)]
    return shoelace(pts)


def shoelace(points) -> float:
    pts = np.asarray(points, dtype=float)
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)))


def max_pairwise_distance(points) -> float:
    """Diameter of a point set by brute force over all pairs."""
    pts = np.asarray(points, dtype=float)
    diff = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt((diff ** 2).sum(axis=2)).max())


def validate(p: SmallPolygon) -> AreaReport:
    """Check diameter, convexity, and mirror symmetry; failures set flags."""
    pts = np.asarray(p.vertices, dtype=float)
    n = p.n
    diameter = max_pairwise_distance(pts)

    ordered = pts[list(p.boundary)]
    edges = np.roll(ordered, -1, axis=0) - ordered
    cross = edges[:, 0] * np.roll(edges, -1, axis=0)[:, 1] - edges[:, 1] * np.roll(edges, -1, axis=0)[:, 0]
    is_convex = bool(np.all(cross >= -1e-12) or np.all(cross <= 1e-12))

    mirror = 0.0
    for k in range(1, n - 1):
        mirror = max(
            mirror,
            abs(pts[n - 1 - k, 0] + pts[k, 0]),
            abs(pts[n - 1 - k, 1] - pts[k, 1]),
        )
    is_symmetric = bool(mirror <= MIRROR_TOL)

    area = area_shoelace(p)
    ub = upper_bound(n)
    return AreaReport(
        area=area,
        upper_bound=ub,
        gap=ub - area,
        diameter=diameter,
        is_convex=is_convex,
        is_symmetric=is_symmetric,
        is_small=diameter <= 1.0 + SMALL_TOL,
    )


def _require_even(n: int, minimum: int) -> None:
    if not isinstance(n, (int, np.integer)):
        raise ValueError(f"n must be an integer, got {n!r}")
    if n % 2 != 0 or n < minimum:
        raise ValueError(f"n must be even and >= {minimum}, got {n}")
