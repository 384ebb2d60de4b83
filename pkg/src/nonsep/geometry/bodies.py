"""Body types (polygon, ball, 3-polytope) and their support-function basics."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import DegenerateInput, NonPositiveRatio

EPS_G = 1e-9  # default geometric tolerance
EPS_NORM = 1e-12  # normalization / collinearity tolerance


def _frozen(a, dtype=float):
    arr = np.array(a, dtype=dtype)
    arr.flags.writeable = False
    return arr


def direction(v) -> np.ndarray:
    """Return ``v`` scaled to unit Euclidean length."""
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if not np.isfinite(n) or n < 1e-300:
        raise DegenerateInput("cannot normalize a zero or non-finite vector")
    return _frozen(v / n)


def angle_direction(theta) -> np.ndarray:
    """Unit vector(s) (cos t, sin t); vectorized over ``theta``."""
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_points(points, tol: float = EPS_NORM) -> np.ndarray:
    """Andrew's monotone chain; returns CCW hull vertices, collinear points dropped.

    The chain itself only pops on non-positive turns; near-collinear and
    near-duplicate vertices are removed afterwards in a cyclic pass, since a tolerant
    pop inside the chain can discard a genuine corner when roundoff perturbs the sort
    order of almost vertical point runs. May return fewer than three points.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if not np.all(np.isfinite(pts)):
        raise DegenerateInput("non-finite coordinates")
    pts = np.unique(pts, axis=0)  # lexicographic sort by x then y
    if len(pts) <= 2:
        return pts

    def chain(seq):
        h = []
        for p in seq:
            while len(h) >= 2 and _cross(h[-2], h[-1], p) <= 0.0:
                h.pop()
            h.append(p)
        return h

    hull = chain(pts)[:-1] + chain(pts[::-1])[:-1]
    eps = tol * max(1.0, float(np.abs(pts).max()))
    changed = True
    while changed and len(hull) > 2:
        changed = False
        for k in range(len(hull)):
            a, b, c = hull[k - 1], hull[k], hull[(k + 1) % len(hull)]
            ab, bc = np.hypot(*(b - a)), np.hypot(*(c - b))
            if ab <= eps or _cross(a, b, c) <= tol * ab * bc:
                del hull[k]
                changed = True
                break
    return np.array(hull).reshape(-1, 2)


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Strictly convex polygon with counter-clockwise vertices."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise DegenerateInput(f"polygon vertices must have shape (m, 2), got {v.shape}")
        if len(v) < 3:
            raise DegenerateInput("a polygon needs at least 3 vertices")
        if not np.all(np.isfinite(v)):
            raise DegenerateInput("non-finite polygon vertex")
        e = np.roll(v, -1, axis=0) - v
        en = np.roll(e, -1, axis=0)
        cr = e[:, 0] * en[:, 1] - e[:, 1] * en[:, 0]
        scale = np.linalg.norm(e, axis=1) * np.linalg.norm(en, axis=1)
        if np.any(cr <= EPS_NORM * scale):
            raise DegenerateInput("vertex chain is not strictly convex and counter-clockwise")
        object.__setattr__(self, "vertices", _frozen(v))

    @property
    def dimension(self) -> int:
        return 2

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"ConvexPolygon({self.vertices.tolist()!r})"

    @cached_property
    def edges(self) -> np.ndarray:
        return _frozen(np.roll(self.vertices, -1, axis=0) - self.vertices)

    @cached_property
    def normals(self) -> np.ndarray:
        """Unit outward normals, one per edge (edge i runs from vertex i to i+1)."""
        e = self.edges
        n = np.stack([e[:, 1], -e[:, 0]], axis=1)
        return _frozen(n / np.linalg.norm(n, axis=1)[:, None])

    @cached_property
    def offsets(self) -> np.ndarray:
        return _frozen(np.einsum("ij,ij->i", self.normals, self.vertices))

    @cached_property
    def area(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    @cached_property
    def centroid(self) -> np.ndarray:
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        c = v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]
        return _frozen(((v + w) * c[:, None]).sum(axis=0) / (6.0 * self.area))

    @cached_property
    def perimeter(self) -> float:
        return float(np.linalg.norm(self.edges, axis=1).sum())

    def translate(self, x) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices + np.asarray(x, dtype=float))

    def scale(self, c: float) -> "ConvexPolygon":
        if c <= 0:
            raise NonPositiveRatio(f"scale factor must be positive, got {c}")
        return ConvexPolygon(self.vertices * c)

    def reflect(self) -> "ConvexPolygon":
        """The point reflection -P (orientation is preserved)."""
        return ConvexPolygon(-self.vertices)

    def is_symmetric(self, tol: float = EPS_G) -> bool:
        """True if P = -P up to ``tol`` (Hausdorff distance of vertex sets)."""
        return _vertex_hausdorff(self.vertices, -self.vertices) <= tol


@dataclass(frozen=True, eq=False)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float).reshape(-1)
        if not np.all(np.isfinite(c)):
            raise DegenerateInput("non-finite ball center")
        if not (self.radius > 0) or not np.isfinite(self.radius):
            raise NonPositiveRatio(f"ball radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", _frozen(c))
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dimension(self) -> int:
        return len(self.center)

    def __repr__(self):
        return f"Ball({self.center.tolist()!r}, {self.radius!r})"

    def is_symmetric(self, tol: float = EPS_G) -> bool:
        return float(np.linalg.norm(self.center)) <= tol


@dataclass(frozen=True, eq=False)
class Polytope3:
    """3-polytope {x : <a_j, x> <= b_j} together with its vertex list."""

    vertices: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        a = np.asarray(self.normals, dtype=float)
        b = np.asarray(self.offsets, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or len(v) < 4:
            raise DegenerateInput("a 3-polytope needs at least 4 vertices in R^3")
        if a.shape != (len(b), 3):
            raise DegenerateInput("facet normals and offsets disagree in shape")
        if not np.allclose(np.linalg.norm(a, axis=1), 1.0, atol=EPS_NORM):
            raise DegenerateInput("facet normals must be unit vectors")
        slack = v @ a.T - b[None, :]
        if np.any(slack > EPS_G):
            raise DegenerateInput("a vertex violates a facet inequality")
        if np.any((np.abs(slack) <= EPS_G).sum(axis=0) < 3):
            raise DegenerateInput("every facet must be supported by at least 3 vertices")
        object.__setattr__(self, "vertices", _frozen(v))
        object.__setattr__(self, "normals", _frozen(a))
        object.__setattr__(self, "offsets", _frozen(b))

    @classmethod
    def from_points(cls, points) -> "Polytope3":
        from scipy.spatial import ConvexHull, QhullError

        pts = np.asarray(points, dtype=float)
        try:
            hull = ConvexHull(pts)
        except QhullError as exc:
            raise DegenerateInput(f"points do not span a 3-polytope: {exc}") from None
        verts = pts[hull.vertices]
        normals, offsets = [], []
        for eq in hull.equations:
            n, off = eq[:3], -eq[3]
            if any(np.linalg.norm(n - m) < 1e-9 and abs(off - o) < 1e-9 for m, o in zip(normals, offsets)):
                continue
            normals.append(n)
            offsets.append(off)
        return cls(verts, np.array(normals), np.array(offsets))

    @property
    def dimension(self) -> int:
        return 3

    def __repr__(self):
        return f"Polytope3({len(self.vertices)} vertices, {len(self.offsets)} facets)"

    def is_symmetric(self, tol: float = EPS_G) -> bool:
        return _vertex_hausdorff(self.vertices, -self.vertices) <= tol


Body = ConvexPolygon | Ball | Polytope3


def _vertex_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def convex_hull(points) -> ConvexPolygon:
    """Minimal counter-clockwise convex hull of a planar point set."""
    hull = convex_hull_points(points)
    if len(hull) < 3:
        raise DegenerateInput("points are collinear (or fewer than 3 distinct points)")
    return ConvexPolygon(hull)


def support(body: Body, u) -> float | np.ndarray:
    """Support function h(u) = max <x, u> over the body; vectorized over rows of ``u``."""
    u = np.asarray(u, dtype=float)
    U = np.atleast_2d(u)
    if isinstance(body, Ball):
        h = U @ body.center + body.radius * np.linalg.norm(U, axis=1)
    else:
        h = (U @ body.vertices.T).max(axis=1)
    return float(h[0]) if u.ndim == 1 else h


def width(body: Body, u) -> float | np.ndarray:
    u = np.asarray(u, dtype=float)
    return support(body, u) + support(body, -u)


def realize_homothet(body: Body, tau: float, x) -> Body:
    """The positive homothet x + tau * body."""
    if not tau > 0:
        raise NonPositiveRatio(f"homothety ratio must be positive, got {tau}")
    x = np.asarray(x, dtype=float)
    if isinstance(body, Ball):
        return Ball(x + tau * body.center, tau * body.radius)
    if isinstance(body, Polytope3):
        return Polytope3(x + tau * body.vertices, body.normals, tau * body.offsets + body.normals @ x)
    return ConvexPolygon(x + tau * body.vertices)


def contains(outer: Body, p, tol: float = EPS_G) -> bool | np.ndarray:
    """Membership test, every inequality slackened by ``tol``; vectorized over rows of ``p``."""
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    p = np.asarray(p, dtype=float)
    P = np.atleast_2d(p)
    if isinstance(outer, Ball):
        ok = np.linalg.norm(P - outer.center, axis=1) <= outer.radius + tol
    else:
        ok = np.all(P @ outer.normals.T - outer.offsets <= tol, axis=1)
    return bool(ok[0]) if p.ndim == 1 else ok


def regular_polygon(m: int, side: float = 1.0, rotation: float = 0.0) -> ConvexPolygon:
    """Regular m-gon with the given side length, centered at the origin."""
    if m < 3:
        raise DegenerateInput("a regular polygon needs m >= 3")
    R = side / (2.0 * np.sin(np.pi / m))
    th = rotation + 2.0 * np.pi * np.arange(m) / m
    return ConvexPolygon(R * angle_direction(th))


def unit_triangle() -> ConvexPolygon:
    """Regular triangle of unit side, horizontal bottom side, centroid at the origin."""
    s3 = np.sqrt(3.0)
    return ConvexPolygon([[-0.5, -s3 / 6], [0.5, -s3 / 6], [0.0, s3 / 3]])


def unit_square() -> ConvexPolygon:
    """The square [-1/2, 1/2]^2."""
    return ConvexPolygon([[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]])


def regular_hexagon(side: float = 1.0) -> ConvexPolygon:
    return regular_polygon(6, side)


def regular_tetrahedron() -> Polytope3:
    """Unit-edge regular tetrahedron whose bottom facet is ``unit_triangle`` (z-shifted),
    centroid at the origin."""
    tri = unit_triangle().vertices
    h = np.sqrt(2.0 / 3.0)
    pts = np.vstack([np.column_stack([tri, np.zeros(3)]), [[0.0, 0.0, h]]])
    pts = pts - pts.mean(axis=0)
    return Polytope3.from_points(pts)
