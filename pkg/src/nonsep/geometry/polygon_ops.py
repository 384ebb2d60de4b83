"""Constructive operations on convex polygons."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from ..errors import DegenerateInput
from .bodies import EPS_G, ConvexPolygon, convex_hull, convex_hull_points, support


def _start_index(v: np.ndarray) -> int:
    # lowest y, ties broken by lowest x
    return int(np.lexsort((v[:, 0], v[:, 1]))[0])


def minkowski_sum(P: ConvexPolygon, Q: ConvexPolygon) -> ConvexPolygon:
    """P + Q by merging the edge sequences in angular order."""
    if not isinstance(P, ConvexPolygon) or not isinstance(Q, ConvexPolygon):
        raise DegenerateInput("minkowski_sum needs two ConvexPolygon operands; translate points with realize_homothet")
    a = np.roll(P.vertices, -_start_index(P.vertices), axis=0)
    b = np.roll(Q.vertices, -_start_index(Q.vertices), axis=0)
    ea = np.roll(a, -1, axis=0) - a
    eb = np.roll(b, -1, axis=0) - b
    ang_a = np.mod(np.arctan2(ea[:, 1], ea[:, 0]), 2 * np.pi)
    ang_b = np.mod(np.arctan2(eb[:, 1], eb[:, 0]), 2 * np.pi)
    out = [a[0] + b[0]]
    i = j = 0
    while i < len(ea) or j < len(eb):
        if j == len(eb) or (i < len(ea) and ang_a[i] < ang_b[j]):
            out.append(out[-1] + ea[i])
            i += 1
        elif i == len(ea) or ang_b[j] < ang_a[i]:
            out.append(out[-1] + eb[j])
            j += 1
        else:
            out.append(out[-1] + ea[i] + eb[j])
            i += 1
            j += 1
    # the last point closes the loop onto out[0]; canonicalize drops parallel-edge joints
    return convex_hull(np.array(out[:-1]))


def central_symmetrization(Q: ConvexPolygon) -> ConvexPolygon:
    """Q0 = (Q - Q) / 2, an origin-symmetric polygon with the widths of Q."""
    return ConvexPolygon(minkowski_sum(Q, Q.reflect()).vertices * 0.5)


class Relation(enum.Enum):
    DISJOINT = "disjoint"
    TOUCHING = "touching"
    OVERLAPPING = "overlapping"


class HullRelation(NamedTuple):
    kind: Relation
    distance: float = 0.0
    witness: tuple[np.ndarray, np.ndarray] | None = None  # closest points when disjoint


def _closest_on_segments(p: np.ndarray, a: np.ndarray, b: np.ndarray):
    """For every point p_i and segment (a_j, b_j): distances (n, m) and foot points (n, m, 2)."""
    ab = b - a
    ap = p[:, None, :] - a[None, :, :]
    denom = np.einsum("ij,ij->i", ab, ab)
    t = np.clip(np.einsum("nmk,mk->nm", ap, ab) / denom[None, :], 0.0, 1.0)
    foot = a[None, :, :] + t[..., None] * ab[None, :, :]
    return np.linalg.norm(p[:, None, :] - foot, axis=2), foot


def polygon_distance(P: ConvexPolygon, Q: ConvexPolygon):
    """Minimum vertex-to-edge distance in both directions, with the closest pair.

    Equals the Euclidean distance when P and Q are disjoint.
    """
    best = (np.inf, None, None)
    for A, B, swap in ((P, Q, False), (Q, P, True)):
        d, foot = _closest_on_segments(A.vertices, B.vertices, np.roll(B.vertices, -1, axis=0))
        i, j = np.unravel_index(np.argmin(d), d.shape)
        if d[i, j] < best[0]:
            pa, pb = A.vertices[i], foot[i, j]
            best = (float(d[i, j]), pb if swap else pa, pa if swap else pb)
    return best


def separating_gap(P: ConvexPolygon, Q: ConvexPolygon) -> float:
    """Largest gap over the edge normals of both polygons (negative means penetration)."""
    g1 = (Q.vertices @ P.normals.T).min(axis=0) - P.offsets
    g2 = (P.vertices @ Q.normals.T).min(axis=0) - Q.offsets
    return float(max(g1.max(), g2.max()))


def hull_relation(P: ConvexPolygon, Q: ConvexPolygon, tol: float = EPS_G) -> HullRelation:
    """Classify two convex polygons as disjoint (with distance), touching or overlapping."""
    gap = separating_gap(P, Q)
    if gap > 0:
        dist, p, q = polygon_distance(P, Q)
        if dist > tol:
            return HullRelation(Relation.DISJOINT, dist, (p, q))
        return HullRelation(Relation.TOUCHING, dist)
    if gap >= -tol:
        return HullRelation(Relation.TOUCHING, 0.0)
    return HullRelation(Relation.OVERLAPPING, 0.0)


def clip_halfplane(points: np.ndarray, a: np.ndarray, c: float, tol: float = 0.0) -> np.ndarray:
    """Sutherland-Hodgman clip of a convex point cycle by {p : <a, p> <= c + tol}."""
    if len(points) == 0:
        return points
    s = points @ a - c
    inside = s <= tol
    if inside.all():
        return points
    if not inside.any():
        return points[:0]
    out = []
    n = len(points)
    for k in range(n):
        p, q = points[k], points[(k + 1) % n]
        sp, sq = s[k], s[(k + 1) % n]
        if sp <= tol:
            out.append(p)
        if (sp <= tol) != (sq <= tol):
            t = sp / (sp - sq)
            out.append(p + t * (q - p))
    return np.array(out).reshape(-1, 2)


def _dedupe(points: np.ndarray, tol: float) -> np.ndarray:
    kept: list[np.ndarray] = []
    for p in points:
        if not any(np.linalg.norm(p - k) <= tol for k in kept):
            kept.append(p)
    return np.array(kept).reshape(-1, 2)


@dataclass(frozen=True, eq=False)
class Erosion:
    """Result of Y (-) X = {t : t + X in Y}.

    ``points`` holds 0 points (infeasible), 1 point or 2 segment endpoints (degenerate
    regions; ``empty`` is True but the points are valid translations), or the CCW
    vertices of a full-dimensional region.
    """

    points: np.ndarray

    @property
    def empty(self) -> bool:
        return len(self.points) < 3

    @property
    def feasible(self) -> bool:
        return len(self.points) > 0

    @property
    def polygon(self) -> ConvexPolygon | None:
        return ConvexPolygon(self.points) if len(self.points) >= 3 else None


def _classify_region(pts: np.ndarray, tol: float) -> np.ndarray:
    pts = _dedupe(pts, tol)
    if len(pts) <= 1:
        return pts
    d = np.linalg.norm(pts[:, None] - pts[None, :], axis=2)
    i, j = np.unravel_index(np.argmax(d), d.shape)
    a, b = pts[i], pts[j]
    ab = (b - a) / d[i, j]
    off = np.abs((pts - a) @ np.array([-ab[1], ab[0]]))
    if off.max() <= tol:
        return np.array([a, b])
    hull = convex_hull_points(pts)
    if len(hull) < 3:
        return np.array([a, b])
    return hull


def erosion(Y: ConvexPolygon, X: ConvexPolygon, tol: float = EPS_G) -> Erosion:
    """All translations t with t + X contained in Y, as an intersection of Y's facet halfplanes."""
    region = Y.vertices - X.vertices[0]
    hx = support(X, Y.normals)
    for a, b, h in zip(Y.normals, Y.offsets, hx):
        region = clip_halfplane(region, a, b - h, tol)
        if len(region) == 0:
            return Erosion(np.zeros((0, 2)))
    return Erosion(_classify_region(region, tol))


def polygon_intersection(P: ConvexPolygon, Q: ConvexPolygon) -> np.ndarray:
    """Vertices of P ∩ Q (possibly fewer than three points when degenerate)."""
    region = P.vertices
    for a, b in zip(Q.normals, Q.offsets):
        region = clip_halfplane(region, a, b)
    return region


def largest_inscribed_triangle(P: ConvexPolygon) -> tuple[np.ndarray, float]:
    """Maximum-area triangle spanned by vertices of P.

    For convex polygons an optimal inscribed triangle can always be found among the
    vertices, so plain enumeration is exact.
    """
    v = P.vertices
    idx = np.array(list(combinations(range(len(v)), 3)))
    a, b, c = v[idx[:, 0]], v[idx[:, 1]], v[idx[:, 2]]
    areas = 0.5 * np.abs((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))
    k = int(np.argmax(areas))
    return v[idx[k]].copy(), float(areas[k])


def union_area(polys) -> float:
    """Area of the union of convex polygons (overlay computed by shapely/GEOS)."""
    from shapely.geometry import Polygon
    from shapely.ops import unary_union

    polys = list(polys)
    if not polys:
        raise DegenerateInput("union_area needs at least one polygon")
    return float(unary_union([Polygon(p.vertices) for p in polys]).area)


def hull_of(polys) -> ConvexPolygon:
    """conv of the union of several polygons."""
    return convex_hull(np.vstack([p.vertices for p in polys]))
