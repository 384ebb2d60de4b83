"""Non-separability and k-impassability tests with replayable certificates.

Planar scenes are decided exactly by a critical-direction sweep. Along a direction
u(θ) every projection endpoint is ⟨v, u(θ)⟩ for a vertex v of some member (or a
shifted sinusoid for disks), so the relative order of all endpoints can only change
at angles where two such functions coincide, i.e. where u is perpendicular to v - w.
Between two consecutive such angles the interval pattern is fixed and a gap, when
present, is a single sinusoid ⟨v - w, u⟩ whose maximum is attained either at an end
of the angular cell or where u is parallel to v - w. Testing the perpendicular
angles, the parallel angles and the cell midpoints therefore finds the largest gap
over all directions, which is what makes the sweep agree with the hull-distance
oracle at the same tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .errors import DimensionUnsupported, TooLarge, ValidationError
from .family import Scene
from .geometry import (
    EPS_G,
    ConvexPolygon,
    convex_hull,
    convex_hull_points,
    direction,
    disk_hull_area,
    disk_set_support,
    disk_union_area,
    gjk_distance,
    hull_relation,
    Relation,
    support,
    union_area,
)


class ProjectionInterval(NamedTuple):
    index: int
    lo: float
    hi: float


@dataclass(frozen=True, eq=False)
class SeparationCertificate:
    """Separable: direction, open gap (a, b) and the induced partition.
    NonSeparable: the test directions (angles) and the method that produced them."""

    kind: str  # "Separable" | "NonSeparable"
    method: str  # "sweep" | "oracle" | "sampled"
    direction: np.ndarray | None = None
    gap: tuple[float, float] | None = None
    left: tuple[int, ...] = ()
    right: tuple[int, ...] = ()
    angles: np.ndarray | None = field(default=None, repr=False)
    max_gap: float = 0.0

    @property
    def nonseparable(self) -> bool:
        return self.kind == "NonSeparable"

    @property
    def separable(self) -> bool:
        return self.kind == "Separable"

    def replay(self, scene: Scene, tol: float = 1e-12) -> bool:
        """Re-derive the claimed gap from the scene's projection intervals."""
        if not self.separable:
            return False
        a, b = self.gap
        if not a < b or not self.left or not self.right:
            return False
        if sorted(self.left + self.right) != list(range(scene.n)):
            return False
        lo, hi = _support_rows(scene, np.atleast_2d(self.direction))
        lo, hi = lo[0], hi[0]
        left, right = list(self.left), list(self.right)
        return bool(np.all(hi[left] <= a + tol) and np.all(lo[right] >= b - tol))

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "method": self.method}
        if self.separable:
            out.update(
                direction=self.direction.tolist(),
                gap=[float(self.gap[0]), float(self.gap[1])],
                left=list(self.left),
                right=list(self.right),
            )
        else:
            out["n_directions"] = 0 if self.angles is None else int(len(self.angles))
            out["max_gap"] = float(self.max_gap)
        return out


# ----------------------------------------------------------------------------- projections


def _support_rows(scene: Scene, U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """lo, hi of shape (len(U), n): projection intervals of every member along every row of U."""
    U = np.asarray(U, dtype=float)
    K = scene.reference.body
    hp = np.atleast_1d(support(K, U))
    hm = np.atleast_1d(support(K, -U))
    c = U @ scene.translations.T
    r = scene.ratios
    return c - hm[:, None] * r, c + hp[:, None] * r


def projection_intervals(scene: Scene, u) -> list[ProjectionInterval]:
    lo, hi = _support_rows(scene, direction(u)[None, :])
    return [ProjectionInterval(i, float(a), float(b)) for i, (a, b) in enumerate(zip(lo[0], hi[0]))]


def _row_gaps(lo: np.ndarray, hi: np.ndarray):
    """Largest gap of each row's interval union: (gap, left_end, right_end, split index, order)."""
    order = np.argsort(lo, axis=1, kind="stable")
    slo = np.take_along_axis(lo, order, axis=1)
    shi = np.maximum.accumulate(np.take_along_axis(hi, order, axis=1), axis=1)
    g = slo[:, 1:] - shi[:, :-1]
    k = np.argmax(g, axis=1)
    rows = np.arange(len(lo))
    return g[rows, k], shi[rows, k], slo[rows, k + 1], k, order


class Gap(NamedTuple):
    a: float
    b: float
    left: tuple[int, ...]
    right: tuple[int, ...]


def gap_in_direction(scene: Scene, u, tol: float = EPS_G) -> Gap | None:
    """The first gap (from the left) wider than ``tol`` in the projection union along u."""
    u = direction(u)
    lo, hi = _support_rows(scene, u[None, :])
    lo, hi = lo[0], hi[0]
    order = np.argsort(lo, kind="stable")
    reach = -np.inf
    for pos, i in enumerate(order):
        if pos > 0 and lo[i] - reach > tol:
            left = tuple(sorted(int(j) for j in order[:pos]))
            right = tuple(sorted(int(j) for j in order[pos:]))
            return Gap(float(reach), float(lo[i]), left, right)
        reach = max(reach, hi[i])
    return None


def _certificate_from_gap(scene, u, method, tol) -> SeparationCertificate | None:
    g = gap_in_direction(scene, u, tol)
    if g is None:
        return None
    return SeparationCertificate("Separable", method, direction(u), (g.a, g.b), g.left, g.right)


# ----------------------------------------------------------------------------- exact sweep


def _pair_angles(D: np.ndarray) -> np.ndarray:
    """Angles in [0, pi) of directions perpendicular and parallel to every row of D."""
    nz = np.hypot(D[:, 0], D[:, 1]) > 1e-15
    phi = np.arctan2(D[nz, 1], D[nz, 0])
    return np.concatenate([phi, phi + np.pi / 2])


def critical_angles(scene: Scene) -> np.ndarray:
    """Sorted test angles in [0, pi): critical angles, sinusoid peaks and cell midpoints."""
    if scene.dimension != 2:
        raise DimensionUnsupported("the exact sweep is planar only")
    ref = scene.reference
    if ref.kind == "ball":
        X, r = scene.translations, scene.ratios
        i, j = np.triu_indices(scene.n, 1)
        D = X[i] - X[j]
        R = np.hypot(D[:, 0], D[:, 1])
        phi = np.arctan2(D[:, 1], D[:, 0])
        parts = [phi]
        for c in (r[i] + r[j], r[i] - r[j]):
            ok = (np.abs(c) <= R) & (R > 0)
            al = np.arccos(np.clip(c[ok] / R[ok], -1.0, 1.0))
            parts += [phi[ok] + al, phi[ok] - al]
        ang = np.concatenate(parts + [np.zeros(1)])
    else:
        V = scene.all_vertices()
        i, j = np.triu_indices(len(V), 1)
        ang = np.concatenate([_pair_angles(V[i] - V[j]), np.zeros(1)])
    ang = np.unique(np.round(np.mod(ang, np.pi), 15))
    ang = ang[ang < np.pi]
    nxt = np.append(ang[1:], ang[0] + np.pi)
    return np.sort(np.concatenate([ang, np.mod(0.5 * (ang + nxt), np.pi)]))


def max_projection_gap(scene: Scene) -> float:
    """Largest gap over all directions (negative: every projection union is connected
    with at least that much overlap at the weakest point). Exact for planar scenes."""
    ang = critical_angles(scene)
    U = np.column_stack([np.cos(ang), np.sin(ang)])
    lo, hi = _support_rows(scene, U)
    return float(_row_gaps(lo, hi)[0].max())


def is_nonseparable_sweep(scene: Scene, tol: float = EPS_G) -> SeparationCertificate:
    """Exact planar NS test; gaps no wider than ``tol`` count as touching."""
    if scene.dimension != 2:
        raise DimensionUnsupported("is_nonseparable_sweep handles planar scenes; use is_nonseparable_sampled")
    ang = critical_angles(scene)
    U = np.column_stack([np.cos(ang), np.sin(ang)])
    lo, hi = _support_rows(scene, U)
    g = _row_gaps(lo, hi)[0]
    if np.any(g > tol):
        k = int(np.argmax(g > tol))
        return _certificate_from_gap(scene, U[k], "sweep", tol)
    return SeparationCertificate("NonSeparable", "sweep", angles=ang, max_gap=float(max(g.max(), 0.0)))


# ----------------------------------------------------------------------------- subset oracle


def _splits(n: int):
    """All unordered splits S | S^c with member 0 in S."""
    rest = range(1, n)
    for k in range(0, n - 1):
        for extra in combinations(rest, k):
            S = (0,) + extra
            yield S, tuple(i for i in range(n) if i not in S)


def is_nonseparable_oracle(scene: Scene, max_n: int = 12, tol: float = EPS_G) -> SeparationCertificate:
    """Brute force over splits: separable iff some pair of complementary hulls is disjoint."""
    if scene.dimension != 2:
        raise DimensionUnsupported("the subset oracle is planar only")
    if scene.n > max_n:
        raise TooLarge(f"oracle enumerates 2^(n-1) splits; n = {scene.n} exceeds max_n = {max_n}")
    disks = scene.reference.kind == "ball"
    if not disks:
        verts = scene.member_vertices()
    X, r = scene.translations, scene.ratios
    nsplit = 0
    for S, C in _splits(scene.n):
        nsplit += 1
        if disks:
            dist, p, q = gjk_distance(disk_set_support(X[list(S)], r[list(S)]), disk_set_support(X[list(C)], r[list(C)]))
            disjoint = dist > tol
        else:
            HS = convex_hull(np.vstack([verts[i] for i in S]))
            HC = convex_hull(np.vstack([verts[i] for i in C]))
            rel = hull_relation(HS, HC, tol)
            disjoint = rel.kind is Relation.DISJOINT
            if disjoint:
                p, q = rel.witness
        if disjoint:
            u = direction(q - p)
            lo, hi = _support_rows(scene, u[None, :])
            a, b = float(hi[0, list(S)].max()), float(lo[0, list(C)].min())
            return SeparationCertificate("Separable", "oracle", u, (a, b), tuple(S), tuple(C))
    return SeparationCertificate("NonSeparable", "oracle", angles=np.zeros(0), max_gap=0.0)


# ----------------------------------------------------------------------------- 3D sampling


def fibonacci_sphere(n: int) -> np.ndarray:
    """n quasi-uniform unit vectors (golden-angle spiral)."""
    if n < 1:
        raise ValidationError("need at least one direction")
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = np.pi * (3.0 - np.sqrt(5.0)) * k
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def is_nonseparable_sampled(scene: Scene, n_dirs: int = 4096, tol: float = EPS_G) -> SeparationCertificate:
    """Gap test over a Fibonacci sphere of directions (3D; also accepts planar scenes)."""
    if scene.dimension == 2:
        th = np.pi * np.arange(n_dirs) / n_dirs
        U = np.column_stack([np.cos(th), np.sin(th)])
    else:
        U = fibonacci_sphere(n_dirs)
    lo, hi = _support_rows(scene, U)
    g = _row_gaps(lo, hi)[0]
    if np.any(g > tol):
        k = int(np.argmax(g > tol))
        return _certificate_from_gap(scene, U[k], "sampled", tol)
    return SeparationCertificate("NonSeparable", "sampled", angles=np.arange(n_dirs, dtype=float), max_gap=float(max(g.max(), 0.0)))


# ----------------------------------------------------------------------------- impassability


def _rel_equal(a: float, b: float, rtol: float) -> bool:
    return abs(a - b) <= rtol * max(abs(a), abs(b), 1e-300)


def _zero_ip_polygons(polys, rtol: float) -> bool:
    hull = convex_hull(np.vstack([p.vertices for p in polys]))
    return _rel_equal(union_area(polys), hull.area, rtol)


def is_0_impassable(scene: Scene, rtol: float = 1e-9) -> bool:
    """True iff the union of the members is convex (union area equals hull area)."""
    if scene.dimension != 2:
        raise DimensionUnsupported("is_0_impassable is planar; lift via is_1_impassable_3d_sampled")
    if scene.reference.kind == "ball":
        X, r = scene.translations, scene.ratios
        return _rel_equal(disk_union_area(X, r), disk_hull_area(X, r), rtol)
    return _zero_ip_polygons(scene.realize(), rtol)


class LineWitness(NamedTuple):
    point: np.ndarray
    direction: np.ndarray


@dataclass(frozen=True)
class SampledVerdict:
    holds: bool  # True means "no violation found among the sampled directions"
    n_dirs: int
    witness: LineWitness | None = None
    direction_index: int | None = None

    def to_dict(self) -> dict:
        out = {"holds": self.holds, "sampled": True, "n_dirs": self.n_dirs}
        if self.witness is not None:
            out["witness"] = {"point": self.witness.point.tolist(), "direction": self.witness.direction.tolist()}
        elif not self.holds:
            out["witness"] = None
        return out


def _plane_basis(v: np.ndarray) -> np.ndarray:
    a = np.array([1.0, 0.0, 0.0]) if abs(v[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(v, a)
    e1 /= np.linalg.norm(e1)
    return np.vstack([e1, np.cross(v, e1)])


def _disk_polygon(c, r, m: int, outer: bool) -> np.ndarray:
    th = 2 * np.pi * np.arange(m) / m
    rr = r / np.cos(np.pi / m) if outer else r
    return c + rr * np.column_stack([np.cos(th), np.sin(th)])


def _gap_point(inner_hull_pts: np.ndarray, outer_pieces: list[np.ndarray]) -> np.ndarray | None:
    from shapely.geometry import MultiPoint, Polygon
    from shapely.ops import unary_union

    hole = MultiPoint([tuple(p) for p in inner_hull_pts]).convex_hull.difference(
        unary_union([Polygon(p) for p in outer_pieces])
    )
    if hole.is_empty or hole.area <= 0:
        return None
    return np.array(hole.representative_point().coords[0])


def is_1_impassable_3d_sampled(scene: Scene, n_dirs: int = 1024, rtol: float = 1e-9) -> SampledVerdict:
    """Sampled 1-IP test: every line direction v is checked through the 0-IP test of the
    members projected onto the plane v⊥; the first failing direction yields a line that
    meets the hull but misses every member."""
    if scene.dimension != 3:
        raise DimensionUnsupported("is_1_impassable_3d_sampled needs a 3D scene")
    if n_dirs < 1:
        raise ValidationError("n_dirs must be >= 1")
    disks = scene.reference.kind == "ball"
    X, r = scene.translations, scene.ratios
    verts = None if disks else scene.member_vertices()
    for idx, v in enumerate(fibonacci_sphere(n_dirs)):
        B = _plane_basis(v)
        if disks:
            C = X @ B.T
            ok = _rel_equal(disk_union_area(C, r), disk_hull_area(C, r), rtol)
        else:
            polys = [convex_hull(convex_hull_points(P @ B.T)) for P in verts]
            ok = _zero_ip_polygons(polys, rtol)
        if ok:
            continue
        if disks:
            inner = np.vstack([_disk_polygon(c, t, 256, False) for c, t in zip(C, r)])
            outer = [_disk_polygon(c, t, 256, True) for c, t in zip(C, r)]
        else:
            inner = np.vstack([p.vertices for p in polys])
            outer = [p.vertices for p in polys]
        p2 = _gap_point(inner, outer)
        wit = None if p2 is None else LineWitness(p2 @ B, v)
        return SampledVerdict(False, n_dirs, wit, idx)
    return SampledVerdict(True, n_dirs)


def line_misses_members(scene: Scene, line: LineWitness, tol: float = EPS_G) -> bool:
    """Independent check of a 1-IP witness: distance from the line to each member > tol."""
    v = direction(line.direction)
    B = _plane_basis(v)
    p = line.point @ B.T
    X, r = scene.translations, scene.ratios
    if scene.reference.kind == "ball":
        return bool(np.all(np.linalg.norm(X @ B.T - p, axis=1) - r > tol))
    for P in scene.member_vertices():
        poly = convex_hull(convex_hull_points(P @ B.T))
        if np.min(poly.offsets - poly.normals @ p) >= -tol:
            return False
    return True
