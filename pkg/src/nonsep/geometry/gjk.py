"""Gilbert-Johnson-Keerthi distance between planar convex sets given by support maps."""
from __future__ import annotations

from typing import Callable

import numpy as np

SupportMap = Callable[[np.ndarray], np.ndarray]


def _closest_on_simplex(W: list[np.ndarray]):
    """Closest point to the origin on conv(W), |W| <= 3, plus barycentric weights.

    Returns (point, weights, inside) where ``inside`` flags a triangle containing 0.
    """
    if len(W) == 1:
        return W[0], np.array([1.0]), False
    if len(W) == 2:
        a, b = W
        ab = b - a
        den = float(ab @ ab)
        t = 0.0 if den == 0.0 else float(np.clip(-(a @ ab) / den, 0.0, 1.0))
        return a + t * ab, np.array([1.0 - t, t]), False
    a, b, c = W
    area = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if area != 0.0:
        l1 = ((b[0]) * (c[1]) - (b[1]) * (c[0])) / area
        l2 = ((c[0]) * (a[1]) - (c[1]) * (a[0])) / area
        l3 = 1.0 - l1 - l2
        if min(l1, l2, l3) >= 0.0:
            return np.zeros(2), np.array([l1, l2, l3]), True
    best = None
    for i, j in ((0, 1), (1, 2), (0, 2)):
        p, w = _closest_on_simplex([W[i], W[j]])[:2]
        d = float(p @ p)
        if best is None or d < best[0]:
            lam = np.zeros(3)
            lam[i], lam[j] = w
            best = (d, p, lam)
    return best[1], best[2], False


def gjk_distance(support_a: SupportMap, support_b: SupportMap, tol: float = 1e-13, max_iter: int = 500):
    """Distance between convex sets A and B.

    Returns (distance, point_on_A, point_on_B); the points are ``None`` when the sets
    intersect.
    """
    d = np.array([1.0, 0.0])
    pa, pb = support_a(d), support_b(-d)
    A, B = [pa], [pb]
    v = pa - pb
    for _ in range(max_iter):
        nv = float(np.linalg.norm(v))
        if nv <= tol:
            return 0.0, None, None
        wa, wb = support_a(-v), support_b(v)
        w = wa - wb
        # upper bound nv, lower bound <v, w>/nv
        if nv - float(v @ w) / nv <= tol * max(1.0, nv):
            break
        A.append(wa)
        B.append(wb)
        W = [a - b for a, b in zip(A, B)]
        v, lam, inside = _closest_on_simplex(W)
        if inside:
            return 0.0, None, None
        keep = lam > 0
        A = [a for a, k in zip(A, keep) if k]
        B = [b for b, k in zip(B, keep) if k]
    W = [a - b for a, b in zip(A, B)]
    v, lam, _ = _closest_on_simplex(W)
    p = sum(l * a for l, a in zip(lam, A))
    q = sum(l * b for l, b in zip(lam, B))
    return float(np.linalg.norm(v)), p, q


def disk_set_support(centers, radii) -> SupportMap:
    """Support map of conv(union of disks)."""
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    radii = np.asarray(radii, dtype=float).reshape(-1)

    def s(d):
        n = np.linalg.norm(d)
        u = d / n if n > 0 else np.array([1.0, 0.0])
        k = int(np.argmax(centers @ u + radii))
        return centers[k] + radii[k] * u

    return s


def point_set_support(points) -> SupportMap:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)

    def s(d):
        return pts[int(np.argmax(pts @ d))]

    return s
