"""Smallest covering homothets, the weighted-center cover for symmetric bodies and the
one-dimensional interval cover."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import ContainmentFailed, DisconnectedUnion, NotSymmetric, NumericFailure, ValidationError
from .family import Scene
from .geometry import EPS_G
from .lp import LinearProgram, solve_lp


@dataclass(frozen=True, eq=False)
class CoveringResult:
    ratio: float
    translation: np.ndarray
    total_ratio: float
    slack: float
    method: str
    details: dict | None = field(default=None, repr=False)

    @property
    def lam(self) -> float:
        return self.ratio / self.total_ratio

    # ``lambda`` is a keyword, so expose the value under a readable alias as well
    lambda_ = lam

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "ratio": float(self.ratio),
            "translation": np.asarray(self.translation, dtype=float).tolist(),
            "total_ratio": float(self.total_ratio),
            "lambda": float(self.lam),
            "slack": float(self.slack),
            **({"details": self.details} if self.details else {}),
        }


# ----------------------------------------------------------------------------- violation


def _ball_direction_set(dim: int, n: int = 720) -> np.ndarray:
    if dim == 2:
        th = 2 * np.pi * np.arange(n) / n
        return np.column_stack([np.cos(th), np.sin(th)])
    from .separation import fibonacci_sphere

    return fibonacci_sphere(n)


def covering_violation(scene: Scene, t, s: float) -> float:
    """Largest amount by which a realized member sticks out of t + s K (<= 0 means covered)."""
    t = np.asarray(t, dtype=float)
    ref = scene.reference
    if ref.kind == "ball":
        exact = np.linalg.norm(scene.translations - t, axis=1) + scene.ratios - s
        # second route: support comparison at sampled boundary directions
        U = _ball_direction_set(scene.dimension)
        hm = (U @ scene.translations.T + scene.ratios).max(axis=1)
        sampled = hm - (U @ t + s)
        return float(max(exact.max(), sampled.max()))
    V = scene.all_vertices()
    K = ref.body
    return float(((V - t) @ K.normals.T - s * K.offsets).max())


# ----------------------------------------------------------------------------- polytope LP


def covering_lp(scene: Scene, aggregate: bool = True) -> LinearProgram:
    """LP in z = (t, s): minimize s with <a_j, p - t> <= s b_j for facets (a_j, b_j) of K
    and vertices p of the members. With ``aggregate`` only the extreme vertex per
    facet is kept, which describes the same feasible set."""
    ref = scene.reference
    if ref.kind == "ball":
        raise ValidationError("ball references are covered by smallest_enclosing_ball")
    A, b = ref.body.normals, ref.body.offsets
    if np.any(b <= 0):
        raise ValidationError("the reference body must contain the origin in its interior")
    V = scene.all_vertices()
    d = scene.dimension
    proj = V @ A.T  # (N, facets)
    if aggregate:
        G = np.hstack([-A, -b[:, None]])
        h = -proj.max(axis=0)
    else:
        G = np.tile(np.hstack([-A, -b[:, None]]), (len(V), 1))
        h = -proj.reshape(-1)
    c = np.zeros(d + 1)
    c[-1] = 1.0
    return LinearProgram(c, G, h)


def smallest_covering_homothet(scene: Scene, aggregate: bool = True) -> CoveringResult:
    lp = covering_lp(scene, aggregate)
    res = solve_lp(lp)
    if not res.ok:
        raise NumericFailure(f"covering LP ended with status {res.status}")
    t, s = res.z[:-1], float(res.z[-1])
    return CoveringResult(s, t, scene.total_ratio, covering_violation(scene, t, s), "lp")


def tight_constraints(scene: Scene, result: CoveringResult, tol: float = 1e-8) -> int:
    """Number of (vertex, facet) pairs touching the cover boundary."""
    K = scene.reference.body
    V = scene.all_vertices()
    r = (V - result.translation) @ K.normals.T - result.ratio * K.offsets
    return int(np.sum(np.abs(r) <= tol))


# ----------------------------------------------------------------------------- enclosing ball


def _tangent_ball(X: np.ndarray, r: np.ndarray):
    """Smallest ball internally tangent to the balls (X[i], r[i]) with center in aff(X).

    Returns (center, radius) or None when the system is singular or has no root.
    """
    k = len(r)
    if k == 1:
        return X[0].copy(), float(r[0])
    D = (X[1:] - X[0]).T  # (d, k-1)
    M = 2.0 * D.T @ D
    if abs(np.linalg.det(M)) < 1e-14 * max(1.0, np.abs(M).max()) ** (k - 1):
        return None
    dt = r[1:] - r[0]
    rhs0 = np.sum(D * D, axis=0) - (r[1:] ** 2 - r[0] ** 2)
    alpha = np.linalg.solve(M, rhs0)
    beta = np.linalg.solve(M, 2.0 * dt)
    w, q = D @ alpha, D @ beta  # c - x_0 = w + s q
    a2 = q @ q - 1.0
    a1 = 2.0 * (w @ q + r[0])
    a0 = w @ w - r[0] ** 2
    if abs(a2) < 1e-14:
        if abs(a1) < 1e-300:
            return None
        roots = [-a0 / a1]
    else:
        disc = a1 * a1 - 4 * a2 * a0
        if disc < 0:
            if disc < -1e-12 * (a1 * a1 + abs(4 * a2 * a0)):
                return None
            disc = 0.0
        sq = np.sqrt(disc)
        roots = [(-a1 - sq) / (2 * a2), (-a1 + sq) / (2 * a2)]
    ok = [s for s in roots if s >= r.max() - 1e-12 * max(1.0, r.max())]
    if not ok:
        return None
    s = min(ok)
    return X[0] + w + s * q, float(s)


def _enclosing_ball_exact(X: np.ndarray, r: np.ndarray, tol: float):
    """Smallest ball containing balls (X, r), enumerating support sets of size <= d+1."""
    d = X.shape[1]
    best = None
    for k in range(1, min(d + 1, len(r)) + 1):
        for S in combinations(range(len(r)), k):
            cand = _tangent_ball(X[list(S)], r[list(S)])
            if cand is None:
                continue
            c, s = cand
            if best is not None and s >= best[1]:
                continue
            if np.all(np.linalg.norm(X - c, axis=1) + r <= s + tol):
                best = (c, s)
        if best is not None and k == 1:
            return best  # one ball contains all the others
    if best is None:
        raise NumericFailure("no enclosing support set found")
    return best


def smallest_enclosing_ball(scene: Scene, max_iter: int = 100_000) -> CoveringResult:
    """Active-set method: solve exactly on a working set, add the worst outside ball, repeat.

    The working-set radius grows strictly, so the loop terminates after at most n rounds.
    """
    if scene.reference.kind != "ball":
        raise ValidationError("smallest_enclosing_ball needs a ball reference")
    X, r = scene.translations, scene.ratios
    scale = max(1.0, float(np.abs(X).max()), float(r.max()))
    tol = 1e-12 * scale
    far = np.linalg.norm(X - X[int(np.argmax(r))], axis=1) + r
    work = sorted({int(np.argmax(r)), int(np.argmax(far))})
    for _ in range(max_iter):
        c, s = _enclosing_ball_exact(X[work], r[work], tol)
        out = np.linalg.norm(X - c, axis=1) + r - s
        j = int(np.argmax(out))
        if out[j] <= tol:
            return CoveringResult(s, c, scene.total_ratio, covering_violation(scene, c, s), "enclosing-ball")
        if j in work:
            raise NumericFailure("enclosing-ball working set stalled")
        work = sorted(work + [j])
    raise NumericFailure(f"enclosing ball did not converge in {max_iter} iterations")


# ----------------------------------------------------------------------------- weighted-center cover


def goodman_center(scene: Scene) -> np.ndarray:
    r = scene.ratios
    return (r[:, None] * scene.translations).sum(axis=0) / r.sum()


def goodman_cover_symmetric(scene: Scene, tol: float = EPS_G) -> CoveringResult:
    """The cover c + (sum tau) K with c the ratio-weighted center, for o-symmetric K.

    Containment is verified rather than assumed; for a family that is not NS the cover
    may fail, which raises ContainmentFailed.
    """
    if not scene.reference.is_symmetric():
        raise NotSymmetric("the weighted-center cover needs an origin-symmetric reference")
    t = goodman_center(scene)
    s = scene.total_ratio
    slack = covering_violation(scene, t, s)
    if slack > tol:
        raise ContainmentFailed(f"weighted-center cover misses the union by {slack:.3e}")
    return CoveringResult(s, t, s, slack, "goodman")


@dataclass(frozen=True)
class IntervalCover:
    center: float
    radius: float
    union: tuple[float, float]
    left_margin: float  # min(x_i - tau_i) - (center - radius), >= 0

    @property
    def covers(self) -> bool:
        eps = 1e-12 * max(1.0, abs(self.center) + self.radius)
        return self.center - self.radius <= self.union[0] + eps and self.center + self.radius >= self.union[1] - eps


def interval_cover_1d(centers, radii, tol: float = 0.0) -> IntervalCover:
    """Cover a connected union of intervals [x_i - tau_i, x_i + tau_i] by [x - R, x + R]
    with x the tau-weighted mean of the x_i and R = sum tau_i."""
    x = np.asarray(centers, dtype=float).reshape(-1)
    tau = np.asarray(radii, dtype=float).reshape(-1)
    if len(x) != len(tau) or len(x) == 0:
        raise ValidationError("need matching, nonempty centers and radii")
    if np.any(tau <= 0):
        raise ValidationError("radii must be positive")
    lo, hi = x - tau, x + tau
    order = np.argsort(lo, kind="stable")
    reach = np.maximum.accumulate(hi[order])
    gaps = lo[order][1:] - reach[:-1]
    if np.any(gaps > tol):
        k = int(np.argmax(gaps > tol))
        raise DisconnectedUnion(f"intervals leave the gap ({float(reach[k])!r}, {float(lo[order][k + 1])!r})")
    R = float(tau.sum())
    c = float(tau @ x / R)
    res = IntervalCover(c, R, (float(lo.min()), float(hi.max())), float(lo.min() - (c - R)))
    if not res.covers:
        raise ContainmentFailed(f"interval cover [{c - R!r}, {c + R!r}] misses {res.union}")
    return res


# ----------------------------------------------------------------------------- dispatch


def smallest_cover(scene: Scene) -> CoveringResult:
    if scene.reference.kind == "ball":
        return smallest_enclosing_ball(scene)
    return smallest_covering_homothet(scene)


def compute_lambda(scene: Scene) -> float:
    return smallest_cover(scene).lam
