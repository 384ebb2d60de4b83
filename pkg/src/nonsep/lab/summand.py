"""Summand test via erosion, and verifiers for convex-union (0-IP) families."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..covering import compute_lambda, smallest_cover
from ..errors import TheoremViolated, ValidationError
from ..family import Scene
from ..geometry import (
    EPS_G,
    ConvexPolygon,
    Relation,
    convex_hull,
    erosion,
    hull_relation,
    minkowski_sum,
)
from ..separation import is_0_impassable


def _vertex_hausdorff(A: np.ndarray, B: np.ndarray) -> float:
    d = np.linalg.norm(A[:, None, :] - B[None, :, :], axis=2)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


@dataclass(frozen=True)
class SummandCheck:
    summand: bool
    area_gap: float
    hausdorff: float
    erosion_points: int

    def __bool__(self) -> bool:
        return self.summand


def check_summand(X: ConvexPolygon, Y: ConvexPolygon, tol: float = EPS_G) -> SummandCheck:
    """Is X a Minkowski summand of Y?  Tested as (Y eroded by X) + X == Y."""
    E = erosion(Y, X, tol)
    if not E.feasible:
        return SummandCheck(False, np.inf, np.inf, 0)
    if E.polygon is not None:
        R = minkowski_sum(E.polygon, X)
    else:
        # point or segment of translations: the sum is the hull of the shifted copies
        R = convex_hull(np.vstack([X.vertices + p for p in E.points]))
    area_gap = abs(R.area - Y.area)
    h = _vertex_hausdorff(R.vertices, Y.vertices)
    return SummandCheck(bool(area_gap < 1e-9 and h < 1e-7), float(area_gap), h, len(E.points))


@dataclass(frozen=True)
class KIPReport:
    applicable: bool
    summand: bool = False
    lam: float = float("nan")
    pairs_checked: int = 0
    worst_pair_excess: float = -np.inf

    @property
    def passed(self) -> bool:
        return self.applicable and self.summand and self.lam <= 1 + 1e-9 and self.worst_pair_excess <= 1e-9

    def to_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "summand": self.summand,
            "lambda": self.lam,
            "pairs_checked": self.pairs_checked,
            "worst_pair_excess": self.worst_pair_excess if np.isfinite(self.worst_pair_excess) else None,
            "passed": self.passed,
        }


def pair_cover_excess(scene: Scene) -> tuple[int, float]:
    """Over every intersecting pair: smallest cover ratio minus tau_i + tau_j (max, count)."""
    worst, count = -np.inf, 0
    polys = scene.realize() if scene.reference.kind == "polygon" else None
    X, r = scene.translations, scene.ratios
    for i, j in combinations(range(scene.n), 2):
        if polys is not None:
            if hull_relation(polys[i], polys[j]).kind is Relation.DISJOINT:
                continue
        elif np.linalg.norm(X[i] - X[j]) > r[i] + r[j] + EPS_G:
            continue
        count += 1
        s = smallest_cover(scene.subset([i, j])).ratio
        worst = max(worst, s - (r[i] + r[j]))
    return count, float(worst)


def verify_kip_theorem(scene: Scene) -> KIPReport:
    """For a family with convex union: conv of the union is a summand of (sum tau) K,
    lambda <= 1, and each intersecting pair is covered with ratio <= tau_i + tau_j."""
    if scene.dimension != 2 or scene.reference.kind != "polygon":
        raise ValidationError("verify_kip_theorem handles planar polygon scenes")
    if not is_0_impassable(scene):
        return KIPReport(False)
    M = convex_hull(scene.all_vertices())
    big = scene.reference.body.scale(scene.total_ratio)
    summ = check_summand(M, big)
    lam = compute_lambda(scene)
    count, worst = pair_cover_excess(scene)
    rep = KIPReport(True, summ.summand, lam, count, worst)
    if not rep.passed:
        raise TheoremViolated(f"convex-union family fails: {rep.to_dict()}")
    return rep


@dataclass(frozen=True)
class StrictReport:
    applicable: bool
    largest: int = -1
    worst_excess: float = float("nan")  # max_i |x_i - x*| + tau_i - tau*

    @property
    def passed(self) -> bool:
        return self.applicable and self.worst_excess <= 1e-9

    def to_dict(self) -> dict:
        return {"applicable": self.applicable, "largest": self.largest, "worst_excess": self.worst_excess, "passed": self.passed}


def verify_strictly_convex(scene: Scene) -> StrictReport:
    """For a disk family with convex union: every disk lies in the largest one."""
    if scene.reference.kind != "ball" or scene.dimension != 2:
        raise ValidationError("verify_strictly_convex handles planar disk scenes")
    if not is_0_impassable(scene):
        return StrictReport(False)
    X, r = scene.translations, scene.ratios
    k = int(np.argmax(r))
    excess = float((np.linalg.norm(X - X[k], axis=1) + r - r[k]).max())
    rep = StrictReport(True, k, excess)
    if not rep.passed:
        raise TheoremViolated(f"disk family with convex union is not nested (excess {excess:.3e})")
    return rep
