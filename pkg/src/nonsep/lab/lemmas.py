"""Width bound, the symmetrization sandwich and the explicit ratio-d cover."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..covering import CoveringResult, covering_violation
from ..errors import DimensionUnsupported, NSViolated, StepFailed, ValidationError, VerificationFailed
from ..family import Scene
from ..geometry import (
    EPS_G,
    ConvexPolygon,
    central_symmetrization,
    convex_hull,
    largest_inscribed_triangle,
    support,
)
from ..separation import _row_gaps, _support_rows, critical_angles, fibonacci_sphere


@dataclass(frozen=True)
class WidthReport:
    max_ratio: float
    argmax: np.ndarray
    n_directions: int

    @property
    def passed(self) -> bool:
        return self.max_ratio <= 1.0 + 1e-9

    def to_dict(self) -> dict:
        return {"max_ratio": self.max_ratio, "argmax": self.argmax.tolist(), "n_directions": self.n_directions, "passed": self.passed}


def _test_directions(scene: Scene, n_dirs: int) -> np.ndarray:
    if scene.dimension == 3:
        return fibonacci_sphere(n_dirs)
    th = np.concatenate([np.pi * np.arange(n_dirs) / n_dirs, critical_angles(scene)])
    if scene.reference.kind == "polygon":
        N = scene.reference.body.normals
        th = np.concatenate([th, np.arctan2(N[:, 1], N[:, 0])])
    return np.column_stack([np.cos(th), np.sin(th)])


def verify_width_lemma(scene: Scene, n_dirs: int = 360, tol: float = EPS_G) -> WidthReport:
    """width_u(conv of the union) against (sum tau) width_u(K) over sampled and critical u."""
    U = _test_directions(scene, n_dirs)
    lo, hi = _support_rows(scene, U)
    gaps = _row_gaps(lo, hi)[0]
    if np.any(gaps > tol):
        k = int(np.argmax(gaps))
        raise NSViolated(f"projection gap of {gaps[k]:.3e} along {U[k].tolist()}")
    K = scene.reference.body
    wk = support(K, U) + support(K, -U)
    ratio = (hi.max(axis=1) - lo.min(axis=1)) / (scene.total_ratio * wk)
    k = int(np.argmax(ratio))
    return WidthReport(float(ratio[k]), U[k], len(U))


# ----------------------------------------------------------------------------- sandwich


@dataclass(frozen=True, eq=False)
class SandwichResult:
    center: np.ndarray  # used as both the inner and the outer translation
    symmetral: ConvexPolygon
    inner_ratio: float
    outer_ratio: float
    inner_slack: float  # min over facets of Q of (offset - support of the inner body); >= 0
    outer_slack: float
    verified: bool

    @property
    def inner_translation(self) -> np.ndarray:
        return self.center

    @property
    def outer_translation(self) -> np.ndarray:
        return self.center


def _inside(points: np.ndarray, P: ConvexPolygon) -> np.ndarray:
    """Signed slack of each point against the facets of P (>= 0 inside)."""
    return (P.offsets[None, :] - points @ P.normals.T).min(axis=1)


def sandwich(Q: ConvexPolygon, tol: float = EPS_G) -> SandwichResult:
    """Center o of a largest inscribed triangle; then o + (2/3)Q0 in Q in o + (4/3)Q0."""
    if not isinstance(Q, ConvexPolygon):
        raise DimensionUnsupported("sandwich is implemented for planar polygons")
    tri, _ = largest_inscribed_triangle(Q)
    o = tri.mean(axis=0)
    Qc = Q.translate(-o)
    s = _inside(Qc.vertices, Qc.scale(2.0).reflect())
    if s.min() < -tol:
        k = int(np.argmin(s))
        raise VerificationFailed(f"vertex {Q.vertices[k].tolist()} lies outside o - 2(Q - o)")
    Q0 = central_symmetrization(Q)
    inner = o + (2.0 / 3.0) * Q0.vertices
    si = _inside(inner, Q)
    if si.min() < -tol:
        k = int(np.argmin(si))
        raise VerificationFailed(f"inner body vertex {inner[k].tolist()} lies outside Q")
    outer = Q0.scale(4.0 / 3.0).translate(o)
    so = _inside(Q.vertices, outer)
    if so.min() < -tol:
        k = int(np.argmin(so))
        raise VerificationFailed(f"vertex {Q.vertices[k].tolist()} lies outside o + (4/3)Q0")
    return SandwichResult(o, Q0, 2.0 / 3.0, 4.0 / 3.0, float(si.min()), float(so.min()), True)


# ----------------------------------------------------------------------------- ratio-d cover


def cover_with_ratio_d(scene: Scene, tol: float = EPS_G) -> CoveringResult:
    """Cover the union by m - 2 S x_K + 2 S K with S = sum of ratios.

    Here m and x_K are sandwich centers of M = conv of the union and of K. The chain

        M in m + (4/3) M0 in m + (4/3) S K0 in m + 2 S (K - x_K)

    is checked link by link, so a failure names the step that broke.
    """
    if scene.dimension != 2 or scene.reference.kind != "polygon":
        raise ValidationError("cover_with_ratio_d needs a planar polygon reference")
    K = scene.reference.body
    S = scene.total_ratio
    M = convex_hull(scene.all_vertices())
    M0 = central_symmetrization(M)
    K0 = central_symmetrization(K)
    # link 1: M0 in S K0, compared on the facet normals of K0 plus critical and sampled u
    th = np.concatenate([2 * np.pi * np.arange(720) / 720, critical_angles(scene)])
    U = np.vstack([np.column_stack([np.cos(th), np.sin(th)]), K0.normals, M0.normals])
    excess1 = float((support(M0, U) - S * support(K0, U)).max())
    if excess1 > tol:
        raise StepFailed(f"M0 in (sum tau) K0 fails by {excess1:.3e}; the family is not NS")
    try:
        sm = sandwich(M, tol)
    except VerificationFailed as exc:
        raise StepFailed(f"sandwich for conv of the union: {exc}") from None
    try:
        sk = sandwich(K, tol)
    except VerificationFailed as exc:
        raise StepFailed(f"sandwich for K: {exc}") from None
    # link 2: M in m + (4/3) M0
    gap2 = -sm.outer_slack
    # link 3: (2/3) K0 + x_K in K
    gap3 = -sk.inner_slack
    d = 2
    ratio = d * S
    t = sm.center - ratio * sk.center
    slack = covering_violation(scene, t, ratio)
    if slack > tol:
        raise StepFailed(f"final cover misses the union by {slack:.3e}")
    details = {"m0_in_k0": excess1, "outer_sandwich": gap2, "inner_sandwich": gap3, "final": slack}
    return CoveringResult(ratio, t, S, slack, "ratio-d", details)
