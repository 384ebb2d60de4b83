"""Dense two-phase simplex for small inequality-form linear programs.

Problems are stated as ``min c^T z  s.t.  G z <= h`` with free ``z`` (optionally
``z >= lower``). Covering problems have a handful of variables and many rows, so the
solver works on the dual standard form

    min h^T y   s.t.   G^T y = -c,  y >= 0,

whose tableau has one row per primal variable. The primal point is recovered from
the optimal basis by solving ``B^T pi = h_B``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericFailure, ValidationError

MAX_PIVOTS = 10_000


@dataclass(frozen=True, eq=False)
class LinearProgram:
    c: np.ndarray
    G: np.ndarray
    h: np.ndarray
    lower: np.ndarray | None = None  # per-variable lower bounds; -inf entries are free

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        G = np.asarray(self.G, dtype=float).reshape(-1, len(c))
        h = np.asarray(self.h, dtype=float).reshape(-1)
        if len(h) != len(G):
            raise ValidationError("G and h have different row counts")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(G)) and np.all(np.isfinite(h))):
            raise ValidationError("LP data must be finite")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "h", h)
        if self.lower is not None:
            lo = np.asarray(self.lower, dtype=float).reshape(-1)
            if len(lo) != len(c):
                raise ValidationError("lower has the wrong length")
            object.__setattr__(self, "lower", lo)

    def rows(self) -> tuple[np.ndarray, np.ndarray]:
        """Constraint rows including the lower bounds as -z_k <= -l_k."""
        if self.lower is None:
            return self.G, self.h
        k = np.flatnonzero(np.isfinite(self.lower))
        E = np.zeros((len(k), len(self.c)))
        E[np.arange(len(k)), k] = -1.0
        return np.vstack([self.G, E]), np.concatenate([self.h, -self.lower[k]])


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    z: np.ndarray | None
    objective: float
    pivots: int
    duals: np.ndarray | None = None

    @property
    def ok(self) -> bool:
        return self.status == "optimal"


class _Tableau:
    """Equality-form tableau  A y = b, y >= 0,  b >= 0, with Bland pivoting."""

    def __init__(self, A, b, tol):
        self.m, self.n = A.shape
        self.T = np.hstack([A, b[:, None]])
        self.basis = np.full(self.m, -1)
        self.tol = tol
        self.pivots = 0

    def pivot(self, r, j):
        self.pivots += 1
        if self.pivots > MAX_PIVOTS:
            raise NumericFailure(f"simplex did not terminate within {MAX_PIVOTS} pivots")
        T = self.T
        T[r] /= T[r, j]
        col = T[:, j].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        self.basis[r] = j

    def run(self, cost, allowed):
        """Minimize cost^T y over the current basis; returns False if unbounded."""
        tol = self.tol
        while True:
            cb = cost[self.basis]
            red = cost[: self.n] - cb @ self.T[:, : self.n]
            cand = np.flatnonzero((red < -tol) & allowed)
            if len(cand) == 0:
                return True
            j = int(cand[0])  # Bland: smallest index
            col = self.T[:, j]
            pos = np.flatnonzero(col > tol)
            if len(pos) == 0:
                return False
            ratios = self.T[pos, -1] / col[pos]
            best = ratios.min()
            ties = pos[ratios <= best + tol * max(1.0, abs(best))]
            r = int(ties[np.argmin(self.basis[ties])])
            self.pivot(r, j)


def solve_lp(lp: LinearProgram, tol: float = 1e-11) -> LPResult:
    G, h = lp.rows()
    c = lp.c
    nv, m = len(c), len(G)
    scale = max(1.0, float(np.abs(G).max(initial=0.0)), float(np.abs(h).max(initial=0.0)), float(np.abs(c).max(initial=0.0)))
    A = G.T.copy()
    b = -c.copy()
    S = np.where(b < 0, -1.0, 1.0)
    A *= S[:, None]
    b *= S
    # phase 1: artificial variables m .. m+nv-1
    tab = _Tableau(np.hstack([A, np.eye(nv)]), b, tol * scale)
    tab.basis[:] = m + np.arange(nv)
    cost1 = np.concatenate([np.zeros(m), np.ones(nv)])
    tab.run(cost1, np.ones(m + nv, dtype=bool))
    if tab.T[:, -1] @ cost1[tab.basis] > 1e-9 * scale:
        # dual infeasible: the primal is unbounded (or infeasible as well)
        return LPResult("unbounded", None, -np.inf, tab.pivots)
    # drive remaining artificials out of the basis, dropping redundant rows
    keep = np.ones(nv, dtype=bool)
    for r in range(nv):
        if tab.basis[r] >= m:
            nz = np.flatnonzero(np.abs(tab.T[r, :m]) > tab.tol)
            if len(nz):
                tab.pivot(r, int(nz[0]))
            else:
                keep[r] = False
    # phase 2 on the original columns only
    sub = _Tableau(tab.T[keep][:, :m], tab.T[keep, -1], tab.tol)
    sub.basis = tab.basis[keep].copy()
    sub.pivots = tab.pivots
    if not sub.run(h, np.ones(m, dtype=bool)):
        return LPResult("infeasible", None, np.inf, sub.pivots)
    y = np.zeros(m)
    y[sub.basis] = sub.T[:, -1]
    B = A[:, sub.basis]  # (nv, k)
    pi, *_ = np.linalg.lstsq(B.T, h[sub.basis], rcond=None)
    z = S * pi
    return LPResult("optimal", z, float(c @ z), sub.pivots, y)


def is_feasible(G, h, tol: float = 1e-11) -> bool:
    """Whether {z : G z <= h} is nonempty (zero objective, so the dual is unbounded iff not)."""
    G = np.asarray(G, dtype=float)
    return solve_lp(LinearProgram(np.zeros(G.shape[1]), G, h), tol).status == "optimal"
