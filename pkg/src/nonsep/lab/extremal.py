"""Extremal three-triangle system: collinearity constraints and a multi-start Newton
solver for the KKT conditions of maximizing t1 + t2 + t3.

Each side of the enclosing triangle is cut into pieces x_i, t_i, y_i = 1 - x_i - t_i
(normalized side). The three constraints are

    e1 = t3 x2 + x1 y3 - x1 x2 - y2 y3
    e2 = t1 x3 + x2 y1 - x2 x3 - y1 y3
    e3 = t2 x1 + x3 y2 - x1 x3 - y1 y2

and the unknowns are p = (x1, x2, x3, t1, t2, t3) plus multipliers l1, l2, l3 for
F = sum(t) - sum(l_k e_k). All e_k are quadratic, so their Hessians are constant.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError


def _split(p):
    p = np.asarray(p, dtype=float)
    x, t = p[..., 0:3], p[..., 3:6]
    return x, t, 1.0 - x - t


def extremal_residual(x, t) -> np.ndarray:
    """(e1, e2, e3); ``x`` and ``t`` may carry leading batch dimensions."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    y = 1.0 - x - t
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    t1, t2, t3 = t[..., 0], t[..., 1], t[..., 2]
    y1, y2, y3 = y[..., 0], y[..., 1], y[..., 2]
    e1 = t3 * x2 + x1 * y3 - x1 * x2 - y2 * y3
    e2 = t1 * x3 + x2 * y1 - x2 * x3 - y1 * y3
    e3 = t2 * x1 + x3 * y2 - x1 * x3 - y1 * y2
    return np.stack([e1, e2, e3], axis=-1)


def _constraint_gradients(p: np.ndarray) -> np.ndarray:
    """d e_k / d p, shape (..., 3, 6), by the chain rule through y = 1 - x - t."""
    x, t, y = _split(p)
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    t1, t2, t3 = t[..., 0], t[..., 1], t[..., 2]
    y1, y2, y3 = y[..., 0], y[..., 1], y[..., 2]
    z = np.zeros_like(x1)
    # direct partials w.r.t. x (3), t (3), y (3)
    dx = np.stack(
        [
            np.stack([y3 - x2, t3 - x1, z], -1),
            np.stack([z, y1 - x3, t1 - x2], -1),
            np.stack([t2 - x3, z, y2 - x1], -1),
        ],
        -2,
    )
    dt = np.stack([np.stack([z, z, x2], -1), np.stack([x3, z, z], -1), np.stack([z, x1, z], -1)], -2)
    dy = np.stack(
        [
            np.stack([z, -y3, x1 - y2], -1),
            np.stack([x2 - y3, z, -y1], -1),
            np.stack([-y2, x3 - y1, z], -1),
        ],
        -2,
    )
    return np.concatenate([dx - dy, dt - dy], axis=-1)


# e_k is quadratic, so grad e_k(p) = H_k p + g_k; both recovered exactly from integer points
_G0 = _constraint_gradients(np.zeros(6))
_HESS = np.stack([_constraint_gradients(np.eye(6)[j]) - _G0 for j in range(6)], axis=-1)  # (3, 6, 6)
_OBJ = np.array([0.0, 0.0, 0.0, 1.0, 1.0, 1.0])


def kkt_residual(v: np.ndarray) -> np.ndarray:
    """The nine KKT equations at v = (p, lambda), batched over leading axes."""
    v = np.asarray(v, dtype=float)
    p, lam = v[..., :6], v[..., 6:9]
    grads = _constraint_gradients(p)
    stat = _OBJ - np.einsum("...k,...kj->...j", lam, grads)
    return np.concatenate([stat, extremal_residual(p[..., :3], p[..., 3:])], axis=-1)


def kkt_jacobian(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    p, lam = v[..., :6], v[..., 6:9]
    grads = _constraint_gradients(p)  # (..., 3, 6)
    J = np.zeros(v.shape[:-1] + (9, 9))
    J[..., :6, :6] = -np.einsum("...k,kij->...ij", lam, _HESS)
    J[..., :6, 6:] = -np.swapaxes(grads, -1, -2)
    J[..., 6:, :6] = grads
    return J


@dataclass(frozen=True, eq=False)
class ExtremalSolution:
    x: np.ndarray
    t: np.ndarray
    multipliers: np.ndarray
    residual: float
    isolated: bool  # KKT Jacobian nonsingular at the root

    @property
    def y(self) -> np.ndarray:
        return 1.0 - self.x - self.t

    @property
    def t_sum(self) -> float:
        return float(self.t.sum())

    @property
    def mu_prime(self) -> float | None:
        s = self.t_sum
        return None if abs(s) < 1e-12 else 1.0 / s

    @property
    def valid(self) -> bool:
        parts = np.concatenate([self.x, self.t, self.y])
        return bool(np.all((parts > 0) & (parts < 1)))

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.t, self.multipliers])

    def to_dict(self) -> dict:
        return {
            "x": self.x.tolist(),
            "t": self.t.tolist(),
            "y": self.y.tolist(),
            "multipliers": self.multipliers.tolist(),
            "t_sum": self.t_sum,
            "mu_prime": self.mu_prime,
            "residual": self.residual,
            "valid": self.valid,
            "isolated": self.isolated,
        }


def _newton_batch(V: np.ndarray, max_iter: int, tol: float, bound: float):
    V = V.copy()
    F = kkt_residual(V)
    nrm = np.abs(F).max(axis=1)
    alive = np.ones(len(V), dtype=bool)
    for _ in range(max_iter):
        act = alive & (nrm >= tol)
        if not act.any():
            break
        idx = np.flatnonzero(act)
        J = kkt_jacobian(V[idx])
        step = np.linalg.pinv(J, rcond=1e-13) @ (-F[idx])[..., None]
        step = step[..., 0]
        alpha = np.ones(len(idx))
        pending = np.ones(len(idx), dtype=bool)
        newV = V[idx].copy()
        newF = F[idx].copy()
        newn = nrm[idx].copy()
        for _ in range(40):
            if not pending.any():
                break
            k = np.flatnonzero(pending)
            trial = V[idx[k]] + alpha[k, None] * step[k]
            Ft = kkt_residual(trial)
            nt = np.abs(Ft).max(axis=1)
            better = nt < nrm[idx[k]]
            acc = k[better]
            newV[acc], newF[acc], newn[acc] = trial[better], Ft[better], nt[better]
            pending[acc] = False
            alpha[k[~better]] *= 0.5
        stuck = idx[pending]
        alive[stuck] = False
        V[idx], F[idx], nrm[idx] = newV, newF, newn
        alive &= np.abs(V).max(axis=1) <= bound
    return V, nrm, alive & (nrm < tol)


def solve_extremal_system(
    n_starts: int = 1000,
    seed: int = 0,
    max_iter: int = 200,
    tol: float = 1e-12,
    dedupe: float = 1e-6,
    bound: float = 1e3,
) -> list[ExtremalSolution]:
    """Multi-start damped Newton on the KKT system; distinct roots sorted by t_sum."""
    if n_starts < 1:
        raise ValidationError("n_starts must be positive")
    rng = np.random.default_rng(seed)
    starts = np.hstack([rng.uniform(0.0, 1.0, (n_starts, 6)), rng.uniform(-5.0, 5.0, (n_starts, 3))])
    V, nrm, ok = _newton_batch(starts, max_iter, tol, bound)
    roots: list[np.ndarray] = []
    for v in V[ok]:
        if not any(np.linalg.norm(v - r) <= dedupe for r in roots):
            roots.append(v)
    out = []
    for v in roots:
        J = kkt_jacobian(v)
        sv = np.linalg.svd(J, compute_uv=False)
        F = kkt_residual(v)
        out.append(
            ExtremalSolution(v[:3].copy(), v[3:6].copy(), v[6:].copy(), float(np.abs(F).max()), bool(sv[-1] > 1e-8 * sv[0]))
        )
    out.sort(key=lambda s: (round(s.t_sum, 12), tuple(np.round(s.vector, 12))))
    return out


def best_valid(solutions) -> ExtremalSolution | None:
    """Valid root with the largest mu' (the extremal covering constant)."""
    vs = [s for s in solutions if s.valid and s.mu_prime is not None]
    return max(vs, key=lambda s: s.mu_prime) if vs else None


def summarize(solutions, digits: int = 9) -> list[dict]:
    """Group roots by t_sum: one row per distinct value with counts."""
    groups: dict[float, list[ExtremalSolution]] = {}
    for s in solutions:
        groups.setdefault(round(s.t_sum, digits) + 0.0, []).append(s)
    rows = []
    for key in sorted(groups):
        g = groups[key]
        rows.append(
            {
                "t_sum": key,
                "mu_prime": None if g[0].mu_prime is None else round(g[0].mu_prime, digits),
                "count": len(g),
                "valid": sum(s.valid for s in g),
                "isolated": sum(s.isolated for s in g),
            }
        )
    return rows
