"""Stochastic search for NS families with a large covering constant.

Only evidence is gathered: the result is the best configuration found, with no claim
that it is optimal. The known bracket for planar references is
2/3 + 2/(3 sqrt 3) <= sup lambda <= 2.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ..covering import compute_lambda
from ..errors import BadCount, ValidationError
from ..family import ReferenceBody, Scene
from ..separation import _splits, _support_rows, critical_angles, is_nonseparable_sweep


@dataclass(frozen=True, eq=False)
class SearchResult:
    scene: Scene
    lam: float
    iterations: int
    restarts: int
    history: tuple[float, ...]  # best lambda after each round

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "iterations": self.iterations,
            "restarts": self.restarts,
            "history": list(self.history),
            "scene": self.scene.to_dict(),
        }


_LOG_R = 6.0  # bound on log ratios; keeps polish steps away from degenerate members


class _Problem:
    """Vector v = (translations, log ratios); ratios are normalized to mean 1."""

    def __init__(self, ref: ReferenceBody, n: int):
        self.ref, self.n = ref, n
        self.splits = [(list(S), list(C)) for S, C in _splits(n)]

    def scene(self, v) -> Scene:
        X = v[: 2 * self.n].reshape(self.n, 2)
        r = np.exp(np.clip(v[2 * self.n :], -_LOG_R, _LOG_R))
        return Scene.from_arrays(self.ref, X, r / r.mean(), "search")

    def lam(self, v) -> float:
        return compute_lambda(self.scene(v))

    def separations(self, v) -> np.ndarray:
        """Signed separation of every split: widest gap over directions, < 0 when overlapping."""
        sc = self.scene(v)
        a = critical_angles(sc)
        lo, hi = _support_rows(sc, np.column_stack([np.cos(a), np.sin(a)]))
        out = np.empty(len(self.splits))
        for k, (S, C) in enumerate(self.splits):
            fwd = lo[:, C].min(axis=1) - hi[:, S].max(axis=1)
            bwd = lo[:, S].min(axis=1) - hi[:, C].max(axis=1)
            out[k] = max(fwd.max(), bwd.max())
        return out

    def penalized(self, v, weight: float) -> float:
        return self.lam(v) - weight * max(self.separations(v).max(), 0.0)


def _climb(prob: _Problem, v, steps: int, rng, weight: float):
    """(1+1) hill climber with success-rule step size and covariance adaptation.

    The exact-penalty objective lambda - weight * max(gap, 0) lets the walk run along
    the tangency boundary of the NS region instead of stalling against it.
    """
    d = len(v)
    f = prob.penalized(v, weight)
    sigma, C, pc, ps = 0.1, np.eye(d), np.zeros(d), 0.5
    p_target, c_p, damp = 2.0 / 11.0, 1.0 / 12.0, 1.0 + d / 2.0
    c_c, c_cov, p_thresh = 2.0 / (d + 2.0), 2.0 / (d * d + 6.0), 0.44
    for _ in range(steps):
        A = np.linalg.cholesky(C)
        step = A @ rng.normal(size=d)
        w = v + sigma * step
        fw = prob.penalized(w, weight)
        ok = fw >= f
        ps = (1 - c_p) * ps + c_p * ok
        sigma = float(np.clip(sigma * np.exp((ps - p_target) / (damp * (1 - p_target))), 1e-12, 1.0))
        if ok:
            v, f = w, fw
            if ps < p_thresh:
                pc = (1 - c_c) * pc + np.sqrt(c_c * (2 - c_c)) * step
                C = (1 - c_cov) * C + c_cov * np.outer(pc, pc)
            else:
                pc = (1 - c_c) * pc
                C = (1 - c_cov) * C + c_cov * (np.outer(pc, pc) + c_c * (2 - c_c) * C)
    return v


def _polish(prob: _Problem, v):
    """Local refinement: maximize lambda subject to every split separation <= 0."""
    v = v.copy()
    v[2 * prob.n :] = np.clip(v[2 * prob.n :], -_LOG_R, _LOG_R)
    with warnings.catch_warnings():
        # SLSQP line searches may overshoot the ratio bounds; scipy clips them back
        warnings.filterwarnings("ignore", "Values in x were outside bounds", RuntimeWarning)
        res = minimize(
            lambda u: -prob.lam(u),
            v,
            method="SLSQP",
            bounds=[(None, None)] * (2 * prob.n) + [(-_LOG_R, _LOG_R)] * prob.n,
            constraints=[{"type": "ineq", "fun": lambda u: -prob.separations(u)}],
            options={"maxiter": 200, "ftol": 1e-13},
        )
    return res.x if np.all(np.isfinite(res.x)) else v


def _make_ns(prob: _Problem, v, bisections: int = 60) -> Scene:
    """Contract translations about their weighted center until the sweep certifies NS."""
    sc = prob.scene(v)
    if is_nonseparable_sweep(sc).nonseparable:
        return sc
    X, r = sc.translations, sc.ratios
    c = (r[:, None] * X).sum(axis=0) / r.sum()
    lo, hi = 0.0, 1.0  # scale 0 puts every center at c, which is NS
    for _ in range(bisections):
        mid = 0.5 * (lo + hi)
        if is_nonseparable_sweep(Scene.from_arrays(prob.ref, c + mid * (X - c), r)).nonseparable:
            lo = mid
        else:
            hi = mid
    return Scene.from_arrays(prob.ref, c + lo * (X - c), r, "search")


def search_sup_lambda(
    reference: ReferenceBody,
    n_members: int,
    iterations: int = 10_000,
    seed: int = 0,
    climb_steps: int = 500,
    penalty: float = 5.0,
) -> SearchResult:
    """Multi-start hill climbing for NS families of homothets of ``reference`` with large lambda.

    The budget of climber evaluations is spent in rounds of ``climb_steps``. Each round
    starts from a fresh random configuration and ends with a constrained local polish.
    The round result is contracted until the exact sweep certifies it NS, and the best
    certified lambda over all rounds is reported.
    """
    if reference.kind != "polygon":
        raise ValidationError("search_sup_lambda needs a polygon reference")
    if n_members < 3:
        raise BadCount("search needs at least 3 members")
    if iterations < 1 or climb_steps < 1:
        raise ValidationError("iterations and climb_steps must be positive")
    rng = np.random.default_rng(seed)
    prob = _Problem(reference, n_members)
    spread = 1.5 * np.sqrt(n_members / 3.0)
    best_scene, best_lam, history = None, -np.inf, []
    rounds = max(1, iterations // climb_steps)
    for k in range(rounds):
        steps = climb_steps if k < rounds - 1 else iterations - climb_steps * (rounds - 1)
        v0 = np.concatenate([rng.uniform(-spread, spread, 2 * n_members), rng.normal(0.0, 0.3, n_members)])
        sc = _make_ns(prob, _polish(prob, _climb(prob, v0, steps, rng, penalty)))
        lam = compute_lambda(sc)
        if lam > best_lam:
            best_scene, best_lam = sc, lam
        history.append(float(best_lam))
    scene = Scene(best_scene.reference, best_scene.members, f"search-best-seed{seed}")
    return SearchResult(scene, float(best_lam), iterations, rounds - 1, tuple(history))
