"""Randomized verification suites.

Each suite draws seeded random instances that satisfy a statement's hypotheses and
runs the matching verifier on them. ``inject_corrupt`` appends an instance that
breaks the hypotheses (members pushed far apart) while still being checked as if
they held, which must make the suite fail.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from ..covering import goodman_cover_symmetric, interval_cover_1d
from ..errors import NonsepError, ValidationError
from ..family import (
    Scene,
    gen_nested_disks,
    gen_random_ns_family,
    gen_random_zero_ip_family,
    reference_from_name,
)
from .lemmas import cover_with_ratio_d, verify_width_lemma
from .summand import verify_kip_theorem, verify_strictly_convex


@dataclass(frozen=True)
class CaseOutcome:
    index: int
    label: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"index": self.index, "label": self.label, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    seed: int
    outcomes: tuple[CaseOutcome, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)

    @property
    def failures(self) -> list[CaseOutcome]:
        return [o for o in self.outcomes if not o.passed]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "cases": len(self.outcomes),
            "failed": len(self.failures),
            "passed": self.passed,
            "failures": [o.to_dict() for o in self.failures],
        }


def _spread(scene: Scene, factor: float = 10.0) -> Scene:
    X, r = scene.translations, scene.ratios
    c = (r[:, None] * X).sum(axis=0) / r.sum()
    return Scene.from_arrays(scene.reference, c + factor * (X - c), r, scene.label + "-corrupt")


# ---------------------------------------------------------------- per-suite generators and checks


def _gen_intervals(seed: int):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 9))
    tau = rng.uniform(0.05, 2.0, n)
    x = np.empty(n)
    x[0] = rng.uniform(-5, 5)
    lo, hi = x[0] - tau[0], x[0] + tau[0]
    for i in range(1, n):
        # the new interval must meet the current union [lo, hi]
        x[i] = rng.uniform(lo - tau[i], hi + tau[i])
        lo, hi = min(lo, x[i] - tau[i]), max(hi, x[i] + tau[i])
    return f"intervals{n}-seed{seed}", (x, tau)


def _corrupt_intervals(case):
    label, (x, tau) = case
    x = np.append(x, x.max() + tau.max() + 10.0)
    return label + "-corrupt", (x, np.append(tau, 0.5))


def _check_intervals(case) -> str:
    _, (x, tau) = case
    res = interval_cover_1d(x, tau)
    # shift so the union starts at 0; the weighted center then lies at most sum(tau) away
    shifted = res.center - res.union[0]
    if not res.covers or shifted > res.radius + 1e-12 * max(1.0, res.radius):
        return f"cover [{res.center - res.radius}, {res.center + res.radius}] vs union {res.union}"
    return ""


_WIDTH_REFS = ("triangle", "square", "hexagon", "disk")


def _gen_ns(refs):
    def gen(seed: int):
        rng = np.random.default_rng(seed)
        name = refs[int(rng.integers(len(refs)))]
        n = int(rng.integers(2, 7))
        sc = gen_random_ns_family(reference_from_name(name), n, int(rng.integers(2**31)))
        return f"{name}-{sc.label}", sc

    return gen


def _corrupt_scene(case):
    label, sc = case
    return label + "-corrupt", _spread(sc)


def _check_width(case) -> str:
    rep = verify_width_lemma(case[1])
    return "" if rep.passed else f"width ratio {rep.max_ratio!r} along {rep.argmax.tolist()}"


def _check_ratio_d(case) -> str:
    sc = case[1]
    res = cover_with_ratio_d(sc)
    if res.ratio / sc.total_ratio > 2.0 + 1e-12:
        return f"ratio bound {res.ratio / sc.total_ratio!r} exceeds 2"
    return ""


def _check_goodman(case) -> str:
    res = goodman_cover_symmetric(case[1])
    return "" if res.lam <= 1.0 + 1e-9 else f"lambda {res.lam!r}"


def _gen_zero_ip(seed: int):
    sc = gen_random_zero_ip_family(seed)
    return sc.label, sc


def _check_kip(case) -> str:
    rep = verify_kip_theorem(case[1])
    return "" if rep.passed else f"report {rep.to_dict()}"


def _gen_nested(seed: int):
    n = int(np.random.default_rng(seed).integers(2, 8))
    sc = gen_nested_disks(n, seed)
    return sc.label, sc


def _check_strict(case) -> str:
    rep = verify_strictly_convex(case[1])
    return "" if rep.passed else f"report {rep.to_dict()}"


@dataclass(frozen=True)
class _Suite:
    generate: Callable[[int], Any]
    check: Callable[[Any], str]  # "" on success, else the reason
    corrupt: Callable[[Any], Any]
    default_count: int


SUITES: dict[str, _Suite] = {
    "lemma3": _Suite(_gen_intervals, _check_intervals, _corrupt_intervals, 10_000),
    "lemma1": _Suite(_gen_ns(_WIDTH_REFS), _check_width, _corrupt_scene, 100),
    "thm4": _Suite(_gen_ns(("triangle",)), _check_ratio_d, _corrupt_scene, 100),
    "thm5": _Suite(_gen_ns(("disk", "square", "hexagon")), _check_goodman, _corrupt_scene, 500),
    "thm6": _Suite(_gen_zero_ip, _check_kip, _corrupt_scene, 100),
    "thm7": _Suite(_gen_nested, _check_strict, _corrupt_scene, 100),
}


def _threads() -> int:
    raw = os.environ.get("NONSEP_THREADS", "")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        raise ValidationError(f"NONSEP_THREADS must be an integer, got {raw!r}") from None


def _run_case(suite: _Suite, index: int, case) -> CaseOutcome:
    label = case[0]
    try:
        reason = suite.check(case)
    except NonsepError as exc:
        reason = f"{type(exc).__name__}: {exc}"
    return CaseOutcome(index, label, not reason, reason)


def run_suite(name: str, seed: int = 0, count: int | None = None, inject_corrupt: bool = False) -> SuiteReport:
    """Run one suite; case i uses seed ``seed * 1_000_003 + i`` and results keep case order."""
    if name not in SUITES:
        raise ValidationError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    suite = SUITES[name]
    count = suite.default_count if count is None else int(count)
    if count < 0:
        raise ValidationError("count must be non-negative")
    cases = [suite.generate(seed * 1_000_003 + i) for i in range(count)]
    if inject_corrupt:
        base = cases[0] if cases else suite.generate(seed * 1_000_003)
        cases.append(suite.corrupt(base))
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        outcomes = list(pool.map(lambda ic: _run_case(suite, *ic), enumerate(cases)))
    return SuiteReport(name, seed, tuple(outcomes))


def verify(suite: str = "all", seed: int = 0, count: int | None = None, inject_corrupt: bool = False) -> list[SuiteReport]:
    names = list(SUITES) if suite == "all" else [suite]
    return [run_suite(n, seed, count, inject_corrupt) for n in names]
