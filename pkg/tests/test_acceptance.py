"""End-to-end acceptance checks: each prints one PASS/FAIL line with its runtime."""
import time
from contextlib import contextmanager
from itertools import combinations

import numpy as np
import pytest

from nonsep.covering import (
    compute_lambda,
    covering_violation,
    goodman_cover_symmetric,
    interval_cover_1d,
    smallest_cover,
)
from nonsep.family import (
    gen_circle_ring,
    gen_counterexample_triangles,
    gen_nested_disks,
    gen_random_ns_family,
    gen_random_scene,
    gen_random_zero_ip_family,
    gen_triangle_chain,
    reference_from_name,
)
from nonsep.geometry import Relation, convex_hull, hull_relation
from nonsep.lab.extremal import best_valid, solve_extremal_system
from nonsep.lab.lemmas import cover_with_ratio_d
from nonsep.lab.search import search_sup_lambda
from nonsep.lab.summand import verify_kip_theorem, verify_strictly_convex
from nonsep.separation import critical_angles, is_nonseparable_oracle, is_nonseparable_sweep

S3 = np.sqrt(3.0)
LAM_STAR = 2 / 3 + 2 / (3 * S3)
SEED = 20240611


@contextmanager
def criterion(capsys, k: int, title: str, limit: float):
    """Time the block and print one verdict line; runtime overruns fail the test."""
    t0 = time.perf_counter()
    ok, note = False, ""
    try:
        yield
        ok = True
    except AssertionError as exc:
        note = f" ({str(exc).splitlines()[0] if str(exc) else 'assertion failed'})"
        raise
    finally:
        dt = time.perf_counter() - t0
        within = dt < limit
        status = "PASS" if ok and within else "FAIL"
        with capsys.disabled():
            print(f"\n{status} criterion {k}: {title} [{dt:.2f}s, limit {limit:g}s]{note}")
    assert within, f"criterion {k} took {dt:.2f}s (limit {limit}s)"


def test_criterion_01_counterexample(capsys):
    with criterion(capsys, 1, "three-triangle lambda = 2/3 + 2/(3 sqrt 3), NS, pairwise tangencies", 1.0):
        sc = gen_counterexample_triangles()
        assert abs(compute_lambda(sc) - LAM_STAR) < 1e-9
        assert is_nonseparable_sweep(sc).nonseparable
        P = sc.realize()
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            hull = convex_hull(np.vstack([P[i].vertices, P[j].vertices]))
            assert hull_relation(hull, P[k]).kind is Relation.TOUCHING


def test_criterion_02_chain(capsys):
    with criterion(capsys, 2, "triangle chains n=4..10 have cover side n-1+2/sqrt 3", 5.0):
        for n in range(4, 11):
            sc = gen_triangle_chain(n)
            res = smallest_cover(sc)
            side = res.ratio  # unit-side reference triangle
            assert abs(side - (n - 1 + 2 / S3)) < 1e-8, (n, side)
            assert res.lam == pytest.approx((n - 1 + 2 / S3) / n, abs=1e-9) and res.lam > 1


def test_criterion_03_extremal(capsys):
    with criterion(capsys, 3, "extremal system roots from 1000 Newton starts", 30.0):
        sols = solve_extremal_system(1000, seed=0)
        assert all(s.residual < 1e-10 for s in sols)
        roots = {}
        for sign in (+1, -1):
            x, t = 0.25 + sign / (4 * S3), (3 - sign * S3) / 4
            hit = [s for s in sols if np.abs(s.x - x).max() < 1e-8 and np.abs(s.t - t).max() < 1e-8]
            assert hit, f"no root with x = {x}, t = {t}"
            roots[sign] = hit[0]
        # compared against the closed forms 2/3 +- 2/(3 sqrt 3)
        assert abs(roots[+1].mu_prime - LAM_STAR) < 1e-9
        assert abs(roots[-1].mu_prime - (2 / 3 - 2 / (3 * S3))) < 1e-9
        assert any(abs(s.t_sum - 1.0) < 1e-8 for s in sols)
        assert best_valid(sols).mu_prime == pytest.approx(LAM_STAR, abs=1e-9)


def test_criterion_04_goodman(capsys):
    with criterion(capsys, 4, "goodman cover of 500 NS scenes per symmetric reference", 60.0):
        rng = np.random.default_rng(SEED)
        for name in ("disk", "square", "hexagon"):
            ref = reference_from_name(name)
            for _ in range(500):
                sc = gen_random_ns_family(ref, int(rng.integers(2, 7)), int(rng.integers(2**31)))
                res = goodman_cover_symmetric(sc)
                # independent containment check of the returned homothet
                assert covering_violation(sc, res.translation, sc.total_ratio) <= 1e-9, (name, sc.label)
                assert res.lam <= 1 + 1e-9


def test_criterion_05_intervals(capsys):
    with criterion(capsys, 5, "weighted-center interval covers for 10^4 connected unions", 5.0):
        rng = np.random.default_rng(SEED)
        for _ in range(10_000):
            n = int(rng.integers(1, 9))
            tau = rng.uniform(0.05, 2.0, n)
            x = np.empty(n)
            x[0] = rng.uniform(-5, 5)
            lo, hi = x[0] - tau[0], x[0] + tau[0]
            for i in range(1, n):
                x[i] = rng.uniform(lo - tau[i], hi + tau[i])
                lo, hi = min(lo, x[i] - tau[i]), max(hi, x[i] + tau[i])
            res = interval_cover_1d(x, tau)
            c, R = (tau * x).sum() / tau.sum(), tau.sum()
            # brute force over endpoints
            ends = np.concatenate([x - tau, x + tau])
            assert np.all(np.abs(ends - c) <= R + 1e-12)
            assert res.center == pytest.approx(c, rel=1e-12, abs=1e-12)
            # normalized so the union starts at 0: the center lies in [0, sum tau]
            assert 0 - 1e-12 <= c - lo <= R + 1e-12


def test_criterion_06_ratio_d(capsys):
    with criterion(capsys, 6, "ratio-d cover construction on 100 NS triangle scenes", 60.0):
        rng = np.random.default_rng(SEED)
        ref = reference_from_name("triangle")
        K = ref.body
        for _ in range(100):
            sc = gen_random_ns_family(ref, int(rng.integers(2, 7)), int(rng.integers(2**31)))
            res = cover_with_ratio_d(sc)
            assert res.details["m0_in_k0"] <= 1e-9
            # widths of the union hull bounded by those of (sum tau) K at every critical direction
            a = critical_angles(sc)
            U = np.column_stack([np.cos(a), np.sin(a)])
            V = sc.all_vertices() @ U.T
            Kp = K.vertices @ U.T
            assert np.all(V.max(0) - V.min(0) <= sc.total_ratio * (Kp.max(0) - Kp.min(0)) + 1e-9)
            assert covering_violation(sc, res.translation, res.ratio) <= 1e-9
            assert res.ratio / sc.total_ratio <= 2 + 1e-12


def test_criterion_07_sweep_vs_oracle(capsys):
    with criterion(capsys, 7, "sweep verdict equals split-enumeration oracle on 200 mixed scenes", 120.0):
        rng = np.random.default_rng(SEED)
        names = ("triangle", "square", "hexagon", "disk")
        verdicts = []
        for k in range(200):
            ref = reference_from_name(names[k % 4])
            n, seed = int(rng.integers(2, 9)), int(rng.integers(2**31))
            sc = gen_random_ns_family(ref, n, seed) if k % 2 else gen_random_scene(ref, n, seed)
            a, b = is_nonseparable_sweep(sc), is_nonseparable_oracle(sc)
            assert a.nonseparable == b.nonseparable, sc.label
            verdicts.append(a.nonseparable)
        assert 0 < sum(verdicts) < len(verdicts)


def test_criterion_08_convex_union(capsys):
    with criterion(capsys, 8, "100 convex-union polygon families and 100 nested disk families", 120.0):
        for seed in range(100):
            rep = verify_kip_theorem(gen_random_zero_ip_family(SEED + seed))
            assert rep.summand and rep.lam <= 1 + 1e-9
        for seed in range(100):
            sc = gen_nested_disks(int(np.random.default_rng(seed).integers(2, 8)), SEED + seed)
            assert verify_strictly_convex(sc).passed


def test_criterion_09_ring(capsys):
    with criterion(capsys, 9, "5-disk ring is NS and every removal of up to 3 disks separates", 10.0):
        ring = gen_circle_ring(2, 0.01)
        assert ring.n == 5 and is_nonseparable_sweep(ring).nonseparable
        for size in (1, 2, 3):
            for drop in combinations(range(5), size):
                sub = ring.without(drop)
                cert = is_nonseparable_sweep(sub)
                assert cert.separable and cert.replay(sub), drop


def test_criterion_10_search(capsys):
    with criterion(capsys, 10, "search over 3 triangles reaches lambda >= 1.05 (bracket [1.0515669, 2])", 120.0):
        res = search_sup_lambda(reference_from_name("triangle"), 3, iterations=10_000, seed=0)
        assert res.lam >= 1.05, res.lam
        assert is_nonseparable_sweep(res.scene).nonseparable
        assert res.lam <= 2.0
