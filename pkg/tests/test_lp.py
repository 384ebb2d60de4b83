import numpy as np
import pytest
from scipy.optimize import linprog

from nonsep.errors import ValidationError
from nonsep.lp import LinearProgram, is_feasible, solve_lp


def test_small_known_lp():
    # min -x - y  s.t.  x + 2y <= 4, 3x + y <= 6, x, y >= 0  ->  (1.6, 1.2)
    lp = LinearProgram([-1, -1], [[1, 2], [3, 1]], [4, 6], lower=[0, 0])
    res = solve_lp(lp)
    assert res.ok
    np.testing.assert_allclose(res.z, [1.6, 1.2], atol=1e-12)
    assert res.objective == pytest.approx(-2.8)


def test_infeasible_and_unbounded():
    assert solve_lp(LinearProgram([1.0], [[1.0], [-1.0]], [-1.0, -1.0])).status == "infeasible"
    assert solve_lp(LinearProgram([-1.0], [[-1.0]], [0.0])).status == "unbounded"
    assert not is_feasible([[1.0], [-1.0]], [-1.0, -1.0])
    assert is_feasible([[1.0], [-1.0]], [1.0, 1.0])


def test_bad_shapes():
    with pytest.raises(ValidationError):
        LinearProgram([1, 2], [[1, 2]], [1, 2])
    with pytest.raises(ValidationError):
        LinearProgram([1, np.inf], [[1, 2]], [1])


def test_matches_scipy_on_random_lps(rng):
    solved = 0
    for _ in range(300):
        n, m = int(rng.integers(1, 5)), int(rng.integers(2, 30))
        G = rng.normal(size=(m, n))
        z0 = rng.normal(size=n)
        h = G @ z0 + rng.uniform(0, 2, m)  # feasible by construction
        c = rng.normal(size=n)
        ours = solve_lp(LinearProgram(c, G, h))
        ref = linprog(c, A_ub=G, b_ub=h, bounds=[(None, None)] * n, method="highs")
        if ref.status == 3:
            assert ours.status == "unbounded"
            continue
        assert ref.status == 0 and ours.ok
        solved += 1
        assert ours.objective == pytest.approx(ref.fun, abs=1e-8 * max(1, abs(ref.fun)))
        assert np.all(G @ ours.z <= h + 1e-9)
    assert solved > 100


def test_degenerate_lp_terminates():
    # many redundant constraints through the same vertex: cycling-prone
    th = np.linspace(0, np.pi / 2, 40)
    G = np.column_stack([np.cos(th), np.sin(th)])
    lp = LinearProgram([-1, -1], np.vstack([G, G]), np.ones(80), lower=[0, 0])
    res = solve_lp(lp)
    assert res.ok
    ref = linprog([-1, -1], A_ub=np.vstack([G, G]), b_ub=np.ones(80), method="highs")
    assert res.objective == pytest.approx(ref.fun, abs=1e-10)
