import numpy as np
import pytest

from nonsep.errors import ValidationError
from nonsep.family import (
    ReferenceBody,
    Scene,
    gen_nested_disks,
    gen_random_zero_ip_family,
    gen_touching_chain,
    random_convex_polygon,
    reference_from_name,
)
from nonsep.geometry import ConvexPolygon, minkowski_sum, regular_hexagon, unit_triangle
from nonsep.lab.summand import check_summand, verify_kip_theorem, verify_strictly_convex


def square(s=1.0):
    return ConvexPolygon(s * np.array([[-1, -1], [1, -1], [1, 1], [-1, 1]], dtype=float))


def test_square_is_summand_of_larger_square():
    res = check_summand(square(1), square(2))
    assert res.summand and res.area_gap < 1e-12


def test_hexagon_not_summand_of_triangle():
    res = check_summand(regular_hexagon().scale(0.2), unit_triangle().scale(3))
    assert not res.summand


def test_triangle_not_summand_of_square():
    assert not check_summand(unit_triangle().scale(0.3), square(2)).summand


def test_reflexive(rng):
    for _ in range(20):
        P = random_convex_polygon(rng)
        assert check_summand(P, P).summand


def test_summand_of_minkowski_sum(rng):
    for _ in range(20):
        A, B = random_convex_polygon(rng), random_convex_polygon(rng)
        assert check_summand(A, minkowski_sum(A, B)).summand


def test_scaling(rng):
    P = random_convex_polygon(rng)
    assert check_summand(P.scale(0.5), P).summand
    assert not check_summand(P.scale(2.0), P).summand


def test_kip_touching_square_chain():
    sc = gen_touching_chain(reference_from_name("square"), [1, 1, 1])
    rep = verify_kip_theorem(sc)
    assert rep.passed and rep.lam == pytest.approx(1.0, abs=1e-9)
    assert rep.pairs_checked == 2


def test_kip_nested_family():
    T = unit_triangle()
    sc = Scene.from_arrays(ReferenceBody.polygon(T), [[0, 0], [0.05, 0], [0, 0.04]], [2.0, 0.5, 0.3])
    rep = verify_kip_theorem(sc)
    assert rep.passed and rep.lam < 1


def test_kip_random_zero_ip():
    for seed in range(30):
        assert verify_kip_theorem(gen_random_zero_ip_family(seed)).passed


def test_kip_not_applicable_when_union_not_convex():
    # two hexagons touching at a vertex pair leave notches in the union
    sc = Scene.from_arrays(ReferenceBody.polygon(regular_hexagon()), [[0, 0], [2, 0]], [1, 1])
    assert not verify_kip_theorem(sc).applicable


def test_strict_nested_disks():
    for seed in range(30):
        rep = verify_strictly_convex(gen_nested_disks(4, seed))
        assert rep.passed


def test_strict_equal_overlapping_disks_not_applicable():
    sc = Scene.from_arrays(ReferenceBody.ball(2), [[0, 0], [1, 0]], [1, 1])
    assert not verify_strictly_convex(sc).applicable


def test_strict_rejects_polygons():
    with pytest.raises(ValidationError):
        verify_strictly_convex(gen_touching_chain(reference_from_name("square"), [1, 1]))


def test_mutual_scaling_preserves_verdict(rng):
    pairs = [(square(1), square(2)), (regular_hexagon().scale(0.2), unit_triangle().scale(3))]
    for _ in range(10):
        A, B = random_convex_polygon(rng), random_convex_polygon(rng)
        pairs += [(A, minkowski_sum(A, B)), (A, B)]
    for X, Y in pairs:
        base = check_summand(X, Y).summand
        for c in (0.5, 2.0):
            assert check_summand(X.scale(c), Y.scale(c)).summand == base
