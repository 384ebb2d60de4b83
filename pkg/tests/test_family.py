import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonsep.errors import BadCount, NotSymmetric, ParseError, ValidationError
from nonsep.family import (
    COUNTEREXAMPLE_SIDE,
    Homothet,
    ReferenceBody,
    Scene,
    counterexample_container,
    gen_circle_ring,
    gen_counterexample_triangles,
    gen_nested_disks,
    gen_random_ns_family,
    gen_random_zero_ip_family,
    gen_tetrahedra,
    gen_touching_chain,
    gen_triangle_chain,
    load_scene,
    reference_from_name,
    save_scene,
    scene_from_json,
    scene_to_json,
)
from nonsep.geometry import Relation, contains, hull_of, hull_relation, unit_square, unit_triangle
from nonsep.separation import is_nonseparable_sweep

S3 = np.sqrt(3.0)


def cross2(a, b):
    return a[0] * b[1] - a[1] * b[0]


def two_squares(dx=1.0):
    return Scene.from_arrays(ReferenceBody.polygon(unit_square()), [[0, 0], [dx, 0]], [1, 1], "pair")


# --------------------------------------------------------------------------- validation


def test_homothet_rejects_nonpositive_ratio():
    for bad in (0.0, -1.0, float("nan")):
        with pytest.raises(ValidationError):
            Homothet([0, 0], bad)


def test_scene_needs_two_members():
    with pytest.raises(ValidationError):
        Scene.from_arrays(ReferenceBody.ball(2), [[0, 0]], [1])


def test_scene_dimension_mismatch():
    with pytest.raises(ValidationError):
        Scene.from_arrays(ReferenceBody.ball(2), [[0, 0, 0], [1, 0, 0]], [1, 1])


def test_reference_needs_origin_in_interior():
    shifted = unit_square().translate([2, 0])
    with pytest.raises(ValidationError):
        ReferenceBody.polygon(shifted, recenter=False)
    ref = ReferenceBody.polygon(shifted)
    np.testing.assert_allclose(ref.body.centroid, 0, atol=1e-15)


def test_reference_from_name():
    assert reference_from_name("disk").kind == "ball"
    assert reference_from_name("tetrahedron").dimension == 3
    assert reference_from_name("hexagon").is_symmetric()
    assert not reference_from_name("triangle").is_symmetric()
    with pytest.raises(ValidationError):
        reference_from_name("heptagon")


# --------------------------------------------------------------------------- JSON


def test_round_trip_examples(tmp_path):
    for sc in (two_squares(), gen_counterexample_triangles(), gen_circle_ring(2), gen_tetrahedra()):
        p = tmp_path / "s.json"
        save_scene(sc, p)
        back = load_scene(p)
        assert back == sc
        # emitting again reproduces the same bytes
        assert scene_to_json(back) == p.read_text(encoding="utf-8")


@settings(max_examples=100, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.floats(-1e6, 1e6, allow_nan=False),
            st.floats(-1e6, 1e6, allow_nan=False),
            st.floats(1e-6, 1e6, allow_nan=False),
        ),
        min_size=2,
        max_size=8,
    )
)
def test_round_trip_is_bit_exact(items):
    X = [[a, b] for a, b, _ in items]
    r = [t for _, _, t in items]
    sc = Scene.from_arrays(ReferenceBody.polygon(unit_triangle()), X, r, "h")
    assert scene_from_json(scene_to_json(sc)) == sc


def test_floats_use_17_digits():
    sc = gen_counterexample_triangles()
    text = scene_to_json(sc)
    for x in sc.translations.ravel():
        assert format(x, ".17g") in text


def test_parse_error_has_position():
    with pytest.raises(ParseError, match="line 2"):
        scene_from_json('{"dimension": 2,\n  "members": [}')


def _valid_dict():
    return json.loads(scene_to_json(two_squares()))


def test_unknown_and_missing_fields_rejected():
    d = _valid_dict()
    d["colour"] = "red"
    with pytest.raises(ParseError, match="unknown"):
        scene_from_json(json.dumps(d))
    d = _valid_dict()
    del d["members"]
    with pytest.raises(ParseError, match="missing"):
        scene_from_json(json.dumps(d))
    d = _valid_dict()
    d["members"][0]["weight"] = 1
    with pytest.raises(ParseError):
        scene_from_json(json.dumps(d))


def test_zero_ratio_and_single_member_are_validation_errors():
    d = _valid_dict()
    d["members"][0]["ratio"] = 0
    with pytest.raises(ValidationError, match="ratio"):
        scene_from_json(json.dumps(d))
    d = _valid_dict()
    d["members"] = d["members"][:1]
    with pytest.raises(ValidationError, match="n >= 2"):
        scene_from_json(json.dumps(d))


def test_bad_types_rejected():
    d = _valid_dict()
    d["members"][0]["translation"] = [0, "x"]
    with pytest.raises(ParseError):
        scene_from_json(json.dumps(d))
    d = _valid_dict()
    d["dimension"] = 4
    with pytest.raises(ParseError):
        scene_from_json(json.dumps(d))
    d = _valid_dict()
    d["reference"] = {"kind": "blob"}
    with pytest.raises(ParseError):
        scene_from_json(json.dumps(d))


# --------------------------------------------------------------------------- generators


def test_counterexample_layout():
    sc = gen_counterexample_triangles()
    assert sc.n == 3 and np.all(sc.ratios == 1)
    T = counterexample_container()
    L = COUNTEREXAMPLE_SIDE
    assert L == pytest.approx(3.1547005, abs=1e-7)
    np.testing.assert_allclose(np.linalg.norm(T.edges, axis=1), L, atol=1e-12)
    polys = sc.realize()
    first, mid, last = 2 / 3 + 1 / S3, 1.0, 1 / 3 + 1 / S3
    assert first + mid + last == pytest.approx(L, abs=1e-12)
    for k, P in enumerate(polys):
        assert np.all(contains(T, P.vertices, tol=1e-12))
        # side k of T: start, then first segment, the unit side, the last segment
        a, b = T.vertices[k], T.vertices[(k + 1) % 3]
        e = (b - a) / L
        on_side = [v for v in P.vertices if abs(cross2(e, v - a)) < 1e-12]
        assert len(on_side) == 2
        s = sorted(float((v - a) @ e) for v in on_side)
        assert s[0] == pytest.approx(first, abs=1e-12)
        assert s[1] - s[0] == pytest.approx(mid, abs=1e-12)
        assert L - s[1] == pytest.approx(last, abs=1e-12)
        # the third vertex points into T
        apex = [v for v in P.vertices if abs(cross2(e, v - a)) >= 1e-12][0]
        assert cross2(e, apex - a) > 0


def test_counterexample_pairs_touch_the_third():
    polys = gen_counterexample_triangles().realize()
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        assert hull_relation(hull_of([polys[i], polys[j]]), polys[k]).kind is Relation.TOUCHING


def test_triangle_chain():
    with pytest.raises(BadCount):
        gen_triangle_chain(2)
    assert gen_triangle_chain(3) == Scene(gen_triangle_chain(3).reference, gen_counterexample_triangles().members, "chain3")
    for n in (4, 7):
        sc = gen_triangle_chain(n)
        assert sc.n == n
        assert is_nonseparable_sweep(sc).nonseparable


def test_tetrahedra():
    sc = gen_tetrahedra()
    assert sc.n == 3 and sc.dimension == 3
    V = sc.member_vertices()
    for P in V:
        # the bottom facet sits on z = 0 and is a translate of a counterexample triangle
        assert np.sum(np.abs(P[:, 2]) < 1e-12) == 3
    base = [P[np.abs(P[:, 2]) < 1e-12, :2] for P in V]
    for B, T in zip(base, gen_counterexample_triangles().member_vertices()):
        assert sorted(map(tuple, np.round(B, 10))) == sorted(map(tuple, np.round(T, 10)))


def test_circle_ring():
    sc = gen_circle_ring(2, 0.01)
    assert sc.n == 5
    X = sc.translations
    d = np.linalg.norm(X[:, None] - X[None], axis=2)
    np.fill_diagonal(d, np.inf)
    # consecutive disks are disjoint and nearly touching
    assert d.min() == pytest.approx(2.02, abs=1e-12)
    assert gen_circle_ring(2, drop=[0]).n == 4
    with pytest.raises(BadCount):
        gen_circle_ring(0)
    with pytest.raises(ValidationError):
        gen_circle_ring(2, 0.0)


def test_touching_chain():
    sc = gen_touching_chain(ReferenceBody.ball(2), [1, 1])
    assert np.linalg.norm(sc.translations[1] - sc.translations[0]) == pytest.approx(2.0)
    sq = gen_touching_chain(ReferenceBody.polygon(unit_square()), [1, 2, 1])
    np.testing.assert_allclose(sq.translations[:, 0], [0, 1.5, 3.0], atol=1e-12)
    polys = sq.realize()
    assert hull_relation(polys[0], polys[1]).kind is Relation.TOUCHING
    assert hull_relation(polys[1], polys[2]).kind is Relation.TOUCHING
    diag = gen_touching_chain(ReferenceBody.polygon(unit_square()), [1, 1], [1, 1])
    P, Q = diag.realize()
    assert hull_relation(P, Q).kind is Relation.TOUCHING
    with pytest.raises(NotSymmetric):
        gen_touching_chain(ReferenceBody.polygon(unit_triangle()), [1, 1])


def test_random_ns_family_deterministic_and_ns():
    a = gen_random_ns_family(reference_from_name("disk"), 5, 42)
    b = gen_random_ns_family(reference_from_name("disk"), 5, 42)
    assert a == b
    assert is_nonseparable_sweep(a).nonseparable
    pair = gen_random_ns_family(reference_from_name("square"), 2, 3)
    P, Q = pair.realize()
    assert hull_relation(P, Q).kind is not Relation.DISJOINT
    with pytest.raises(BadCount):
        gen_random_ns_family(reference_from_name("disk"), 1, 0)


def test_zero_ip_and_nested_generators():
    from nonsep.separation import is_0_impassable

    for seed in range(12):
        assert is_0_impassable(gen_random_zero_ip_family(seed))
    for seed in range(5):
        sc = gen_nested_disks(4, seed)
        k = int(np.argmax(sc.ratios))
        assert np.all(np.linalg.norm(sc.translations - sc.translations[k], axis=1) + sc.ratios <= sc.ratios[k] + 1e-12)
