import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from nonsep.covering import smallest_cover
from nonsep.errors import DimensionUnsupported, ValidationError
from nonsep.family import gen_circle_ring, gen_counterexample_triangles, gen_tetrahedra
from nonsep.render import RenderSpec, cover_from_dict, render_svg
from nonsep.separation import is_nonseparable_sweep

NS = "{http://www.w3.org/2000/svg}"


def parse(svg):
    return ET.fromstring(svg.split("\n", 1)[1])


def test_counterexample_drawing():
    sc = gen_counterexample_triangles()
    root = parse(render_svg(sc))
    members = root.find(f"{NS}g[@id='members']")
    assert len(members.findall(f"{NS}polygon")) == 3
    assert all(p.get("fill-opacity") == "0.4" for p in members)
    assert root.find(f"{NS}polygon[@id='cover']") is not None
    assert root.find(f"{NS}polygon[@id='hull']").get("stroke-dasharray") == "6 4"
    assert root.find(f"{NS}line[@id='gap']") is None


def test_viewbox_is_cover_bounds_with_margin():
    sc = gen_counterexample_triangles()
    cov = smallest_cover(sc)
    P = cov.translation + cov.ratio * sc.reference.body.vertices
    lo, hi = P.min(axis=0), P.max(axis=0)
    pad = 0.05 * (hi - lo).max()
    vb = [float(v) for v in parse(render_svg(sc, cov)).get("viewBox").split()]
    np.testing.assert_allclose(vb, [lo[0] - pad, -hi[1] - pad, hi[0] - lo[0] + 2 * pad, hi[1] - lo[1] + 2 * pad], atol=1e-5)


def test_gap_line_for_separable_scene():
    sc = gen_circle_ring(2, 0.01, drop=[0])
    cert = is_nonseparable_sweep(sc).to_dict()
    root = parse(render_svg(sc, certificate=cert))
    line = root.find(f"{NS}line[@id='gap']")
    assert line is not None and line.get("stroke-dasharray") == "1 4"
    # the line sits at the gap midpoint along the certificate direction
    u = np.asarray(cert["direction"]) / np.linalg.norm(cert["direction"])
    mid = 0.5 * (cert["gap"][0] + cert["gap"][1])
    for end in ((line.get("x1"), line.get("y1")), (line.get("x2"), line.get("y2"))):
        p = np.array([float(end[0]), -float(end[1])])
        assert p @ u == pytest.approx(mid, abs=1e-5)


def test_annotation_and_determinism():
    sc = gen_counterexample_triangles()
    a = render_svg(sc, spec=RenderSpec(annotate=True))
    assert a == render_svg(sc, spec=RenderSpec(annotate=True))
    assert re.search(r"lambda = 1\.05156", a)
    assert a.count("tau=") == 3


def test_errors():
    with pytest.raises(DimensionUnsupported):
        render_svg(gen_tetrahedra())
    with pytest.raises(ValidationError):
        RenderSpec(width_px=0)
    with pytest.raises(ValidationError):
        cover_from_dict({"ratio": 1})
