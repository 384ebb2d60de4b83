"""Deterministic SVG drawings of planar scenes, their covers and separation gaps."""
from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .covering import CoveringResult, smallest_cover
from .errors import DimensionUnsupported, ValidationError
from .family import Scene
from .geometry import convex_hull_points

_PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")
_CIRCLE_SAMPLES = 256


@dataclass(frozen=True)
class RenderSpec:
    width_px: int = 640
    height_px: int = 640
    member_stroke: float = 1.0
    hull_stroke: float = 1.5
    cover_stroke: float = 2.0
    gap_stroke: float = 1.5
    members: bool = True
    hull: bool = True
    cover: bool = True
    gap_line: bool = True
    annotate: bool = False

    def __post_init__(self):
        if self.width_px <= 0 or self.height_px <= 0:
            raise ValidationError("canvas dimensions must be positive")
        if min(self.member_stroke, self.hull_stroke, self.cover_stroke, self.gap_stroke) <= 0:
            raise ValidationError("stroke widths must be positive")


def _f(x: float) -> str:
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _pts(P: np.ndarray) -> str:
    # SVG's y axis points down; flip it so drawings match the usual orientation
    return " ".join(f"{_f(x)},{_f(-y)}" for x, y in P)


def _circle_points(c, r, m: int = _CIRCLE_SAMPLES) -> np.ndarray:
    th = 2 * np.pi * np.arange(m) / m
    return np.asarray(c) + r * np.column_stack([np.cos(th), np.sin(th)])


def _member_outlines(scene: Scene) -> list[np.ndarray]:
    if scene.reference.kind == "polygon":
        return [P.vertices for P in scene.realize()]
    return [_circle_points(x, r) for x, r in zip(scene.translations, scene.ratios)]


def _cover_outline(scene: Scene, cover: CoveringResult) -> np.ndarray:
    if scene.reference.kind == "polygon":
        return np.asarray(cover.translation) + cover.ratio * scene.reference.body.vertices
    return _circle_points(cover.translation, cover.ratio)


def _gap_segment(cert: dict, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """The separating line at the gap midpoint, clipped to the view box."""
    u = np.asarray(cert["direction"], dtype=float)
    u = u / np.linalg.norm(u)
    c = 0.5 * (cert["gap"][0] + cert["gap"][1])
    p = c * u
    v = np.array([-u[1], u[0]])
    span = 2.0 * np.linalg.norm(hi - lo)
    seg = np.array([p - span * v, p + span * v])
    # clip parametrically against the box
    t0, t1 = 0.0, 1.0
    d = seg[1] - seg[0]
    for k in range(2):
        for bound, sign in ((lo[k], -1.0), (hi[k], 1.0)):
            num = sign * (bound - seg[0][k])
            den = sign * d[k]
            if abs(den) < 1e-15:
                if num < 0:
                    return seg[:0]
                continue
            t = num / den
            if den > 0:
                t1 = min(t1, t)
            else:
                t0 = max(t0, t)
    if t0 >= t1:
        return seg[:0]
    return np.array([seg[0] + t0 * d, seg[0] + t1 * d])


def render_svg(scene: Scene, cover: CoveringResult | None = None, certificate: dict | None = None, spec: RenderSpec = RenderSpec()) -> str:
    """SVG text for a planar scene.

    Members are filled at 40% opacity, the hull of the union is dashed, the cover is
    outlined and a separation certificate (if given) is drawn as a dotted line. The
    view box is the cover's bounding box plus a 5% margin; without an explicit cover
    the smallest cover is computed.
    """
    if scene.dimension != 2:
        raise DimensionUnsupported("only planar scenes can be rendered")
    if cover is None:
        cover = smallest_cover(scene)
    outlines = _member_outlines(scene)
    cov = _cover_outline(scene, cover)
    allpts = np.vstack([cov, *outlines])
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    lo_c, hi_c = cov.min(axis=0), cov.max(axis=0)
    # the cover bounds everything it covers; fall back to all points if it does not
    if np.all(lo_c <= lo + 1e-9) and np.all(hi_c >= hi - 1e-9):
        lo, hi = lo_c, hi_c
    pad = 0.05 * max(hi - lo)
    lo, hi = lo - pad, hi + pad
    w, h = hi - lo
    px = w / spec.width_px  # world units per pixel, for text sizes
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width_px}" height="{spec.height_px}" '
        f'viewBox="{_f(lo[0])} {_f(-hi[1])} {_f(w)} {_f(h)}" preserveAspectRatio="xMidYMid meet">',
        f"<title>{escape(scene.label or 'scene')}</title>",
    ]
    if spec.members:
        out.append('<g id="members">')
        for i, P in enumerate(outlines):
            col = _PALETTE[i % len(_PALETTE)]
            out.append(
                f'<polygon points="{_pts(P)}" fill="{col}" fill-opacity="0.4" stroke="{col}" '
                f'stroke-width="{_f(spec.member_stroke)}" vector-effect="non-scaling-stroke"/>'
            )
        out.append("</g>")
    if spec.hull:
        H = convex_hull_points(np.vstack(outlines))
        out.append(
            f'<polygon id="hull" points="{_pts(H)}" fill="none" stroke="#333333" stroke-width="{_f(spec.hull_stroke)}" '
            'stroke-dasharray="6 4" vector-effect="non-scaling-stroke"/>'
        )
    if spec.cover:
        out.append(
            f'<polygon id="cover" points="{_pts(cov)}" fill="none" stroke="#000000" stroke-width="{_f(spec.cover_stroke)}" '
            'vector-effect="non-scaling-stroke"/>'
        )
    if spec.gap_line and certificate is not None and certificate.get("kind") == "Separable":
        seg = _gap_segment(certificate, lo, hi)
        if len(seg):
            (x0, y0), (x1, y1) = seg
            out.append(
                f'<line id="gap" x1="{_f(x0)}" y1="{_f(-y0)}" x2="{_f(x1)}" y2="{_f(-y1)}" stroke="#d62728" '
                f'stroke-width="{_f(spec.gap_stroke)}" stroke-dasharray="1 4" stroke-linecap="round" '
                'vector-effect="non-scaling-stroke"/>'
            )
    if spec.annotate:
        fs = 14 * px
        out.append(f'<g id="labels" font-family="sans-serif" font-size="{_f(fs)}" fill="#000000">')
        out.append(f'<text x="{_f(lo[0] + 0.5 * pad)}" y="{_f(-hi[1] + 0.5 * pad + fs)}">lambda = {cover.lam:.7f}</text>')
        for i, (x, r) in enumerate(zip(scene.translations, scene.ratios)):
            c = outlines[i].mean(axis=0)
            out.append(f'<text x="{_f(c[0])}" y="{_f(-c[1])}" text-anchor="middle">tau={r:.4g}</text>')
        if scene.reference.kind == "polygon":
            m = len(cov)
            for k in range(m):
                a, b = cov[k], cov[(k + 1) % m]
                mid = 0.5 * (a + b)
                out.append(
                    f'<text x="{_f(mid[0])}" y="{_f(-mid[1])}" text-anchor="middle">{np.linalg.norm(b - a):.6g}</text>'
                )
        else:
            c = np.asarray(cover.translation)
            out.append(f'<text x="{_f(c[0])}" y="{_f(-(c[1] + cover.ratio))}" text-anchor="middle">r={cover.ratio:.6g}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cover_from_dict(d: dict) -> CoveringResult:
    try:
        return CoveringResult(
            float(d["ratio"]), np.asarray(d["translation"], dtype=float), float(d["total_ratio"]), float(d.get("slack", 0.0)), str(d.get("method", "file"))
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad cover record: {exc}") from None
