"""Scene data model (reference body + positive homothets), JSON persistence and
generators for the classical configurations."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BadCount, GenerationFailed, NotSymmetric, ParseError, ValidationError
from .geometry import (
    EPS_G,
    Ball,
    ConvexPolygon,
    Polytope3,
    central_symmetrization,
    convex_hull,
    direction,
    minkowski_sum,
    realize_homothet,
    regular_tetrahedron,
    support,
    unit_triangle,
)
from .jsonio import dumps

SQRT3 = np.sqrt(3.0)
COUNTEREXAMPLE_SIDE = 2.0 + 2.0 / SQRT3


@dataclass(frozen=True, eq=False)
class Homothet:
    translation: np.ndarray
    ratio: float

    def __post_init__(self):
        x = np.array(self.translation, dtype=float).reshape(-1)
        if not np.all(np.isfinite(x)):
            raise ValidationError("member translation must be finite")
        if not (np.isfinite(self.ratio) and self.ratio > 0):
            raise ValidationError(f"member ratio must be > 0, got {self.ratio}")
        x.flags.writeable = False
        object.__setattr__(self, "translation", x)
        object.__setattr__(self, "ratio", float(self.ratio))

    def __eq__(self, other):
        return (
            isinstance(other, Homothet)
            and self.ratio == other.ratio
            and np.array_equal(self.translation, other.translation)
        )

    def __repr__(self):
        return f"Homothet({self.translation.tolist()!r}, {self.ratio!r})"


@dataclass(frozen=True, eq=False)
class ReferenceBody:
    """The body K; must contain the origin in its interior."""

    kind: str  # "polygon" | "ball" | "polytope3"
    body: ConvexPolygon | Ball | Polytope3

    def __post_init__(self):
        if self.kind not in ("polygon", "ball", "polytope3"):
            raise ValidationError(f"unknown reference kind {self.kind!r}")
        b = self.body
        if self.kind == "ball":
            if not (isinstance(b, Ball) and b.radius == 1.0 and not np.any(b.center)):
                raise ValidationError("ball reference must be the unit ball at the origin")
        elif self.kind == "polygon":
            if not isinstance(b, ConvexPolygon):
                raise ValidationError("polygon reference needs a ConvexPolygon")
            if np.any(b.offsets <= EPS_G):
                raise ValidationError("reference polygon must contain the origin in its interior")
        else:
            if not isinstance(b, Polytope3):
                raise ValidationError("polytope3 reference needs a Polytope3")
            if np.any(b.offsets <= EPS_G):
                raise ValidationError("reference polytope must contain the origin in its interior")

    @classmethod
    def polygon(cls, body, recenter: bool = True) -> "ReferenceBody":
        P = body if isinstance(body, ConvexPolygon) else convex_hull(body)
        if recenter:
            P = P.translate(-P.centroid)
        return cls("polygon", P)

    @classmethod
    def ball(cls, dimension: int = 2) -> "ReferenceBody":
        if dimension not in (2, 3):
            raise ValidationError("dimension must be 2 or 3")
        return cls("ball", Ball(np.zeros(dimension), 1.0))

    @classmethod
    def polytope3(cls, vertices, recenter: bool = True) -> "ReferenceBody":
        v = np.asarray(vertices, dtype=float)
        if recenter:
            v = v - v.mean(axis=0)
        return cls("polytope3", Polytope3.from_points(v))

    @property
    def dimension(self) -> int:
        return self.body.dimension

    def is_symmetric(self, tol: float = EPS_G) -> bool:
        return self.body.is_symmetric(tol)

    def support(self, u):
        return support(self.body, u)

    def radial(self, u) -> float:
        """Radial function: largest s with s*u in the body (u a unit vector)."""
        u = np.asarray(u, dtype=float)
        if self.kind == "ball":
            return 1.0 / float(np.linalg.norm(u))
        return _radial(self.body.normals, self.body.offsets, u)

    def to_dict(self) -> dict:
        if self.kind == "ball":
            return {"kind": "ball"}
        return {"kind": self.kind, "vertices": self.body.vertices.tolist()}

    def __eq__(self, other):
        if not isinstance(other, ReferenceBody) or other.kind != self.kind:
            return False
        if self.kind == "ball":
            return self.dimension == other.dimension
        a, b = self.body.vertices, other.body.vertices
        return a.shape == b.shape and np.array_equal(a, b)


def _radial(normals, offsets, u) -> float:
    au = normals @ u
    pos = au > 1e-15
    return float(np.min(offsets[pos] / au[pos]))


@dataclass(frozen=True, eq=False)
class Scene:
    reference: ReferenceBody
    members: tuple
    label: str = ""

    def __post_init__(self):
        members = tuple(self.members)
        if len(members) < 2:
            raise ValidationError(f"a family needs n >= 2 members, got {len(members)}")
        d = self.reference.dimension
        for i, m in enumerate(members):
            if not isinstance(m, Homothet):
                raise ValidationError(f"member {i} is not a Homothet")
            if len(m.translation) != d:
                raise ValidationError(f"member {i} translation has length {len(m.translation)}, expected {d}")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_arrays(cls, reference: ReferenceBody, translations, ratios, label: str = "") -> "Scene":
        X = np.asarray(translations, dtype=float)
        r = np.asarray(ratios, dtype=float).reshape(-1)
        if len(X) != len(r):
            raise ValidationError("translations and ratios differ in length")
        return cls(reference, tuple(Homothet(x, t) for x, t in zip(X, r)), label)

    @property
    def dimension(self) -> int:
        return self.reference.dimension

    @property
    def n(self) -> int:
        return len(self.members)

    @property
    def translations(self) -> np.ndarray:
        return np.array([m.translation for m in self.members])

    @property
    def ratios(self) -> np.ndarray:
        return np.array([m.ratio for m in self.members])

    @property
    def total_ratio(self) -> float:
        return float(self.ratios.sum())

    def realize(self) -> list:
        return [realize_homothet(self.reference.body, m.ratio, m.translation) for m in self.members]

    def member_vertices(self) -> list[np.ndarray]:
        """Vertex arrays of realized members (polygon / polytope references only)."""
        if self.reference.kind == "ball":
            raise ValidationError("ball members have no vertices")
        V = self.reference.body.vertices
        return [m.translation + m.ratio * V for m in self.members]

    def all_vertices(self) -> np.ndarray:
        return np.vstack(self.member_vertices())

    def subset(self, indices, label: str | None = None) -> "Scene":
        idx = list(indices)
        return Scene(self.reference, tuple(self.members[i] for i in idx), self.label if label is None else label)

    def without(self, drop) -> "Scene":
        drop = set(int(i) for i in np.atleast_1d(drop))
        return self.subset([i for i in range(self.n) if i not in drop], f"{self.label} minus {sorted(drop)}")

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "label": self.label,
            "reference": self.reference.to_dict(),
            "members": [{"translation": m.translation.tolist(), "ratio": m.ratio} for m in self.members],
        }

    def __eq__(self, other):
        return (
            isinstance(other, Scene)
            and self.label == other.label
            and self.reference == other.reference
            and len(self.members) == len(other.members)
            and all(a == b for a, b in zip(self.members, other.members))
        )


# ----------------------------------------------------------------------------- JSON


def scene_to_json(scene: Scene) -> str:
    return dumps(scene.to_dict()) + "\n"


def save_scene(scene: Scene, path) -> None:
    Path(path).write_text(scene_to_json(scene), encoding="utf-8")


def _check_keys(obj, allowed: set, where: str):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    extra = set(obj) - allowed
    if extra:
        raise ParseError(f"{where}: unknown field(s) {sorted(extra)}")
    missing = {k for k in allowed if k not in obj} - {"label", "vertices"}
    if missing:
        raise ParseError(f"{where}: missing field(s) {sorted(missing)}")


def _numbers(value, where: str, length: int | None = None) -> list[float]:
    if not isinstance(value, list) or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value):
        raise ParseError(f"{where}: expected a list of numbers")
    if length is not None and len(value) != length:
        raise ParseError(f"{where}: expected {length} numbers, got {len(value)}")
    return [float(v) for v in value]


def scene_from_dict(data) -> Scene:
    _check_keys(data, {"dimension", "label", "reference", "members"}, "scene")
    dim = data["dimension"]
    if dim not in (2, 3) or isinstance(dim, bool):
        raise ParseError(f"dimension: expected 2 or 3, got {dim!r}")
    label = data.get("label", "")
    if not isinstance(label, str):
        raise ParseError("label: expected a string")
    ref = data["reference"]
    if not isinstance(ref, dict) or "kind" not in ref:
        raise ParseError("reference: expected an object with a 'kind'")
    kind = ref["kind"]
    try:
        if kind == "ball":
            _check_keys(ref, {"kind"}, "reference")
            reference = ReferenceBody.ball(dim)
        elif kind in ("polygon", "polytope3"):
            _check_keys(ref, {"kind", "vertices"}, "reference")
            want = 2 if kind == "polygon" else 3
            if want != dim:
                raise ValidationError(f"reference kind {kind} is inconsistent with dimension {dim}")
            if not isinstance(ref.get("vertices"), list):
                raise ParseError("reference.vertices: expected a list")
            verts = np.array([_numbers(v, f"reference.vertices[{i}]", want) for i, v in enumerate(ref["vertices"])])
            if kind == "polygon":
                reference = ReferenceBody("polygon", ConvexPolygon(verts))
            else:
                reference = ReferenceBody.polytope3(verts, recenter=False)
        else:
            raise ParseError(f"reference.kind: unknown kind {kind!r}")
    except ParseError:
        raise
    except ValidationError:
        raise
    except ValueError as exc:
        raise ValidationError(f"reference: {exc}") from None
    members = data["members"]
    if not isinstance(members, list):
        raise ParseError("members: expected a list")
    hs = []
    for i, m in enumerate(members):
        _check_keys(m, {"translation", "ratio"}, f"members[{i}]")
        x = _numbers(m["translation"], f"members[{i}].translation", dim)
        r = m["ratio"]
        if isinstance(r, bool) or not isinstance(r, (int, float)):
            raise ParseError(f"members[{i}].ratio: expected a number")
        if not r > 0:
            raise ValidationError(f"members[{i}].ratio: ratio must be > 0, got {r}")
        hs.append(Homothet(np.array(x), float(r)))
    return Scene(reference, tuple(hs), label)


def scene_from_json(text: str) -> Scene:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return scene_from_dict(data)


def load_scene(path) -> Scene:
    return scene_from_json(Path(path).read_text(encoding="utf-8"))


# ----------------------------------------------------------------------------- generators


def _counterexample_translations() -> tuple[np.ndarray, np.ndarray]:
    """Translations of the three unit triangles and the vertices of the container T.

    T has a horizontal bottom side and its centroid at the origin.
    """
    L = COUNTEREXAMPLE_SIDE
    first = 2.0 / 3.0 + 1.0 / SQRT3  # first segment on each side, counter-clockwise
    A = np.array([0.0, 0.0])
    B = np.array([L, 0.0])
    C = np.array([L / 2, L * SQRT3 / 2])
    shift = (A + B + C) / 3
    tri = unit_triangle().vertices
    sides = [(A, B), (B, C), (C, A)]
    X = []
    for k, (P, Q) in enumerate(sides):
        e = (Q - P) / L
        # vertex k of the unit triangle starts side k of T when traversed CCW
        X.append(P + first * e - tri[k] - shift)
    return np.array(X), np.array([A, B, C]) - shift


def counterexample_container() -> ConvexPolygon:
    """The enclosing triangle T (side 2 + 2/sqrt 3) of ``gen_counterexample_triangles``."""
    return ConvexPolygon(_counterexample_translations()[1])


def gen_counterexample_triangles() -> Scene:
    """Three unit regular triangles, one on each side of T, apexes pointing inward."""
    X, _ = _counterexample_translations()
    return Scene.from_arrays(ReferenceBody.polygon(unit_triangle()), X, np.ones(3), "counterexample3")


def gen_triangle_chain(n: int) -> Scene:
    """The three-triangle counterexample plus a row of n-3 touching translates.

    The row hangs off the bottom triangle along the direction of the left side of T,
    consecutive triangles sharing a vertex; the smallest containing triangle then has
    side n - 1 + 2/sqrt 3.
    """
    if n < 3:
        raise BadCount(f"a triangle chain needs n >= 3, got {n}")
    X, _ = _counterexample_translations()
    step = np.array([-0.5, -SQRT3 / 2])
    rows = [X[0] + j * step for j in range(1, n - 2)]
    X = np.vstack([X] + rows) if rows else X
    return Scene.from_arrays(ReferenceBody.polygon(unit_triangle()), X, np.ones(n), f"chain{n}")


def gen_tetrahedra() -> Scene:
    """Counterexample lifted to R^3: each triangle becomes the bottom facet of a unit
    regular tetrahedron standing on the plane z = 0."""
    X2, _ = _counterexample_translations()
    tet = regular_tetrahedron()
    lift = -float(tet.vertices[:, 2].min())
    X = np.column_stack([X2, np.full(3, lift)])
    return Scene.from_arrays(ReferenceBody("polytope3", tet), X, np.ones(3), "tetrahedra3")


def gen_circle_ring(k: int, slack: float = 0.01, drop=()) -> Scene:
    """2k+1 unit disks on a regular (2k+1)-gon.

    The circumradius is (1 + slack) times the tangency circumradius, so consecutive
    disks are disjoint with surface gap 2*slack. ``drop`` removes members by index.
    """
    if k < 1:
        raise BadCount(f"ring needs k >= 1, got {k}")
    if not slack > 0:
        raise ValidationError("slack must be positive")
    m = 2 * k + 1
    R = (1.0 + slack) / np.sin(np.pi / m)
    th = np.pi / 2 + 2 * np.pi * np.arange(m) / m
    X = R * np.column_stack([np.cos(th), np.sin(th)])
    keep = [i for i in range(m) if i not in set(drop)]
    label = f"ring{k}" + (f" minus {sorted(set(drop))}" if drop else "")
    return Scene.from_arrays(ReferenceBody.ball(2), X[keep], np.ones(len(keep)), label)


def gen_touching_chain(ref: ReferenceBody, ratios, u=(1.0, 0.0)) -> Scene:
    """Homothets of an o-symmetric body centered on the line R*u, consecutive ones touching."""
    if not ref.is_symmetric():
        raise NotSymmetric("touching chains need an origin-symmetric reference body")
    ratios = np.asarray(ratios, dtype=float)
    if len(ratios) < 2:
        raise BadCount("a chain needs at least two members")
    u = direction(u)
    rho = ref.radial(u)
    X = [np.zeros(ref.dimension)]
    for a, b in zip(ratios[:-1], ratios[1:]):
        X.append(X[-1] + (a + b) * rho * u)
    return Scene.from_arrays(ref, np.array(X), ratios, "touching-chain")


def contact_distance(ref: ReferenceBody, tau_a: float, tau_b: float, u) -> float:
    """Distance s such that x + tau_a K and x + s*u + tau_b K touch."""
    u = np.asarray(u, dtype=float)
    if ref.kind == "ball":
        return (tau_a + tau_b) / float(np.linalg.norm(u))
    if ref.kind == "polygon":
        K = ref.body
        D = minkowski_sum(K.scale(tau_a), K.reflect().scale(tau_b))
        return _radial(D.normals, D.offsets, u)
    raise ValidationError("contact distance is implemented for planar references")


def random_convex_polygon(rng: np.random.Generator, m: int | None = None) -> ConvexPolygon:
    """Random convex polygon from noisy points on a circle, centroid at the origin."""
    m = int(rng.integers(3, 9)) if m is None else m
    while True:
        th = np.sort(rng.uniform(0, 2 * np.pi, m))
        r = rng.uniform(0.6, 1.0, m)
        try:
            P = convex_hull(np.column_stack([r * np.cos(th), r * np.sin(th)]))
        except ValueError:
            continue
        if P.area > 0.3:
            return P.translate(-P.centroid)


def _random_unit(rng) -> np.ndarray:
    t = rng.uniform(0, 2 * np.pi)
    return np.array([np.cos(t), np.sin(t)])


def gen_random_scene(ref: ReferenceBody, n: int, seed: int, spread: float = 1.2) -> Scene:
    """Random planar family without any separability guarantee.

    Each new member is placed near a random earlier one at ``factor`` times their
    contact distance with factor ~ U(0.5, spread).
    """
    if n < 2:
        raise BadCount("need n >= 2")
    rng = np.random.default_rng(seed)
    return _sequential_placement(ref, n, rng, lambda: rng.uniform(0.5, spread), f"random{n}-seed{seed}")


def _sequential_placement(ref, n, rng, factor, label) -> Scene:
    ratios = rng.uniform(0.3, 1.7, n)
    X = [np.zeros(2)]
    for i in range(1, n):
        j = int(rng.integers(i))
        u = _random_unit(rng)
        X.append(X[j] + factor() * contact_distance(ref, ratios[j], ratios[i], u) * u)
    return Scene.from_arrays(ref, np.array(X), ratios, label)


def gen_random_ns_family(ref: ReferenceBody, n: int, seed: int, max_retries: int = 1000) -> Scene:
    """Seeded random NS family (rejection sampling checked by the exact sweep).

    Members are placed one by one against a random earlier member, usually overlapping
    or touching it and sometimes leaving a small gap; a candidate family is accepted
    only once the separation sweep certifies it non-separable.
    """
    from .separation import is_nonseparable_sweep

    if n < 2:
        raise BadCount("need n >= 2")
    if ref.dimension != 2:
        raise ValidationError("random NS families are generated in the plane")
    rng = np.random.default_rng(seed)

    def factor():
        return rng.uniform(1.0, 1.12) if rng.random() < 0.3 else rng.uniform(0.55, 1.0)

    for _ in range(max_retries):
        scene = _sequential_placement(ref, n, rng, factor, f"random-ns{n}-seed{seed}")
        if is_nonseparable_sweep(scene).nonseparable:
            return scene
    raise GenerationFailed(f"no NS family found after {max_retries} attempts")


def gen_random_zero_ip_family(seed: int, mode: str | None = None) -> Scene:
    """Random planar family whose union is convex.

    Modes: ``nested`` (random polygon, members inside the largest one), ``grid``
    (equal squares with spacing at most their side), ``corners`` (triangles at the
    corners of a big triangle with ratio sum >= 2, plus nested extras).
    """
    rng = np.random.default_rng(seed)
    mode = mode or ("nested", "grid", "corners")[seed % 3]
    if mode == "nested":
        K = random_convex_polygon(rng)
        ref = ReferenceBody.polygon(K)
        n = int(rng.integers(2, 6))
        big = rng.uniform(2.0, 3.0)
        X, r = [np.zeros(2)], [big]
        for _ in range(n - 1):
            tau = rng.uniform(0.1, 0.8) * big
            # translations with x + tau K inside big K: erode and sample inside
            room = (big - tau) * 0.999
            y = rng.uniform(-1, 1, 2) * 0.3
            X.append(_shrink_into(ref.body, room, y))
            r.append(tau)
        return Scene.from_arrays(ref, np.array(X), np.array(r), f"zero-ip-nested-seed{seed}")
    if mode == "grid":
        ref = ReferenceBody.polygon(ConvexPolygon([[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]]))
        rows, cols = int(rng.integers(1, 3)), int(rng.integers(2, 4))
        sx, sy = rng.uniform(0.4, 1.0), rng.uniform(0.4, 1.0)
        X = np.array([[c * sx, r_ * sy] for r_ in range(rows) for c in range(cols)])
        if len(X) < 2:
            X = np.array([[0.0, 0.0], [sx, 0.0]])
        return Scene.from_arrays(ref, X - X.mean(axis=0), np.ones(len(X)), f"zero-ip-grid-seed{seed}")
    if mode == "corners":
        ref = ReferenceBody.polygon(unit_triangle())
        T = ref.body.vertices
        s = rng.uniform(0.67, 0.95, 3)
        deficit = 2.0 - s.sum()
        if deficit > 0:
            s = s + deficit / 3 + 1e-3
        # corner homothet at vertex v: x + s K with x + s v = v
        X = [T[k] * (1 - s[k]) for k in range(3)]
        r = list(s)
        for _ in range(int(rng.integers(0, 3))):
            tau = rng.uniform(0.05, 0.3)
            X.append(_shrink_into(ref.body, 1.0 - tau, rng.uniform(-1, 1, 2) * 0.2))
            r.append(tau)
        return Scene.from_arrays(ref, np.array(X), np.array(r), f"zero-ip-corners-seed{seed}")
    raise ValidationError(f"unknown 0-IP mode {mode!r}")


def _shrink_into(K: ConvexPolygon, room: float, y) -> np.ndarray:
    """A translation x with x + tau K inside big K, given room = big - tau > 0.

    x ranges over room * K; ``y`` is mapped into it radially.
    """
    y = np.asarray(y, dtype=float)
    nrm = np.linalg.norm(y)
    if nrm == 0:
        return np.zeros(2)
    return room * min(1.0, nrm) * _radial(K.normals, K.offsets, y / nrm) * 0.999 * (y / nrm)


def gen_nested_disks(n: int, seed: int) -> Scene:
    """Unit-ball family in R^2 where every disk lies strictly inside the largest one."""
    if n < 2:
        raise BadCount("need n >= 2")
    rng = np.random.default_rng(seed)
    big = rng.uniform(1.5, 3.0)
    X, r = [rng.uniform(-1, 1, 2)], [big]
    for _ in range(n - 1):
        tau = rng.uniform(0.05, 0.9) * big
        room = (big - tau) * rng.uniform(0.0, 0.98)
        X.append(X[0] + room * _random_unit(rng))
        r.append(tau)
    order = rng.permutation(n)
    return Scene.from_arrays(ReferenceBody.ball(2), np.array(X)[order], np.array(r)[order], f"nested-disks-seed{seed}")


def symmetrized(ref: ReferenceBody) -> ReferenceBody:
    """Reference body replaced by its central symmetrization (polygons only)."""
    if ref.kind != "polygon":
        raise ValidationError("symmetrization is implemented for polygons")
    return ReferenceBody("polygon", central_symmetrization(ref.body))


def realize_scene_polygons(scene: Scene) -> list[ConvexPolygon]:
    if scene.reference.kind != "polygon":
        raise ValidationError("scene members are not polygons")
    return scene.realize()


def reference_from_name(name: str, dimension: int = 2) -> ReferenceBody:
    """Named reference bodies used by the CLI and test suites."""
    from .geometry import regular_hexagon, unit_square

    name = name.lower()
    if name in ("disk", "ball"):
        return ReferenceBody.ball(dimension)
    if name == "square":
        return ReferenceBody.polygon(unit_square())
    if name == "hexagon":
        return ReferenceBody.polygon(regular_hexagon())
    if name == "triangle":
        return ReferenceBody.polygon(unit_triangle())
    if name == "tetrahedron":
        return ReferenceBody("polytope3", regular_tetrahedron())
    raise ValidationError(f"unknown reference body {name!r}")
