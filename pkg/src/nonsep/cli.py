"""Command-line entry point: ``nonsep <gen|check|lambda|verify|extremal|search|render>``.

Exit codes: 0 when the verdict or check holds, 1 when it is falsified, 2 on usage or
input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import jsonio
from .covering import smallest_cover
from .errors import NonsepError, ValidationError
from .family import (
    gen_circle_ring,
    gen_counterexample_triangles,
    gen_random_ns_family,
    gen_random_scene,
    gen_tetrahedra,
    gen_touching_chain,
    gen_triangle_chain,
    load_scene,
    reference_from_name,
    scene_to_json,
)
from .separation import (
    is_0_impassable,
    is_1_impassable_3d_sampled,
    is_nonseparable_oracle,
    is_nonseparable_sampled,
    is_nonseparable_sweep,
)

EXIT_OK, EXIT_FALSIFIED, EXIT_ERROR = 0, 1, 2
GEN_KINDS = ("counterexample3", "chain", "ring", "touching-chain", "random", "tetrahedra")


class _UsageError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(jsonio.dumps(obj) + "\n")


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise _UsageError(f"expected comma-separated numbers, got {text!r}") from None


# ----------------------------------------------------------------------------- gen


def _split_kind(kind: str) -> tuple[str, int | None]:
    """``chain:4`` and ``ring:2`` carry their size inline."""
    if ":" in kind:
        name, _, num = kind.partition(":")
        try:
            return name, int(num)
        except ValueError:
            raise _UsageError(f"bad size in {kind!r}") from None
    return kind, None


def cmd_gen(args) -> int:
    kind, inline = _split_kind(args.kind)
    if kind not in GEN_KINDS:
        raise _UsageError(f"unknown kind {args.kind!r}; choose from {', '.join(GEN_KINDS)}")
    if kind == "counterexample3":
        scene = gen_counterexample_triangles()
    elif kind == "chain":
        scene = gen_triangle_chain(inline or args.n or 4)
    elif kind == "ring":
        drop = [int(v) for v in _floats(args.drop)] if args.drop else ()
        scene = gen_circle_ring(inline or args.k or 2, args.slack, drop)
    elif kind == "touching-chain":
        ref = reference_from_name(args.reference or "square")
        ratios = _floats(args.ratios) if args.ratios else [1.0, 1.0, 1.0]
        scene = gen_touching_chain(ref, ratios, _floats(args.direction))
    elif kind == "random":
        ref = reference_from_name(args.reference or "triangle")
        n = inline or args.n or 3
        scene = gen_random_ns_family(ref, n, args.seed) if args.ns else gen_random_scene(ref, n, args.seed)
    else:
        scene = gen_tetrahedra()
    _write_text(args.output, scene_to_json(scene))
    return EXIT_OK


# ----------------------------------------------------------------------------- check


def cmd_check(args) -> int:
    scene = load_scene(args.scene)
    mode = args.mode
    out: dict = {"mode": mode, "scene": scene.label}
    if mode in ("ns", "oracle"):
        if mode == "oracle":
            cert = is_nonseparable_oracle(scene)
        elif scene.dimension == 2:
            cert = is_nonseparable_sweep(scene)
        else:
            cert = is_nonseparable_sampled(scene)
        out["verdict"] = cert.nonseparable
        out["certificate"] = cert.to_dict()
        if cert.separable:
            out["certificate"]["replays"] = cert.replay(scene)
    elif mode == "0ip":
        out["verdict"] = bool(is_0_impassable(scene))
    else:
        res = is_1_impassable_3d_sampled(scene)
        out["verdict"] = res.holds
        out["directions"] = res.n_dirs
        if res.witness is not None:
            out["witness"] = {"point": res.witness.point.tolist(), "direction": res.witness.direction.tolist()}
    _emit(out)
    return EXIT_OK if out["verdict"] else EXIT_FALSIFIED


# ----------------------------------------------------------------------------- lambda


def cmd_lambda(args) -> int:
    _emit(smallest_cover(load_scene(args.scene)).to_dict())
    return EXIT_OK


# ----------------------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    from .lab.suites import verify

    reports = verify(args.suite, args.seed, args.count, args.inject_corrupt)
    if args.json:
        _emit({"passed": all(r.passed for r in reports), "suites": [r.to_dict() for r in reports]})
    else:
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            print(f"{r.suite:<7} {status}  {len(r.outcomes) - len(r.failures)}/{len(r.outcomes)} cases")
            for f in r.failures[:5]:
                print(f"    case {f.index} {f.label}: {f.detail}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FALSIFIED


# ----------------------------------------------------------------------------- extremal


def expected_extremal_roots() -> dict[str, float]:
    s3 = np.sqrt(3.0)
    return {"extremal": 3 * (3 - s3) / 4, "out_of_range": 3 * (3 + s3) / 4, "degenerate": 1.0}


def extremal_coverage(solutions, tol: float = 1e-8) -> dict[str, bool]:
    """Which of the known root classes (by t_sum) a multistart run found."""
    return {name: any(abs(s.t_sum - ts) < tol for s in solutions) for name, ts in expected_extremal_roots().items()}


def cmd_extremal(args) -> int:
    from .lab.extremal import best_valid, solve_extremal_system, summarize

    sols = solve_extremal_system(args.starts, args.seed)
    cov = extremal_coverage(sols)
    best = best_valid(sols)
    complete = all(cov.values())
    if args.json:
        _emit(
            {
                "starts": args.starts,
                "seed": args.seed,
                "complete": complete,
                "found": cov,
                "best_mu_prime": None if best is None else best.mu_prime,
                "solutions": [s.to_dict() for s in sols],
            }
        )
    else:
        print(f"{'t_sum':>14} {'mu_prime':>14} {'roots':>6} {'valid':>6} {'isolated':>8}")
        for row in summarize(sols):
            mu = "-" if row["mu_prime"] is None else f"{row['mu_prime']:.9f}"
            print(f"{row['t_sum']:>14.9f} {mu:>14} {row['count']:>6} {row['valid']:>6} {row['isolated']:>8}")
        if best is not None:
            print(f"best valid mu' = {best.mu_prime:.17g}")
        if not complete:
            missing = ", ".join(k for k, v in cov.items() if not v)
            print(f"INCOMPLETE: no root found for {missing}; increase --starts")
    return EXIT_OK if complete else EXIT_FALSIFIED


# ----------------------------------------------------------------------------- search


def cmd_search(args) -> int:
    from .lab.search import search_sup_lambda

    res = search_sup_lambda(reference_from_name(args.reference), args.n, args.iterations, args.seed)
    if args.output:
        Path(args.output).write_text(scene_to_json(res.scene), encoding="utf-8")
    out = res.to_dict()
    out["known_bracket"] = [2 / 3 + 2 / (3 * np.sqrt(3.0)), 2.0]
    _emit(out)
    return EXIT_OK


# ----------------------------------------------------------------------------- render


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from None


def cmd_render(args) -> int:
    from .render import RenderSpec, cover_from_dict, render_svg

    scene = load_scene(args.scene)
    cover = cover_from_dict(_load_json(args.cover)) if args.cover else None
    cert = None
    if args.certificate:
        cert = _load_json(args.certificate)
        cert = cert.get("certificate", cert)  # accept raw `check` output too
    spec = RenderSpec(width_px=args.width, height_px=args.height, annotate=args.annotate)
    _write_text(args.output, render_svg(scene, cover, cert, spec))
    return EXIT_OK


# ----------------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nonsep", description="Non-separable families of homothets: tools and checks.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a scene file")
    g.add_argument("kind", help="counterexample3 | chain[:n] | ring[:k] | touching-chain | random[:n] | tetrahedra")
    g.add_argument("--n", type=int, help="member count (chain, random)")
    g.add_argument("--k", type=int, help="ring parameter; the ring has 2k+1 disks")
    g.add_argument("--slack", type=float, default=0.01, help="ring slack (default 0.01)")
    g.add_argument("--drop", help="comma-separated ring indices to remove")
    g.add_argument("--reference", help="disk | square | hexagon | triangle")
    g.add_argument("--ratios", help="comma-separated ratios (touching-chain)")
    g.add_argument("--direction", default="1,0", help="chain direction (touching-chain)")
    g.add_argument("--ns", action="store_true", help="random: reject until non-separable")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", help="output path (stdout if omitted)")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", help="separability and impassability checks")
    c.add_argument("scene")
    c.add_argument("--mode", choices=("ns", "oracle", "0ip", "1ip3d"), default="ns")
    c.set_defaults(func=cmd_check)

    lam = sub.add_parser("lambda", help="smallest covering homothet and lambda")
    lam.add_argument("scene")
    lam.set_defaults(func=cmd_lambda)

    v = sub.add_parser("verify", help="randomized verification suites")
    v.add_argument("--suite", choices=("lemma3", "lemma1", "thm4", "thm5", "thm6", "thm7", "all"), default="all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int, help="cases per suite (suite default if omitted)")
    v.add_argument("--inject-corrupt", action="store_true", help="append a case violating the hypotheses")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("extremal", help="multistart Newton on the extremal triangle system")
    e.add_argument("--starts", type=int, default=1000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_extremal)

    s = sub.add_parser("search", help="stochastic search for NS families with large lambda")
    s.add_argument("--reference", default="triangle")
    s.add_argument("--n", type=int, default=3)
    s.add_argument("--iterations", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--output", help="write the best scene here")
    s.set_defaults(func=cmd_search)

    r = sub.add_parser("render", help="SVG drawing of a planar scene")
    r.add_argument("scene")
    r.add_argument("--cover", help="cover JSON, as printed by `lambda`")
    r.add_argument("--certificate", help="certificate JSON, as printed by `check`")
    r.add_argument("--annotate", action="store_true", help="label lambda, ratios and cover sides")
    r.add_argument("--width", type=int, default=640)
    r.add_argument("--height", type=int, default=640)
    r.add_argument("-o", "--output", help="output path (stdout if omitted)")
    r.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"nonsep {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (NonsepError, OSError) as exc:
        print(f"nonsep {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
