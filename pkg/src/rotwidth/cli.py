"""Command-line front end.

Subcommands: ew (exact essential width of a polygon file), rotset
(rotation-set estimation for a map DSL expression), roots (no-root
certificates), verify (verification suites), flow (stopping-limit
experiment), search (random search for wide polygons with few interior
lattice points; reporting only, no claims).

Exit codes: 0 success, 1 verification failure, 2 input error.  Every run
prints a reproducibility header; with --no-meta, outputs contain no
timing or other non-reproducible fields, so identical invocations produce
byte-identical text.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import __version__
from . import geometry as geo
from .dynamics import rotation_set_estimate
from .finegraph import certify_no_roots
from .flows import (
    ExperimentConfig,
    FlowError,
    constant_field,
    parse_experiment_config,
    run_experiment,
)
from .geometry import GeometryError, PolygonFormatError, hausdorff_distance, point
from .mapdsl import DslParseError, format_caret, parse_map
from .svg import rotation_set_svg, scatter_svg, series_svg
from .verify import (
    run_compare_width_suite,
    run_flow_suite,
    run_power_scaling_suite,
    run_vnhn_suite,
    random_polygon,
)

OK, VERIFY_FAILED, INPUT_ERROR = 0, 1, 2


def _header(cmd: str, seed, params: str) -> str:
    return f"# rotwidth {__version__} | {cmd} | seed={seed} | {params}"


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise GeometryError(f"not a rational: {text!r}") from exc


def cmd_ew(args) -> int:
    C = geo.load_polygon(args.polygon)
    print(_header("ew", "-", f"file={args.polygon} oracle_radius={args.oracle_radius}"))
    detail = geo.essential_width_detail(C)
    print(f"EW = {detail.value}")
    print(f"direction = ({detail.direction[0]}, {detail.direction[1]})")
    print(f"dimension = {C.dimension}")
    if args.oracle_radius is not None:
        oracle = geo.ew_oracle(C, args.oracle_radius)
        agrees = "agrees" if oracle == detail.value else "DISAGREES"
        print(f"oracle(radius={args.oracle_radius}) = {oracle} [{agrees}]")
        if oracle != detail.value and args.oracle_radius >= detail.oracle_radius:
            return VERIFY_FAILED
    return OK


def cmd_rotset(args) -> int:
    expr = parse_map(args.expr)
    print(_header("rotset", args.seed,
                  f'expr="{args.expr}" grid={args.grid} iters={args.iters}'
                  f" sampler={args.sampler}"))
    est = rotation_set_estimate(expr, args.grid, args.iters,
                                sampler=args.sampler, seed=args.seed)
    print(f"inner hull vertices = {len(est.inner_hull.vertices)}")
    print(f"outer hull vertices = {len(est.outer_hull.vertices)}")
    print(f"converged fraction = {est.converged_fraction:.4f}")
    print(f"per-step displacement bound = {est.step_bound:.6g}")
    print("outer hull is a heuristic proxy, not a certified enclosure")
    if args.out_prefix:
        geo.save_polygon(f"{args.out_prefix}_inner.txt", est.inner_hull)
        geo.save_polygon(f"{args.out_prefix}_outer.txt", est.outer_hull)
        print(f"wrote {args.out_prefix}_inner.txt, {args.out_prefix}_outer.txt")
    if args.expect_box is not None:
        box = geo.ConvexPolygonQ([point(0, 0), point(args.expect_box, 0),
                                  point(args.expect_box, args.expect_box),
                                  point(0, args.expect_box)])
        dist = hausdorff_distance(est.inner_hull, box)
        print(f"Hausdorff distance to [0,{args.expect_box}]^2 = {dist:.6g}")
    if args.svg:
        meta = None if args.no_meta else (
            f'rotwidth {__version__} rotset expr="{args.expr}"'
            f" grid={args.grid} iters={args.iters} seed={args.seed}"
        )
        text = rotation_set_svg(est.inner_hull, est.outer_hull,
                                reference_box=args.expect_box, meta=meta)
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.svg}")
    return OK


def cmd_roots(args) -> int:
    ew = _parse_rational(args.ew)
    upper = _parse_rational(args.length_upper)
    print(_header("roots", "-", f"ew={ew} length_upper={upper}"))
    cert = certify_no_roots(ew, upper)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(cert.transcript)
        print(f"wrote {args.out}")
    print(cert.transcript, end="")
    return OK


def cmd_verify(args) -> int:
    print(_header("verify", args.seed, f"suite={args.suite}"))
    if args.suite == "compare-width":
        result = run_compare_width_suite(args.count, args.seed)
    elif args.suite == "vnhn":
        result = run_vnhn_suite(args.n)
        if args.svg:
            # sampled (essential width, length upper bound) pairs for the
            # shear family: width of [0,n]^2 against the chain bound 2.
            # A reproduction aid; no boundary of the attainable region is
            # claimed.
            pairs = []
            for n in range(1, args.n + 1):
                box = geo.ConvexPolygonQ([point(0, 0), point(n, 0),
                                          point(n, n), point(0, n)])
                pairs.append((float(geo.essential_width(box)), 2.0))
            meta = None if args.no_meta else f"rotwidth {__version__} vnhn scatter"
            with open(args.svg, "w", encoding="utf-8") as fh:
                fh.write(scatter_svg(pairs, meta=meta))
            print(f"wrote {args.svg}")
    elif args.suite == "power-scaling":
        result = run_power_scaling_suite(args.k, args.grid, args.iters,
                                         seed=args.seed)
    elif args.suite == "flow":
        floors = [float(f) for f in args.floors.split(",")]
        result = run_flow_suite(floors, field_value=args.field_value)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(result.series.to_csv(include_runtime=not args.no_meta))
            print(f"wrote {args.out}")
    else:  # pragma: no cover - argparse restricts choices
        raise GeometryError(f"unknown suite {args.suite!r}")
    for line in result.format_lines():
        print(line)
    return OK if result.passed else VERIFY_FAILED


def cmd_flow(args) -> int:
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = parse_experiment_config(fh.read())
    else:
        if not args.floors:
            raise FlowError("need --config or --floors")
        kind, _, value = args.field.partition(":")
        if kind != "const":
            raise FlowError(f"unknown field spec {args.field!r}")
        a, b = (float(v) for v in args.window.split(","))
        cfg = ExperimentConfig(
            field=constant_field(float(value)),
            floors=[float(f) for f in args.floors.split(",")],
            window=(a, b), margin=args.margin, step=args.step,
            horizon=args.horizon,
        )
    print(_header("flow", "-",
                  f"field={cfg.field.name} floors={','.join(str(f) for f in cfg.floors)}"
                  f" window={cfg.window[0]},{cfg.window[1]} margin={cfg.margin}"))
    series = run_experiment(cfg)
    csv_text = series.to_csv(include_runtime=not args.no_meta)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
        print(f"wrote {args.out}")
    else:
        print(csv_text, end="")
    if args.svg:
        meta = None if args.no_meta else f"rotwidth {__version__} flow"
        text = series_svg([r.floor for r in series.rows], series.distances(),
                          meta=meta)
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.svg}")
    decreasing = series.is_weakly_decreasing()
    print(f"weakly decreasing: {'yes' if decreasing else 'NO'}")
    return OK if decreasing else VERIFY_FAILED


def cmd_search(args) -> int:
    """Random search for wide polygons whose interior misses three
    non-aligned lattice points.  Reports the best sample found; this is a
    search aid only and asserts nothing about maximality."""
    print(_header("search", args.seed, f"count={args.count}"))
    rng = random.Random(args.seed)
    best = None
    best_ew = Fraction(0)
    for _ in range(args.count):
        C = random_polygon(rng, coord_range=4, max_denominator=6)
        if C.dimension < 2 or geo.has_three_nonaligned_interior(C):
            continue
        ew = geo.essential_width(C)
        if ew > best_ew:
            best, best_ew = C, ew
    if best is None:
        print("no admissible polygon sampled")
    else:
        print(f"best essential width found = {best_ew} (no maximality claim)")
        for v in best.vertices:
            print(f"  {v.x} {v.y}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="rotwidth",
        description="exact lattice widths, rotation-set estimation, "
                    "translation-length bounds, and slowdown-flow experiments",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ew", help="exact essential width of a polygon file")
    p.add_argument("polygon", help="polygon text file (one 'x y' vertex per line)")
    p.add_argument("--oracle-radius", type=int, default=None,
                   help="cross-check with the brute-force direction oracle")
    p.set_defaults(fn=cmd_ew)

    p = sub.add_parser("rotset", help="estimate the rotation set of a map DSL expression")
    p.add_argument("expr", help="map DSL, e.g. 'V^2 H^2' or 'T(1/3,1/4)'")
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--sampler", choices=("uniform", "halton"), default="uniform")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--expect-box", type=int, default=None,
                   help="report Hausdorff distance to [0,n]^2")
    p.add_argument("--out-prefix", default=None,
                   help="write inner/outer hull polygon files")
    p.add_argument("--svg", default=None, help="write an overlay SVG")
    p.add_argument("--no-meta", action="store_true",
                   help="omit non-reproducible metadata from outputs")
    p.set_defaults(fn=cmd_rotset)

    p = sub.add_parser("roots", help="no-root certificate from width and length bounds")
    p.add_argument("--ew", required=True, help="essential width (rational)")
    p.add_argument("--length-upper", required=True,
                   help="upper bound on the translation length (rational)")
    p.add_argument("--out", default=None, help="also write the transcript to a file")
    p.set_defaults(fn=cmd_roots)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True,
                   choices=("compare-width", "vnhn", "power-scaling", "flow"))
    p.add_argument("--count", type=int, default=10**4)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--grid", type=int, default=48)
    p.add_argument("--iters", type=int, default=300)
    p.add_argument("--floors", default="0.5,0.25,0.1,0.05")
    p.add_argument("--field-value", type=float, default=0.1)
    p.add_argument("--out", default=None, help="write the flow CSV here")
    p.add_argument("--svg", default=None,
                   help="vnhn: write the sampled width/length-bound scatter")
    p.add_argument("--no-meta", action="store_true")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("flow", help="stopping-limit experiment (CSV/SVG)")
    p.add_argument("--config", default=None, help="key=value experiment file")
    p.add_argument("--floors", default=None, help="comma-separated slowdown floors")
    p.add_argument("--field", default="const:0.1")
    p.add_argument("--window", default="0,1")
    p.add_argument("--margin", type=float, default=0.5)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--horizon", type=float, default=1.0)
    p.add_argument("--out", default=None, help="CSV output path (default stdout)")
    p.add_argument("--svg", default=None)
    p.add_argument("--no-meta", action="store_true")
    p.set_defaults(fn=cmd_flow)

    p = sub.add_parser("search", help="random search for wide few-point polygons")
    p.add_argument("--count", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_search)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except DslParseError as exc:
        src = getattr(args, "expr", "")
        print("map DSL parse error:", file=sys.stderr)
        print(format_caret(src, exc), file=sys.stderr)
        return INPUT_ERROR
    except PolygonFormatError as exc:
        print(f"polygon parse error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (GeometryError, FlowError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
