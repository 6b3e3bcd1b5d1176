"""Command-line interface.

Subcommands: generate, egress, fire, gamma, check, sweep, render.
Exit codes: 0 success (and compliance pass), 1 compliance fail,
2 usage or input error, 3 no crossing found by gamma estimation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .compliance import ComplianceError, RuleConfig, compliance_report
from .egress import (
    EgressDomainError,
    MortalityParams,
    distance_field,
    expected_egress,
)
from .experiment import (
    ExperimentError,
    SweepSpec,
    run_sweep,
    sweep_csv,
    sweep_json,
)
from .layout import (
    BlockSite,
    Checkerboard,
    Comb,
    DoubleRow,
    HollowRect,
    Layout,
    LayoutError,
    Linear,
    Zigzag,
    build_variant,
    parse_site_plan,
    serialize_site_plan,
)
from .propagation import (
    FireParams,
    PropagationError,
    burn_map_text,
    central_ignition,
    estimate_critical_gamma,
    simulate_fire,
)
from .svg import render_heatmap, render_site_plan

FAMILIES = ("checkerboard", "linear", "double-row", "comb", "hollow-rect", "zigzag")


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _emit_json(payload, path: str | None):
    _write(json.dumps(payload, indent=2) + "\n", path)


def _add_family_options(parser: argparse.ArgumentParser, required: bool):
    g = parser.add_argument_group("layout family")
    g.add_argument("--family", choices=FAMILIES, required=required)
    g.add_argument("--side", type=int, help="checkerboard side length (even)")
    g.add_argument("--n", type=int, help="linear strip block count")
    g.add_argument("--per-row", type=int, help="double-row blocks per row")
    g.add_argument("--aisle-width", type=int, default=3, help="double-row central aisle cells")
    g.add_argument("--spine", type=int, help="comb spine block count")
    g.add_argument("--tooth", type=int, help="comb tooth block count")
    g.add_argument("--pitch", type=int, help="comb tooth spacing in block-widths")
    g.add_argument("--outer-w", type=int, help="hollow rectangle width in blocks")
    g.add_argument("--outer-h", type=int, help="hollow rectangle height in blocks")
    g.add_argument("--segment", type=int, help="zigzag blocks per segment")
    g.add_argument("--segments", type=int, help="zigzag segment count")
    g.add_argument("--gap", type=int, help="zigzag segment spacing in block-widths")


def _family_params(args):
    def need(*names):
        missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
        if missing:
            raise LayoutError(
                f"family {args.family!r} needs --" + " --".join(missing)
            )

    if args.family == "checkerboard":
        need("side")
        return Checkerboard(args.side)
    if args.family == "linear":
        need("n")
        return Linear(args.n)
    if args.family == "double-row":
        need("per-row")
        return DoubleRow(args.per_row, args.aisle_width)
    if args.family == "comb":
        need("spine", "tooth", "pitch")
        return Comb(args.spine, args.tooth, args.pitch)
    if args.family == "hollow-rect":
        need("outer-w", "outer-h")
        return HollowRect(args.outer_w, args.outer_h)
    if args.family == "zigzag":
        need("segment", "segments", "gap")
        return Zigzag(args.segment, args.segments, args.gap)
    raise LayoutError(f"unknown family {args.family!r}")


def _load_layout(args) -> Layout:
    """Layout from --family params or from a site-plan file ('-' = stdin)."""
    if getattr(args, "family", None):
        if args.plan is not None:
            raise LayoutError("give either a site-plan path or --family, not both")
        return build_variant(_family_params(args))
    if args.plan is None:
        raise LayoutError("need a site-plan path (or '-' for stdin) or --family")
    if args.plan == "-":
        return parse_site_plan(sys.stdin.read(), name="<stdin>")
    with open(args.plan) as fh:
        return parse_site_plan(fh.read(), name=args.plan)


def _add_input_options(parser: argparse.ArgumentParser):
    parser.add_argument(
        "plan", nargs="?", default=None,
        help="site-plan file, '-' for stdin (alternative: --family options)",
    )
    _add_family_options(parser, required=False)


def _add_fire_options(parser: argparse.ArgumentParser, with_gamma: bool):
    g = parser.add_argument_group("fire model")
    if with_gamma:
        g.add_argument("--gamma", type=float, default=0.5, help="per-step survival probability")
    g.add_argument("--r", type=int, default=3, help="Chebyshev dispersal radius (block-widths)")
    g.add_argument("--sparks", type=int, default=1, help="sparks per burning block per step")
    g.add_argument("--max-steps", type=int, default=500)
    g.add_argument("--percolation-fraction", type=float, default=0.5)


def _fire_params(args, gamma: float | None = None) -> FireParams:
    return FireParams(
        gamma=args.gamma if gamma is None else gamma,
        r=args.r,
        sparks_per_step=args.sparks,
        max_steps=args.max_steps,
        percolation_fraction=args.percolation_fraction,
    )


def _ignition(args, layout: Layout) -> BlockSite:
    if args.ignition is None:
        return central_ignition(layout)
    try:
        row, col = (int(v) for v in args.ignition.split(","))
    except ValueError:
        raise PropagationError(
            f"--ignition must be ROW,COL, got {args.ignition!r}"
        ) from None
    return BlockSite(row, col)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pyrotopo",
        description="Market-layout egress, fire-spread, and compliance analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a canonical site plan")
    _add_family_options(p, required=True)
    p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("egress", help="egress distance statistics")
    _add_input_options(p)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--svg", help="also write a distance-field SVG heatmap here")
    p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("fire", help="simulate one fire realization")
    _add_input_options(p)
    _add_fire_options(p, with_gamma=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--ignition", help="ROW,COL of the ignition block (default: central)")
    p.add_argument("--burn-map", help="also write the burn map as a text grid here")
    p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("gamma", help="estimate the critical survival probability")
    _add_input_options(p)
    _add_fire_options(p, with_gamma=False)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--ignition", help="ROW,COL of the ignition block (default: central)")
    p.add_argument("--tolerance", type=float, default=0.02)
    p.add_argument("--replicates", type=int, default=400)
    p.add_argument("--target", type=float, default=0.5)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("check", help="compliance verdict (exit 1 on fail)")
    _add_input_options(p)
    p.add_argument("--n-threshold", type=int, default=50)
    p.add_argument("--egress-bound", type=float, default=2.0)
    p.add_argument("--dispersal-radius", type=int, default=3)
    p.add_argument("--strip-path-factor", type=int, default=2)
    p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("sweep", help="metric sweep over block counts")
    p.add_argument("--family", choices=("checkerboard", "linear"), required=True)
    p.add_argument("--n-values", required=True, help="comma-separated block counts")
    p.add_argument(
        "--metrics", default="egress",
        help="comma-separated subset of egress,mortality,neighbors,gamma_c",
    )
    _add_fire_options(p, with_gamma=True)
    p.add_argument("--lambda", dest="lam", type=float, default=0.3)
    p.add_argument("--p0", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--gamma-tolerance", type=float, default=0.02)
    p.add_argument("--gamma-replicates", type=int, default=200)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output", default="-")

    p = sub.add_parser("render", help="SVG view of a plan or its distance field")
    _add_input_options(p)
    p.add_argument("--mode", choices=("plan", "egress"), default="plan")
    p.add_argument("-o", "--output", default="-")

    return parser


def _cmd_generate(args) -> int:
    layout = build_variant(_family_params(args))
    _write(serialize_site_plan(layout), args.output)
    return 0


def _cmd_egress(args) -> int:
    layout = _load_layout(args)
    field = distance_field(layout)
    stats = expected_egress(layout, field)
    if args.svg:
        _write(render_heatmap(layout, field.distance), args.svg)
    if args.format == "text":
        lines = [
            f"mean {_fmt(stats.mean)}",
            f"max {stats.max}",
            f"aisle_cells {stats.aisle_cells}",
            f"unreachable_cells {stats.unreachable_cells}",
        ]
        _write("\n".join(lines) + "\n", args.output)
    else:
        _emit_json(stats.as_dict(), args.output)
    return 0


def _cmd_fire(args) -> int:
    layout = _load_layout(args)
    params = _fire_params(args)
    outcome = simulate_fire(layout, params, _ignition(args, layout), args.seed)
    if args.burn_map:
        _write(burn_map_text(layout, outcome), args.burn_map)
    _emit_json(outcome.as_dict(), args.output)
    return 0


def _cmd_gamma(args) -> int:
    layout = _load_layout(args)
    params = _fire_params(args, gamma=0.5)
    est = estimate_critical_gamma(
        layout,
        params,
        _ignition(args, layout),
        args.tolerance,
        args.replicates,
        master_seed=args.seed,
        target_probability=args.target,
        threads=args.threads,
    )
    _emit_json(est.as_dict(), args.output)
    return 0 if est.crossed else 3


def _cmd_check(args) -> int:
    layout = _load_layout(args)
    cfg = RuleConfig(
        n_threshold=args.n_threshold,
        egress_bound=args.egress_bound,
        dispersal_radius=args.dispersal_radius,
        strip_path_factor=args.strip_path_factor,
    )
    report = compliance_report(layout, cfg)
    _emit_json(report.as_dict(), args.output)
    return 0 if report.overall_pass else 1


def _cmd_sweep(args) -> int:
    try:
        n_values = tuple(int(v) for v in args.n_values.split(","))
    except ValueError:
        raise ExperimentError(f"--n-values must be integers, got {args.n_values!r}") from None
    metrics = tuple(m.strip() for m in args.metrics.split(",") if m.strip())
    stochastic = "gamma_c" in metrics
    if stochastic and args.seed is None:
        raise ExperimentError("--seed is required when the gamma_c metric is requested")
    spec = SweepSpec(
        family=args.family,
        n_values=n_values,
        metrics=metrics,
        fire=_fire_params(args),
        mortality=MortalityParams(lam=args.lam, p0=args.p0),
        master_seed=args.seed if args.seed is not None else 0,
        gamma_tolerance=args.gamma_tolerance,
        gamma_replicates=args.gamma_replicates,
    )
    rows = run_sweep(spec)
    if args.format == "csv":
        _write(sweep_csv(rows), args.output)
    else:
        _emit_json(sweep_json(rows), args.output)
    return 0


def _cmd_render(args) -> int:
    layout = _load_layout(args)
    if args.mode == "plan":
        _write(render_site_plan(layout), args.output)
    else:
        _write(render_heatmap(layout, distance_field(layout).distance), args.output)
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "egress": _cmd_egress,
    "fire": _cmd_fire,
    "gamma": _cmd_gamma,
    "check": _cmd_check,
    "sweep": _cmd_sweep,
    "render": _cmd_render,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (
        LayoutError,
        EgressDomainError,
        PropagationError,
        ComplianceError,
        ExperimentError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
