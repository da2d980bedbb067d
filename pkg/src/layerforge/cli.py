"""``layerforge`` command line.

Exit codes: 0 success, 1 error (bad input, I/O), 2 usage, 3 infeasible,
4 no solution within the time limit, 5 solution check failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bench import (
    FAMILIES, bench_csv, corpus_files, resolve_setup, run_bench, run_direct, run_mip, run_record,
    timeout_summary,
)
from .graph import GenSpec, GraphFormatError, generate_random, parse_dot, read_graph, serialize_edge_list
from .metrics import LayeringError, Variant, check_feasible, evaluate, objective, parse_layering
from .presets import PRESETS
from .solver import DEFAULT_TIME_LIMIT, INFEASIBLE, TIMEOUT

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_NO_SOLUTION, EXIT_CHECK_FAILED = 0, 1, 2, 3, 4, 5
TIME_LIMIT_ENV = "LAYERFORGE_TIME_LIMIT"


class CliError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    return value


def _variant(text: str) -> Variant:
    try:
        return Variant.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _default_time_limit() -> float:
    raw = os.environ.get(TIME_LIMIT_ENV)
    if raw is None:
        return DEFAULT_TIME_LIMIT
    try:
        value = float(raw)
    except ValueError:
        raise CliError(f"{TIME_LIMIT_ENV}={raw!r} is not a number") from None
    if value <= 0:
        raise CliError(f"{TIME_LIMIT_ENV} must be positive")
    return value


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _add_problem_args(p: argparse.ArgumentParser, family: bool = False) -> None:
    p.add_argument("--variant", type=_variant, help="DLP, DLP_W, GLP, GLP_W, GLP_MS or GLP_MS_STAR")
    p.add_argument("--preset", choices=PRESETS, help="benchmark weights and layer bound")
    p.add_argument("--wlen", type=_fraction, help="weight of total arc length")
    p.add_argument("--wrev", type=_fraction, help="weight of reversed arcs")
    p.add_argument("--wwid", type=_fraction, help="weight of width (GLP_W, DLP_W)")
    p.add_argument("--wscl", type=_fraction, help="weight of the scale term (GLP_MS, GLP_MS_STAR)")
    p.add_argument("--rw", type=_fraction, help="target area width")
    p.add_argument("--rh", type=_fraction, help="target area height")
    p.add_argument("--ylayers", type=int, help="maximum number of layers Y")
    if family:
        p.add_argument("--family", choices=FAMILIES, default="direct")


def _setup(args, g):
    overrides = {"w_len": args.wlen, "w_rev": args.wrev, "w_wid": args.wwid, "w_scl": args.wscl,
                 "r_w": args.rw, "r_h": args.rh}
    if args.ylayers is not None and args.ylayers < 1:
        raise CliError("--ylayers must be at least 1")
    try:
        return resolve_setup(g, args.preset, args.variant, args.ylayers, overrides)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _read_graph(path: str):
    try:
        return read_graph(path)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from None
    except GraphFormatError as exc:
        raise CliError(f"{path}: {exc}") from None


def _read_layering(path: str, n: int, y_cap: int | None):
    try:
        with open(path) as fh:
            return parse_layering(fh, n, y_cap)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from None
    except (LayeringError, ValueError) as exc:
        raise CliError(f"{path}: {exc}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    if args.n < 2 or args.count < 0:
        raise CliError("need n >= 2 and count >= 0")
    out = Path(args.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create {out}: {exc.strerror or exc}") from None
    entries = []
    for i in range(args.count):
        seed = args.seed + i
        spec = GenSpec(args.n, args.density, seed)
        try:
            g = generate_random(spec)
        except ValueError as exc:
            raise CliError(str(exc)) from None
        name = f"random_n{args.n}_s{seed}.edges"
        _write(str(out / name), serialize_edge_list(g))
        entries.append({"file": name, "n_target": args.n, "density": str(spec.density_factor), "seed": seed,
                        "arcs_drawn": spec.arc_count, "n": g.n, "m": g.m})
    manifest = {"generator": "layerforge.graph.generate_random", "version": __version__, "instances": entries}
    _write(str(out / "manifest.json"), _dump(manifest))
    print(f"wrote {len(entries)} graphs to {out}")
    return EXIT_OK


def cmd_build(args) -> int:
    from .models import ModelError, build_model
    from .models.lp import lp_text

    g = _read_graph(args.graph)
    setup = _setup(args, g)
    try:
        model, _ = build_model(args.family, g, setup.Y, setup.variant, setup.weights, args.first_layer)
        text = lp_text(model)
    except (ModelError, ValueError) as exc:
        raise CliError(str(exc)) from None
    _write(args.output, text)
    summary = {
        "family": args.family,
        "variant": setup.variant.value,
        "Y": setup.Y,
        "variables": model.num_vars,
        "constraints": model.num_constraints,
        "constraint_families": dict(sorted(model.family_counts().items())),
        "fixings": len(model.fixings),
    }
    (sys.stderr if args.output in (None, "-") else sys.stdout).write(_dump(summary))
    return EXIT_OK


def cmd_solve(args) -> int:
    g = _read_graph(args.graph)
    setup = _setup(args, g)
    limit = args.time_limit if args.time_limit is not None else _default_time_limit()
    if limit <= 0:
        raise CliError("--time-limit must be positive")
    if args.family == "direct":
        result = run_direct(g, setup, limit, args.seed)
    else:
        try:
            result = run_mip(g, setup, args.family, limit, args.threads, args.first_layer)
        except (RuntimeError, ValueError) as exc:
            raise CliError(str(exc)) from None
    rec = run_record(Path(args.graph).stem, g, setup, args.family, result)
    sys.stdout.write(_dump(rec))
    if rec["status"] == INFEASIBLE:
        return EXIT_INFEASIBLE
    if rec["layering"] is None or rec["status"] == TIMEOUT:
        return EXIT_NO_SOLUTION
    return EXIT_OK


def cmd_validate(args) -> int:
    g = _read_graph(args.graph)
    setup = _setup(args, g)
    lay = _read_layering(args.layering, g.n, setup.Y)
    feasible = check_feasible(g, lay, setup.variant)
    report = {"feasible": feasible, "variant": setup.variant.value, "Y": setup.Y,
              "weights": setup.weights.to_dict(), "metrics": None, "objective": None}
    if check_feasible(g, lay, Variant.GLP):
        met = evaluate(g, lay, setup.weights)
        report["metrics"] = met.to_dict()
        if feasible:
            report["objective"] = str(objective(met, setup.weights, setup.variant))
    sys.stdout.write(_dump(report))
    return EXIT_OK if feasible else EXIT_INFEASIBLE


def cmd_check_solution(args) -> int:
    from .models import ModelError, build_model
    from .models.check import check_solution

    g = _read_graph(args.graph)
    setup = _setup(args, g)
    try:
        text = Path(args.solution).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {args.solution}: {exc.strerror or exc}") from None
    try:
        model, idx = build_model(args.model_family, g, setup.Y, setup.variant, setup.weights, args.first_layer)
        chk = check_solution(model, idx, g, text, setup.weights, setup.variant)
    except (ModelError, ValueError) as exc:
        raise CliError(str(exc)) from None
    sys.stdout.write(_dump(chk.to_dict()))
    return EXIT_OK if chk.ok else EXIT_CHECK_FAILED


def cmd_bench(args) -> int:
    limit = args.time_limit if args.time_limit is not None else _default_time_limit()
    presets = [p for p in args.presets.split(",") if p]
    families = [f for f in args.families.split(",") if f]
    for p in presets:
        if p not in PRESETS:
            raise CliError(f"unknown preset {p!r}; choose from {', '.join(PRESETS)}")
    for f in families:
        if f not in FAMILIES:
            raise CliError(f"unknown family {f!r}; choose from {', '.join(FAMILIES)}")
    try:
        files = corpus_files(args.corpus_dir)
    except OSError as exc:
        raise CliError(f"cannot list {args.corpus_dir}: {exc.strerror or exc}") from None
    if not files:
        raise CliError(f"no graph files in {args.corpus_dir}")
    for f in files:
        _read_graph(f)  # fail early on malformed inputs
    records = run_bench(files, presets, families, limit, args.variant and args.variant.value, args.seed,
                        max(1, args.threads or 1))
    _write(args.output, bench_csv(records))
    lines = ["bucket,preset,family,instances,timeouts"]
    lines += [f"{r['bucket']},{r['preset']},{r['family']},{r['instances']},{r['timeouts']}"
              for r in timeout_summary(records)]
    (sys.stderr if args.output in (None, "-") else sys.stdout).write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_render(args) -> int:
    from .render import render_svg

    labels = None
    if Path(args.graph).suffix in (".dot", ".gv"):
        try:
            g, labels = parse_dot(Path(args.graph).read_text())
        except OSError as exc:
            raise CliError(f"cannot read {args.graph}: {exc.strerror or exc}") from None
        except GraphFormatError as exc:
            raise CliError(f"{args.graph}: {exc}") from None
    else:
        g = _read_graph(args.graph)
    lay = _read_layering(args.layering, g.n, None)
    try:
        svg = render_svg(g, lay, labels)
    except LayeringError as exc:
        raise CliError(str(exc)) from None
    _write(args.output, svg)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="layerforge", description="Exact generalized graph layering.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random acyclic corpus")
    p.add_argument("n", type=int, help="requested vertex count")
    p.add_argument("count", type=int, help="number of graphs")
    p.add_argument("out_dir")
    p.add_argument("--seed", type=int, default=0, help="seed of the first graph; graph i uses seed+i")
    p.add_argument("--density", type=_fraction, default=Fraction(3, 2), help="arcs per vertex (default 3/2)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("build", help="write a QLA or CGL model as an LP file")
    p.add_argument("graph")
    _add_problem_args(p)
    p.add_argument("--family", choices=("qla", "cgl"), required=True)
    p.add_argument("--first-layer", action="store_true", help="CGL: require a vertex on layer 1")
    p.add_argument("-o", "--output", help="LP file (default stdout)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("solve", help="solve one instance and print a JSON run record")
    p.add_argument("graph")
    _add_problem_args(p, family=True)
    p.add_argument("--time-limit", type=float, help=f"seconds (default ${TIME_LIMIT_ENV} or {DEFAULT_TIME_LIMIT:g})")
    p.add_argument("--seed", type=int, help="shuffles ties in the branching order")
    p.add_argument("--threads", type=int, help="MIP solver threads (qla/cgl)")
    p.add_argument("--first-layer", action="store_true", help="CGL: require a vertex on layer 1")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="check a layering and print its metrics")
    p.add_argument("graph")
    p.add_argument("layering", help="file with 'vertex layer' lines")
    _add_problem_args(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check-solution", help="validate an external MIP solution")
    p.add_argument("model_family", choices=("qla", "cgl"))
    p.add_argument("graph")
    p.add_argument("solution", help="'name value' lines (Gurobi .sol and CBC output also accepted)")
    _add_problem_args(p)
    p.add_argument("--first-layer", action="store_true", help="CGL: the model had the layer-1 row")
    p.set_defaults(func=cmd_check_solution)

    p = sub.add_parser("bench", help="solve a corpus under presets and write CSV")
    p.add_argument("corpus_dir")
    p.add_argument("--presets", default="exp1", help="comma separated")
    p.add_argument("--families", default="direct", help="comma separated: direct, qla, cgl")
    p.add_argument("--variant", type=_variant, help="override the presets' default variant")
    p.add_argument("--time-limit", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, default=1, help="worker processes")
    p.add_argument("-o", "--output", help="CSV file (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("render", help="draw a layering as SVG")
    p.add_argument("graph")
    p.add_argument("layering")
    p.add_argument("-o", "--output", help="SVG file (default stdout)")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"layerforge {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
