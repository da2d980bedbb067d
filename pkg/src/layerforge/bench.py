"""Run records and the benchmark driver behind ``layerforge solve`` and ``layerforge bench``.

Exact values are strings (``"p/q"``) in both JSON and CSV.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .graph import DiGraph, read_graph
from .metrics import Layering, Variant, WeightScheme, evaluate, objective
from .presets import make_preset
from .solver import INFEASIBLE, OPTIMAL, SolveConfig, solve

FAMILIES = ("direct", "qla", "cgl")
CORPUS_SUFFIXES = (".edges", ".txt", ".dot", ".gv")

CSV_FIELDS = (
    "instance", "n", "m", "preset", "family", "variant", "Y", "status", "wall_time", "nodes",
    "objective", "lower_bound", "width", "height", "reversed", "total_length",
)

# size buckets of the benchmark plots
BUCKETS = ((0, 30, "|V|<=30"), (31, 45, "31<=|V|<=45"), (46, 60, "46<=|V|<=60"), (61, None, "|V|>60"))


def bucket_of(n: int) -> str:
    for lo, hi, name in BUCKETS:
        if n >= lo and (hi is None or n <= hi):
            return name
    raise AssertionError(n)


def _s(x) -> str | None:
    return None if x is None else str(x)


@dataclass(frozen=True)
class Setup:
    """Everything needed to solve one instance: variant, weights and layer bound."""

    variant: Variant
    weights: WeightScheme
    Y: int
    preset: str | None = None


def resolve_setup(g: DiGraph, preset: str | None = None, variant=None, Y: int | None = None,
                  overrides: dict | None = None) -> Setup:
    """Preset values first, then explicit overrides. Without a preset Y defaults to ``max(|V|, 1)``."""
    if preset:
        p = make_preset(preset, g, variant)
        weights, base_y, var = p.weights, p.Y, p.variant
    else:
        weights, base_y, var = WeightScheme(), max(g.n, 1), Variant.parse(variant or Variant.GLP)
    if overrides:
        fields = weights.to_dict()
        fields.update({k: v for k, v in overrides.items() if v is not None})
        weights = WeightScheme(**{k: Fraction(v) for k, v in fields.items()})
    return Setup(var, weights, Y or base_y, preset)


def run_direct(g: DiGraph, setup: Setup, time_limit: float, seed: int | None = None) -> dict:
    cfg = SolveConfig(setup.variant, setup.weights, setup.Y, time_limit=time_limit, seed=seed)
    res = solve(g, cfg)
    return {
        "status": res.status,
        "objective": res.objective,
        "lower_bound": res.lower_bound,
        "layering": res.best,
        "nodes": res.nodes_explored,
        "wall_time": res.wall_time,
        "backend": res.backend,
    }


def run_mip(g: DiGraph, setup: Setup, family: str, time_limit: float, threads: int | None = None,
            first_layer: bool = False) -> dict:
    from .models import build_model
    from .models.check import check_solution
    from .models.highs import solve_with_highs

    model, idx = build_model(family, g, setup.Y, setup.variant, setup.weights, first_layer)
    run = solve_with_highs(model, time_limit, threads)
    out = {"status": run.status, "objective": None, "lower_bound": None, "layering": None,
           "nodes": None, "wall_time": run.wall_time, "backend": "highs"}
    if run.solution_text is None:
        return out
    chk = check_solution(model, idx, g, run.solution_text, setup.weights, setup.variant)
    out["check"] = chk.to_dict()
    if chk.layering is not None and chk.evaluator_objective is not None:
        out["layering"] = chk.layering
        out["objective"] = chk.evaluator_objective
        # HiGHS bounds are float-derived; an optimal run is reported with the exact value
        out["lower_bound"] = chk.evaluator_objective if run.status == OPTIMAL else run.bound
    return out


def run_record(instance: str, g: DiGraph, setup: Setup, family: str, result: dict) -> dict:
    """JSON-ready record; metrics are re-derived from the stored layering."""
    lay: Layering | None = result["layering"]
    metrics = None
    consistent = None
    if lay is not None:
        met = evaluate(g, lay, setup.weights)
        metrics = met.to_dict()
        metrics["objective"] = str(objective(met, setup.weights, setup.variant))
        consistent = metrics["objective"] == _s(result["objective"])
    rec = {
        "instance": instance,
        "n": g.n,
        "m": g.m,
        "preset": setup.preset,
        "family": family,
        "variant": setup.variant.value,
        "Y": setup.Y,
        "weights": {k: str(v) for k, v in setup.weights.to_dict().items()},
        "status": result["status"],
        "objective": _s(result["objective"]),
        "lower_bound": _s(result["lower_bound"]),
        "layering": None if lay is None else list(lay.assignment),
        "nodes_explored": result["nodes"],
        "wall_time": result["wall_time"],
        "backend": result["backend"],
        "metrics": metrics,
        "consistent": consistent,
    }
    if "check" in result:
        rec["check"] = result["check"]
    return rec


def _csv_row(rec: dict) -> dict:
    met = rec["metrics"] or {}
    return {
        "instance": rec["instance"], "n": rec["n"], "m": rec["m"], "preset": rec["preset"] or "",
        "family": rec["family"], "variant": rec["variant"], "Y": rec["Y"], "status": rec["status"],
        "wall_time": f"{rec['wall_time']:.3f}", "nodes": "" if rec["nodes_explored"] is None else rec["nodes_explored"],
        "objective": rec["objective"] or "", "lower_bound": rec["lower_bound"] or "",
        "width": met.get("width", ""), "height": met.get("height", ""),
        "reversed": met.get("reversed", ""), "total_length": met.get("total_length", ""),
    }


@dataclass(frozen=True)
class BenchTask:
    path: str
    preset: str
    family: str
    variant: str | None
    time_limit: float
    seed: int | None


def run_task(task: BenchTask) -> dict:
    g = read_graph(task.path)
    instance = Path(task.path).stem
    setup = resolve_setup(g, task.preset, task.variant)
    if task.family == "direct":
        result = run_direct(g, setup, task.time_limit, task.seed)
    else:
        from .models import CGL_VARIANTS, QLA_VARIANTS

        supported = QLA_VARIANTS if task.family == "qla" else CGL_VARIANTS
        if setup.variant not in supported:
            result = {"status": "unsupported", "objective": None, "lower_bound": None, "layering": None,
                      "nodes": None, "wall_time": 0.0, "backend": ""}
        else:
            result = run_mip(g, setup, task.family, task.time_limit, threads=1)
    return run_record(instance, g, setup, task.family, result)


def corpus_files(corpus_dir: str | os.PathLike) -> list[str]:
    root = Path(corpus_dir)
    return sorted(str(p) for p in root.iterdir() if p.suffix in CORPUS_SUFFIXES and p.is_file())


def run_bench(files: list[str], presets: list[str], families: list[str], time_limit: float,
              variant: str | None = None, seed: int | None = None, threads: int = 1) -> list[dict]:
    """Solve every (instance, preset, family); records come back sorted by that key."""
    tasks = [BenchTask(f, p, fam, variant, time_limit, seed) for f in files for p in presets for fam in families]
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(run_task, tasks))
    else:
        records = [run_task(t) for t in tasks]
    return sorted(records, key=lambda r: (r["instance"], r["preset"] or "", r["family"]))


def bench_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow(_csv_row(rec))
    return buf.getvalue()


def timeout_summary(records: list[dict]) -> list[dict]:
    """Per (bucket, preset, family): instance count and runs without a proven optimum."""
    acc: dict[tuple, list[int]] = {}
    for rec in records:
        key = (bucket_of(rec["n"]), rec["preset"] or "", rec["family"])
        cell = acc.setdefault(key, [0, 0])
        cell[0] += 1
        if rec["status"] not in (OPTIMAL, INFEASIBLE, "unsupported"):
            cell[1] += 1
    order = {name: i for i, (_, _, name) in enumerate(BUCKETS)}
    return [
        {"bucket": b, "preset": p, "family": f, "instances": c[0], "timeouts": c[1]}
        for (b, p, f), c in sorted(acc.items(), key=lambda kv: (order[kv[0][0]], kv[0][1], kv[0][2]))
    ]


__all__ = [
    "BUCKETS", "CSV_FIELDS", "FAMILIES", "BenchTask", "Setup", "bench_csv", "bucket_of", "corpus_files",
    "resolve_setup", "run_bench", "run_direct", "run_mip", "run_record", "run_task", "timeout_summary",
]
