"""Exact solvers: exhaustive enumeration (the oracle) and branch-and-bound.

The branch-and-bound kernel is compiled from ``_csearch.pyx`` when the
extension is available and falls back to :mod:`._pysearch` otherwise.
Set ``LAYERFORGE_KERNEL=python`` to force the fallback.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from ..graph import DiGraph, is_acyclic, longest_path_layering, min_feasible_layers
from ..metrics import (
    Layering,
    Metrics,
    Variant,
    WeightScheme,
    check_feasible,
    evaluate,
    normalize_layering,
    objective,
)
from . import _pysearch
from .problem import branching_order, prepare, shape_value

try:  # pragma: no cover - depends on the build
    from . import _csearch
except ImportError:  # pragma: no cover
    _csearch = None

HAVE_COMPILED = _csearch is not None

OPTIMAL, FEASIBLE, INFEASIBLE, TIMEOUT = "optimal", "feasible", "infeasible", "timeout"
DEFAULT_TIME_LIMIT = 1800.0
BRUTE_FORCE_CAP = 10**7


@dataclass(frozen=True)
class SolveConfig:
    variant: Variant = Variant.GLP
    weights: WeightScheme = field(default_factory=WeightScheme)
    Y: int = 3
    time_limit: float = DEFAULT_TIME_LIMIT
    branch_order: str = "connected"
    seed: int | None = None  # shuffles ties in the degree_desc and connected orders
    backend: str = "auto"  # "auto", "compiled" or "python"

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant.parse(self.variant))
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.Y < 1:
            raise ValueError("Y must be at least 1")
        if self.backend not in ("auto", "compiled", "python"):
            raise ValueError(f"unknown backend {self.backend!r}")


@dataclass
class SolveResult:
    status: str
    best: Layering | None
    objective: Fraction | None
    lower_bound: Fraction | None
    nodes_explored: int
    wall_time: float
    backend: str = ""

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "objective": None if self.objective is None else str(self.objective),
            "lower_bound": None if self.lower_bound is None else str(self.lower_bound),
            "layering": None if self.best is None else list(self.best.assignment),
            "nodes_explored": self.nodes_explored,
            "wall_time": self.wall_time,
            "backend": self.backend,
        }


# ---------------------------------------------------------------------------
# oracle


def _metrics_key_objective(length, rev, width, height, cfg: SolveConfig) -> Fraction:
    s = s_bar = None
    if width >= 1 and height >= 1:
        s = min(cfg.weights.r_w / width, cfg.weights.r_h / height)
        s_bar = 1 / s
    met = Metrics(int(length), int(rev), {}, {}, int(width), int(height), s, s_bar, cfg.Y)
    return objective(met, cfg.weights, cfg.variant)


def brute_force(g: DiGraph, cfg: SolveConfig, cap: int = BRUTE_FORCE_CAP, chunk: int = 1 << 15) -> SolveResult:
    """Enumerate all ``Y**n`` layerings in lexicographic order.

    Length, reversals, width and height are computed with numpy per chunk;
    the exact objective is then taken once per distinct metric tuple, and
    the first layering attaining the minimum is returned.
    """
    start = time.perf_counter()
    n, Y = g.n, cfg.Y
    total = Y**n
    if total > cap:
        raise ValueError(f"{Y}^{n} = {total} layerings exceed the enumeration cap {cap}")
    tails = np.array([u for u, _ in g.arcs], dtype=np.int64)
    heads = np.array([v for _, v in g.arcs], dtype=np.int64)
    powers = Y ** np.arange(n - 1, -1, -1, dtype=np.int64)
    cache: dict[tuple, Fraction] = {}
    best_val: Fraction | None = None
    best_idx = -1
    for s in range(0, total, chunk):
        ids = np.arange(s, min(total, s + chunk), dtype=np.int64)
        L = (ids[:, None] // powers[None, :]) % Y + 1
        lu, lv = L[:, tails], L[:, heads]
        if cfg.variant.directed:
            ok = np.all(lv > lu, axis=1)
        else:
            ok = np.all(lv != lu, axis=1)
        if not ok.any():
            continue
        L, lu, lv, ids = L[ok], lu[ok], lv[ok], ids[ok]
        lo, hi = np.minimum(lu, lv), np.maximum(lu, lv)
        length = (hi - lo).sum(axis=1)
        rev = (lv < lu).sum(axis=1)
        loads = np.stack([(L == k).sum(axis=1) + ((lo < k) & (k < hi)).sum(axis=1) for k in range(1, Y + 1)], axis=1)
        width = loads.max(axis=1)
        height = L.max(axis=1)
        keys = np.stack([length, rev, width, height], axis=1)
        uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
        vals = []
        for row in uniq:
            key = tuple(int(x) for x in row)
            if key not in cache:
                cache[key] = _metrics_key_objective(*key, cfg)
            vals.append(cache[key])
        chunk_min = min(vals)
        if best_val is None or chunk_min < best_val:
            first = next(i for i, inv in enumerate(inverse.ravel()) if vals[inv] == chunk_min)
            best_val, best_idx = chunk_min, int(ids[first])
    elapsed = time.perf_counter() - start
    if best_val is None:
        return SolveResult(INFEASIBLE, None, None, None, total, elapsed, "enumeration")
    digits = [(best_idx // Y ** (n - 1 - v)) % Y + 1 for v in range(n)]
    layering = Layering(tuple(digits), Y)
    value = objective(evaluate(g, layering, cfg.weights), cfg.weights, cfg.variant)
    assert value == best_val
    return SolveResult(OPTIMAL, layering, value, value, total, elapsed, "enumeration")


# ---------------------------------------------------------------------------
# branch and bound


def _k_colorable(g: DiGraph, k: int, node_cap: int = 200_000) -> bool | None:
    """Exact check whether the underlying graph is k-colourable; None if undecided within the cap."""
    adj = [sorted(s) for s in g.neighbors()]
    order = sorted(range(g.n), key=lambda v: -len(adj[v]))
    color = [0] * g.n
    budget = [node_cap]

    def go(i: int) -> bool | None:
        if i == len(order):
            return True
        v = order[i]
        used = {color[w] for w in adj[v]}
        top = max(color) + 1
        for c in range(1, min(k, top) + 1):
            if c in used:
                continue
            budget[0] -= 1
            if budget[0] < 0:
                return None
            color[v] = c
            res = go(i + 1)
            color[v] = 0
            if res is None or res:
                return res
        return False

    return go(0)


def _infeasible(g: DiGraph, cfg: SolveConfig) -> bool:
    """Cheap exact infeasibility screens run before the search."""
    if g.n == 0:
        return False
    if cfg.variant.directed:
        if not is_acyclic(g):
            return True
        return max(longest_path_layering(g)) > cfg.Y
    if min_feasible_layers(g) <= cfg.Y:
        return False
    return _k_colorable(g, cfg.Y) is False


def _pick_kernel(problem, backend: str):
    if backend == "python" or os.environ.get("LAYERFORGE_KERNEL") == "python":
        return _pysearch, "python"
    if backend == "compiled" and not HAVE_COMPILED:
        raise RuntimeError("compiled kernel requested but the extension is not built")
    if HAVE_COMPILED and problem.fits_int64:
        return _csearch, "compiled"
    if backend == "compiled":
        raise RuntimeError("objective magnitudes exceed the compiled kernel's 64-bit range")
    return _pysearch, "python"


def branch_and_bound(g: DiGraph, cfg: SolveConfig, incumbent: Layering | None = None) -> SolveResult:
    """Depth-first branch-and-bound over vertex-to-layer assignments.

    Only compact layerings (occupied layers ``1..H`` without gaps) are
    enumerated; compacting never worsens any objective and is
    lexicographically no larger, so the reported optimum is the
    lexicographically smallest one in branching order. ``incumbent`` seeds
    the cutoff.
    """
    warm_value = None
    if incumbent is not None:
        incumbent = Layering(incumbent.assignment, cfg.Y)
        warm_value = objective(evaluate(g, incumbent, cfg.weights), cfg.weights, cfg.variant)
    return _run(g, cfg, incumbent, warm_value, time.monotonic() + cfg.time_limit)


def _run(g: DiGraph, cfg: SolveConfig, incumbent: Layering | None, warm_value: Fraction | None,
         deadline: float) -> SolveResult:
    start = time.perf_counter()
    if _infeasible(g, cfg):
        status = INFEASIBLE if incumbent is None else OPTIMAL
        return SolveResult(status, incumbent, warm_value, warm_value, 0, time.perf_counter() - start, "screen")
    order = branching_order(g, cfg.branch_order, cfg.seed)
    problem = prepare(g, cfg.Y, cfg.variant, cfg.weights, order)
    kernel, name = _pick_kernel(problem, cfg.backend)

    cutoff = None
    if warm_value is not None:
        scaled = warm_value * problem.scale
        cutoff = int(scaled) if scaled.denominator == 1 else math.ceil(scaled)
    timed_out, best, value, lower, nodes = kernel.search(problem, cutoff, False, deadline)
    elapsed = time.perf_counter() - start

    if best is not None:
        layering = Layering(tuple(best), cfg.Y)
        obj = problem.unscale(value)
    else:
        layering, obj = incumbent, warm_value

    if timed_out:
        lb = problem.unscale(lower) if lower is not None else None
        if layering is None:
            return SolveResult(TIMEOUT, None, None, lb, nodes, elapsed, name)
        if lb is not None and lb > obj:
            lb = obj
        status = OPTIMAL if lb == obj else FEASIBLE
        return SolveResult(status, layering, obj, lb, nodes, elapsed, name)
    if layering is None:
        return SolveResult(INFEASIBLE, None, None, None, nodes, elapsed, name)
    return SolveResult(OPTIMAL, layering, obj, obj, nodes, elapsed, name)


def warm_start_layering(g: DiGraph, cfg: SolveConfig) -> Layering | None:
    """Normalised longest-path layering if ``g`` is acyclic and it fits into ``Y`` layers."""
    if g.n == 0 or not is_acyclic(g):
        return None
    lay = normalize_layering(Layering.of(longest_path_layering(g)))
    if lay.height > cfg.Y:
        return None
    lay = Layering(lay.assignment, cfg.Y)
    if not check_feasible(g, lay, cfg.variant):
        return None
    return lay


def _taller_bound(g: DiGraph, cfg: SolveConfig, height: int) -> Fraction | None:
    """Lower bound on the objective of any layering taller than ``height``; None if there is none."""
    best = None
    base = cfg.weights.w_len * g.m
    for h in range(height + 1, min(cfg.Y, g.n) + 1):
        val = base + shape_value(cfg.variant, cfg.weights, math.ceil(g.n / h), h)
        if best is None or val < best:
            best = val
    return best


def solve_with_restarts(g: DiGraph, cfg: SolveConfig) -> SolveResult:
    """Branch-and-bound seeded with the longest-path layering when ``g`` is acyclic.

    When the objective depends on the drawing height, the layer bound is
    widened step by step: each run searches layerings of height at most
    ``h`` seeded with the best value so far, and the loop stops as soon as
    no taller layering can beat that value.
    """
    warm = warm_start_layering(g, cfg)
    height_matters = cfg.variant.uses_scale and cfg.weights.w_scl != 0
    if not height_matters or g.n == 0 or cfg.Y <= 2:
        return branch_and_bound(g, cfg, warm)

    start = time.perf_counter()
    deadline = time.monotonic() + cfg.time_limit
    best = warm
    best_value = None
    if warm is not None:
        best_value = objective(evaluate(g, warm, cfg.weights), cfg.weights, cfg.variant)
    nodes = 0
    backend = ""
    h = min(cfg.Y, max(2, math.isqrt(g.n)))
    while True:
        sub = replace(cfg, Y=h)
        seed = best if best is not None and best.height <= h else None
        res = _run(g, sub, None if seed is None else Layering(seed.assignment, h), best_value, deadline)
        nodes += res.nodes_explored
        if res.backend != "screen":
            backend = res.backend
        if res.best is not None:
            # ties with the cutoff are accepted, so this is the lexicographically first best so far
            best, best_value = Layering(res.best.assignment, cfg.Y), res.objective
        taller = _taller_bound(g, cfg, h)
        elapsed = time.perf_counter() - start
        if res.status in (FEASIBLE, TIMEOUT):
            lbs = [x for x in (res.lower_bound, taller) if x is not None]
            lb = min(lbs) if lbs else None
            if best is None:
                return SolveResult(TIMEOUT, None, None, lb, nodes, elapsed, backend)
            lb = min(lb, best_value) if lb is not None else None
            status = OPTIMAL if lb == best_value else FEASIBLE
            return SolveResult(status, best, best_value, lb, nodes, elapsed, backend)
        if taller is None or (best_value is not None and taller > best_value):
            if best is None:
                return SolveResult(INFEASIBLE, None, None, None, nodes, elapsed, backend)
            return SolveResult(OPTIMAL, best, best_value, best_value, nodes, elapsed, backend)
        h += 1


def solve(g: DiGraph, cfg: SolveConfig) -> SolveResult:
    return solve_with_restarts(g, cfg)


__all__ = [
    "BRUTE_FORCE_CAP", "DEFAULT_TIME_LIMIT", "FEASIBLE", "HAVE_COMPILED", "INFEASIBLE", "OPTIMAL", "TIMEOUT",
    "SolveConfig", "SolveResult", "branch_and_bound", "brute_force", "solve", "solve_with_restarts",
    "warm_start_layering",
]
