"""Solve exported models with HiGHS (optional dependency ``highspy``).

The model goes through the LP writer and back through ``read_solution``, so
this exercises the same file path an external solver run would.
"""

from __future__ import annotations

import os
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction

from .ir import ModelIR
from .lp import lp_text, objective_from_lp_value

try:  # pragma: no cover - depends on the environment
    import highspy
except ImportError:  # pragma: no cover
    highspy = None

HAVE_HIGHS = highspy is not None


@dataclass
class MipRun:
    status: str  # "optimal", "feasible", "infeasible" or "timeout"
    solution_text: str | None  # ``name value`` lines, None without a primal point
    objective: Fraction | None  # in model units, float-derived
    bound: Fraction | None
    wall_time: float


def _to_fraction(x: float) -> Fraction:
    return Fraction(repr(float(x)))


def solve_with_highs(model: ModelIR, time_limit: float, threads: int | None = None) -> MipRun:
    if highspy is None:
        raise RuntimeError("highspy is not installed; install layerforge[mip]")
    start = time.perf_counter()
    fd, path = tempfile.mkstemp(suffix=".lp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(lp_text(model))
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.setOptionValue("time_limit", float(time_limit))
        if threads:
            h.setOptionValue("threads", int(threads))
        h.readModel(path)
        h.run()
    finally:
        os.unlink(path)

    ms = h.getModelStatus()
    info = h.getInfo()
    has_point = info.primal_solution_status == 2  # kSolutionStatusFeasible
    if ms == highspy.HighsModelStatus.kOptimal:
        status = "optimal"
    elif ms == highspy.HighsModelStatus.kInfeasible:
        status = "infeasible"
    else:
        status = "feasible" if has_point else "timeout"

    text = obj = bound = None
    if has_point:
        names = h.getLp().col_names_
        values = h.getSolution().col_value
        text = "".join(f"{name} {float(v)!r}\n" for name, v in zip(names, values))
        obj = objective_from_lp_value(_to_fraction(info.objective_function_value), model)
        bound = objective_from_lp_value(_to_fraction(info.mip_dual_bound), model)
    return MipRun(status, text, obj, bound, time.perf_counter() - start)


__all__ = ["HAVE_HIGHS", "MipRun", "solve_with_highs"]
