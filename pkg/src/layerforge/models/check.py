"""Validate an external solver's solution against the exact evaluator."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..graph import DiGraph
from ..metrics import Layering, LayeringError, Metrics, Variant, WeightScheme, check_feasible, evaluate, objective
from .ir import CONTINUOUS, ModelIR, model_objective_at
from .lp import read_solution

SNAP_DENOMINATOR = 10**6
SNAP_TOLERANCE = Fraction(1, 10**6)


@dataclass
class SolutionCheck:
    layering: Layering | None
    feasible: bool
    violations: list[str]
    model_objective: Fraction | None
    evaluator_objective: Fraction | None
    metrics: Metrics | None
    error: str | None = None

    @property
    def mismatch(self) -> Fraction | None:
        if self.model_objective is None or self.evaluator_objective is None:
            return None
        return self.model_objective - self.evaluator_objective

    @property
    def ok(self) -> bool:
        return self.error is None and self.feasible and not self.violations and self.mismatch == 0

    def to_dict(self) -> dict:
        def s(x):
            return None if x is None else str(x)

        return {
            "ok": self.ok,
            "feasible": self.feasible,
            "violations": self.violations,
            "layering": None if self.layering is None else list(self.layering.assignment),
            "model_objective": s(self.model_objective),
            "evaluator_objective": s(self.evaluator_objective),
            "mismatch": s(self.mismatch),
            "metrics": None if self.metrics is None else self.metrics.to_dict(),
            "error": self.error,
        }


def snap_continuous(point: dict[str, Fraction], model: ModelIR) -> dict[str, Fraction]:
    """Replace float noise on continuous variables by the nearest simple fraction.

    A value is only moved if a fraction with denominator at most 10^6 lies
    within 10^-6 of it; anything else is kept as parsed.
    """
    out = dict(point)
    for v in model.variables:
        if v.kind != CONTINUOUS:
            continue
        x = out[v.name]
        snapped = x.limit_denominator(SNAP_DENOMINATOR)
        if abs(snapped - x) <= SNAP_TOLERANCE:
            out[v.name] = snapped
    return out


def check_solution(
    model: ModelIR, idx, g: DiGraph, text: str, scheme: WeightScheme, variant: Variant
) -> SolutionCheck:
    from . import decode_assignment

    point = snap_continuous(read_solution(text, idx), model)
    violations = model.violations(point)
    model_obj = model_objective_at(point, model)
    try:
        layering = decode_assignment(point, idx)
    except LayeringError as exc:
        return SolutionCheck(None, False, violations, model_obj, None, None, str(exc))
    feasible = check_feasible(g, layering, variant)
    if not feasible:
        return SolutionCheck(layering, False, violations, model_obj, None, None, "decoded layering is infeasible")
    met = evaluate(g, layering, scheme)
    return SolutionCheck(layering, True, violations, model_obj, objective(met, scheme, variant), met)


__all__ = ["SolutionCheck", "check_solution", "snap_continuous"]
