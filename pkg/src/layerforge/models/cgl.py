"""Ordering-based layering models for GLP-W and GLP-MS*.

``y_k_v`` is one iff vertex ``v`` lies strictly above layer ``k``
(``k < L(v)``), ``r_u_v`` flags a reversed arc and ``d_u_v_k`` a dummy of
arc ``uv`` on interior layer ``k``. Arc length is recovered as one plus
the number of dummies, which puts a constant ``w_len * |A|`` into the
objective.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..graph import DiGraph
from ..metrics import Layering, LayeringError, Variant, WeightScheme, check_feasible, evaluate
from .ir import BINARY, CONTINUOUS, GE, LE, ModelError, ModelIR
from .qla import arc_suffixes

CGL_VARIANTS = (Variant.GLP_W, Variant.GLP_MS_STAR)


@dataclass(frozen=True)
class CglIndex:
    graph: DiGraph
    Y: int
    variant: Variant
    scalar: str
    var_kinds: dict[str, str]
    suffixes: tuple[str, ...]
    scheme: WeightScheme

    def y(self, k: int, v: int) -> str:
        return f"y_{k}_{v}"

    def r(self, arc: int) -> str:
        u, v = self.graph.arcs[arc]
        return f"r_{u}_{v}{self.suffixes[arc]}"

    def d(self, arc: int, k: int) -> str:
        u, v = self.graph.arcs[arc]
        return f"d_{u}_{v}_{k}{self.suffixes[arc]}"


def build_cgl(
    g: DiGraph,
    Y: int,
    variant: Variant,
    scheme: WeightScheme,
    first_layer_constraint: bool = False,
) -> tuple[ModelIR, CglIndex]:
    variant = Variant.parse(variant)
    if variant not in CGL_VARIANTS:
        raise ModelError(f"no CGL model for {variant.value}")
    if Y < 3:
        raise ModelError("CGL models need Y >= 3")
    if scheme.w_len == 0:
        warnings.warn("w_len = 0: dummy variables are only bounded below, decoded dummy counts are upper bounds",
                      stacklevel=2)

    scalar = "W" if variant is Variant.GLP_W else "Sbar"
    model = ModelIR(f"CGL_{variant.value}")
    suffix = arc_suffixes(g)
    arcs = g.arcs
    interior = range(2, Y)

    for v in range(g.n):
        for k in range(1, Y):
            model.add_var(f"y_{k}_{v}", BINARY)
    for a, (u, v) in enumerate(arcs):
        model.add_var(f"r_{u}_{v}{suffix[a]}", BINARY)
    for a, (u, v) in enumerate(arcs):
        for k in interior:
            model.add_var(f"d_{u}_{v}_{k}{suffix[a]}", BINARY)
    model.add_var(scalar, CONTINUOUS, 0, None)
    idx = CglIndex(g, Y, variant, scalar, model.var_kinds, tuple(suffix), scheme)
    y, r, d = idx.y, idx.r, idx.d

    for v in range(g.n):
        for k in interior:
            model.add_constraint(f"trans_{k}_{v}", [(y(k, v), 1), (y(k - 1, v), -1)], LE, 0, "transitivity")

    for a, (u, v) in enumerate(arcs):
        model.add_constraint(f"rev_first_tail_{a}", [(y(1, u), 1), (r(a), -1)], GE, 0, "reversal")
        model.add_constraint(f"rev_first_head_{a}", [(y(1, v), 1), (r(a), 1)], GE, 1, "reversal")
        for k in interior:
            model.add_constraint(f"rev_fwd_{a}_{k}", [(y(k - 1, u), 1), (y(k, v), -1), (r(a), -1)], LE, 0, "reversal")
            model.add_constraint(f"rev_bwd_{a}_{k}", [(y(k - 1, v), 1), (y(k, u), -1), (r(a), 1)], LE, 1, "reversal")
        model.add_constraint(f"rev_last_tail_{a}", [(y(Y - 1, u), 1), (r(a), -1)], LE, 0, "reversal")
        model.add_constraint(f"rev_last_head_{a}", [(y(Y - 1, v), 1), (r(a), 1)], LE, 1, "reversal")

    for a, (u, v) in enumerate(arcs):
        for k in interior:
            model.add_constraint(f"dummy_tail_{a}_{k}", [(y(k, u), 1), (y(k - 1, v), -1), (d(a, k), -1)], LE, 0, "dummy")
            model.add_constraint(f"dummy_head_{a}_{k}", [(y(k, v), 1), (y(k - 1, u), -1), (d(a, k), -1)], LE, 0, "dummy")

    cap = [(scalar, -1)] if scalar == "W" else [(scalar, -scheme.r_w)]
    # sum_v (1 - y_1_v) <= cap, constants moved to the right-hand side
    model.add_constraint("width_1", [(y(1, v), -1) for v in range(g.n)] + cap, LE, -g.n, "width")
    model.add_constraint(f"width_{Y}", [(y(Y - 1, v), 1) for v in range(g.n)] + cap, LE, 0, "width")
    for k in interior:
        row = [(y(k - 1, v), 1) for v in range(g.n)] + [(y(k, v), -1) for v in range(g.n)]
        row += [(d(a, k), 1) for a in range(len(arcs))]
        model.add_constraint(f"width_{k}", row + cap, LE, 0, "width")

    if scalar == "Sbar":
        for v in range(g.n):
            row = [(y(k, v), 1) for k in range(1, Y)] + [(scalar, -scheme.r_h)]
            model.add_constraint(f"height_{v}", row, LE, -1, "height")

    if first_layer_constraint:
        model.add_constraint("first_layer", [(y(1, v), -1) for v in range(g.n)], GE, 1 - g.n, "first_layer")

    obj = []
    for a in range(len(arcs)):
        obj.append((r(a), scheme.w_rev))
        obj.extend((d(a, k), scheme.w_len) for k in interior)
    obj.append((scalar, scheme.w_wid if scalar == "W" else scheme.w_scl))
    model.set_objective(obj, constant=scheme.w_len * len(arcs))
    return model, idx


def encode_cgl(l: Layering, idx: CglIndex) -> dict[str, Fraction]:
    g, Y = idx.graph, idx.Y
    if len(l) != g.n:
        raise LayeringError("layering does not cover the graph")
    lay = Layering(l.assignment, Y)
    if not check_feasible(g, lay, Variant.GLP):
        raise LayeringError("layering infeasible for the generalized problem")
    point: dict[str, Fraction] = {}
    for v in range(g.n):
        for k in range(1, Y):
            point[idx.y(k, v)] = Fraction(int(k < lay[v]))
    for a, (u, v) in enumerate(g.arcs):
        point[idx.r(a)] = Fraction(int(lay[v] < lay[u]))
    for a, (u, v) in enumerate(g.arcs):
        lo, hi = sorted((lay[u], lay[v]))
        for k in range(2, Y):
            point[idx.d(a, k)] = Fraction(int(lo < k < hi))
    met = evaluate(g, lay, idx.scheme)
    point[idx.scalar] = Fraction(met.width) if idx.scalar == "W" else met.inv_scale
    return point


def decode_cgl(point: Mapping[str, Fraction], idx: CglIndex) -> Layering:
    layers = []
    for v in range(idx.graph.n):
        col = [point.get(idx.y(k, v), 0) for k in range(1, idx.Y)]
        if any(b not in (0, 1) for b in col):
            raise LayeringError(f"ordering variables of vertex {v} are not binary")
        if any(later > earlier for earlier, later in zip(col, col[1:])):
            raise LayeringError(f"ordering variables of vertex {v} violate transitivity")
        layers.append(1 + int(sum(col)))
    return Layering(tuple(layers), idx.Y)
