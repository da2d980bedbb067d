"""Quadratic layer assignment models (assignment variables plus product variables).

Variables ``x_v_k`` say vertex ``v`` sits on layer ``k``; for every arc
``uv`` and every pair of distinct layers ``k != l`` the product variable
``p_u_k_v_l`` stands for ``x_u_k * x_v_l``. Diagonal products are never
declared because adjacent vertices may not share a layer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..graph import DiGraph
from ..metrics import Layering, LayeringError, Variant, WeightScheme, check_feasible, evaluate
from .ir import BINARY, CONTINUOUS, EQ, LE, ModelError, ModelIR

QLA_VARIANTS = (Variant.DLP, Variant.DLP_W, Variant.GLP, Variant.GLP_W, Variant.GLP_MS_STAR)


def arc_suffixes(g: DiGraph) -> list[str]:
    """Disambiguating suffix per arc: ``""`` for the first copy, ``_c1``, ``_c2`` ... for parallels."""
    seen: dict[tuple[int, int], int] = {}
    out = []
    for arc in g.arcs:
        c = seen.get(arc, 0)
        seen[arc] = c + 1
        out.append(f"_c{c}" if c else "")
    return out


@dataclass(frozen=True)
class QlaIndex:
    graph: DiGraph
    Y: int
    variant: Variant
    scalar: str | None  # "W", "Sbar" or None
    var_kinds: dict[str, str]
    suffixes: tuple[str, ...]
    scheme: WeightScheme

    def x(self, v: int, k: int) -> str:
        return f"x_{v}_{k}"

    def p(self, arc: int, k: int, l: int) -> str:
        u, v = self.graph.arcs[arc]
        return f"p_{u}_{k}_{v}_{l}{self.suffixes[arc]}"


def _dummy_terms(idx: QlaIndex, k: int) -> list[tuple[str, int]]:
    """Products that place a dummy of some arc on interior layer ``k``."""
    terms = []
    for a in range(len(idx.graph.arcs)):
        for lo in range(1, k):
            for hi in range(k + 1, idx.Y + 1):
                terms.append((idx.p(a, lo, hi), 1))
                terms.append((idx.p(a, hi, lo), 1))
    return terms


def build_qla(g: DiGraph, Y: int, variant: Variant, scheme: WeightScheme) -> tuple[ModelIR, QlaIndex]:
    variant = Variant.parse(variant)
    if variant not in QLA_VARIANTS:
        raise ModelError(f"no QLA model for {variant.value}")
    if Y < 1 or (Y < 2 and g.arcs):
        raise ModelError("QLA needs Y >= 2 when arcs are present")

    scalar = "W" if variant.uses_width else "Sbar" if variant is Variant.GLP_MS_STAR else None
    model = ModelIR(f"QLA_{variant.value}")
    layers = range(1, Y + 1)

    for v in range(g.n):
        for k in layers:
            model.add_var(f"x_{v}_{k}", BINARY)
    suffix = arc_suffixes(g)
    for a, (u, v) in enumerate(g.arcs):
        for k in layers:
            for l in layers:
                if k != l:
                    model.add_var(f"p_{u}_{k}_{v}_{l}{suffix[a]}", CONTINUOUS, 0, 1)
    if scalar:
        model.add_var(scalar, CONTINUOUS, 0, None)
    idx = QlaIndex(g, Y, variant, scalar, model.var_kinds, tuple(suffix), scheme)

    for v in range(g.n):
        model.add_constraint(f"assign_{v}", [(idx.x(v, k), 1) for k in layers], EQ, 1, "assign")
    for a, (u, v) in enumerate(g.arcs):
        for k in layers:
            row = [(idx.p(a, k, l), 1) for l in layers if l != k]
            model.add_constraint(f"lin_tail_{a}_{k}", row + [(idx.x(u, k), -1)], EQ, 0, "lin_tail")
        for l in layers:
            row = [(idx.p(a, k, l), 1) for k in layers if k != l]
            model.add_constraint(f"lin_head_{a}_{l}", row + [(idx.x(v, l), -1)], EQ, 0, "lin_head")

    if scalar:
        cap = [(scalar, -1)] if scalar == "W" else [(scalar, -scheme.r_w)]
        for k in sorted({1, Y}):
            occupants = [(idx.x(v, k), 1) for v in range(g.n)]
            model.add_constraint(f"width_{k}", occupants + cap, LE, 0, "width")
        for k in range(2, Y):
            occupants = [(idx.x(v, k), 1) for v in range(g.n)]
            model.add_constraint(f"width_{k}", _dummy_terms(idx, k) + occupants + cap, LE, 0, "width")
    if scalar == "Sbar":
        for v in range(g.n):
            row = [(idx.x(v, k), k) for k in layers] + [(scalar, -scheme.r_h)]
            model.add_constraint(f"height_{v}", row, LE, 0, "height")

    if variant.directed:
        for a in range(len(g.arcs)):
            for k in layers:
                for l in range(1, k):
                    model.fix(idx.p(a, k, l), 0)

    obj = []
    for a in range(len(g.arcs)):
        for k in range(2, Y + 1):
            for l in range(1, k):
                obj.append((idx.p(a, l, k), scheme.w_len * (k - l)))
                obj.append((idx.p(a, k, l), scheme.w_len * (k - l)))
                if not variant.directed:
                    obj.append((idx.p(a, k, l), scheme.w_rev))
    if scalar == "W":
        obj.append(("W", scheme.w_wid))
    elif scalar == "Sbar":
        obj.append(("Sbar", scheme.w_scl))
    model.set_objective(obj)
    return model, idx


def encode_qla(l: Layering, idx: QlaIndex) -> dict[str, Fraction]:
    g, Y = idx.graph, idx.Y
    if len(l) != g.n:
        raise LayeringError("layering does not cover the graph")
    lay = Layering(l.assignment, Y)
    if not check_feasible(g, lay, idx.variant):
        raise LayeringError(f"layering infeasible for {idx.variant.value}")
    point: dict[str, Fraction] = {}
    for v in range(g.n):
        for k in range(1, Y + 1):
            point[idx.x(v, k)] = Fraction(int(lay[v] == k))
    for a, (u, v) in enumerate(g.arcs):
        for k in range(1, Y + 1):
            for m in range(1, Y + 1):
                if k != m:
                    point[idx.p(a, k, m)] = Fraction(int(lay[u] == k and lay[v] == m))
    if idx.scalar:
        met = evaluate(g, lay, idx.scheme)
        point[idx.scalar] = Fraction(met.width) if idx.scalar == "W" else met.inv_scale
    return point


def decode_qla(point: Mapping[str, Fraction], idx: QlaIndex) -> Layering:
    layers = []
    for v in range(idx.graph.n):
        vals = [point.get(idx.x(v, k), 0) for k in range(1, idx.Y + 1)]
        if any(x not in (0, 1) for x in vals) or sum(vals) != 1:
            raise LayeringError(f"vertex {v} violates the unique-layer equation")
        layers.append(vals.index(1) + 1)
    return Layering(tuple(layers), idx.Y)
