"""Exact evaluation of layerings: feasibility, aesthetics and objective values.

Everything here uses :class:`fractions.Fraction`; the evaluator is the
reference every model encoding and every solver result is checked against.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, TextIO

from .graph import DiGraph


class LayeringError(ValueError):
    """Raised when a layering is incomplete or infeasible for the requested use."""


class Variant(str, enum.Enum):
    DLP = "DLP"
    DLP_W = "DLP_W"
    GLP = "GLP"
    GLP_W = "GLP_W"
    GLP_MS = "GLP_MS"
    GLP_MS_STAR = "GLP_MS_STAR"

    @property
    def directed(self) -> bool:
        return self in (Variant.DLP, Variant.DLP_W)

    @property
    def uses_width(self) -> bool:
        return self in (Variant.DLP_W, Variant.GLP_W)

    @property
    def uses_scale(self) -> bool:
        return self in (Variant.GLP_MS, Variant.GLP_MS_STAR)

    @classmethod
    def parse(cls, name: str | "Variant") -> "Variant":
        if isinstance(name, Variant):
            return name
        key = name.strip().upper().replace("-", "_").replace("*", "_STAR")
        if key == "GLP_MSSTAR":
            key = "GLP_MS_STAR"
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown variant {name!r}") from None


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class WeightScheme:
    """Objective weights plus the target drawing area ``r_w x r_h``."""

    w_len: Fraction = Fraction(1)
    w_rev: Fraction = Fraction(1)
    w_wid: Fraction = Fraction(0)
    w_scl: Fraction = Fraction(0)
    r_w: Fraction = Fraction(1)
    r_h: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("w_len", "w_rev", "w_wid", "w_scl", "r_w", "r_h"):
            object.__setattr__(self, name, _frac(getattr(self, name)))
        if min(self.w_len, self.w_rev, self.w_wid, self.w_scl) < 0:
            raise ValueError("weights must be non-negative")
        if self.r_w <= 0 or self.r_h <= 0:
            raise ValueError("target area sides must be positive")

    def to_dict(self) -> dict[str, str]:
        return {k: str(getattr(self, k)) for k in ("w_len", "w_rev", "w_wid", "w_scl", "r_w", "r_h")}


@dataclass(frozen=True)
class Layering:
    """Layer index per vertex (``assignment[v]``), all within ``1..y_cap``."""

    assignment: tuple[int, ...]
    y_cap: int

    def __post_init__(self):
        a = tuple(int(k) for k in self.assignment)
        object.__setattr__(self, "assignment", a)
        if self.y_cap < 0 or (a and self.y_cap < 1):
            raise LayeringError("layer cap must be positive")
        for v, k in enumerate(a):
            if not 1 <= k <= self.y_cap:
                raise LayeringError(f"vertex {v} on layer {k} outside 1..{self.y_cap}")

    @classmethod
    def of(cls, layers: Sequence[int], y_cap: int | None = None) -> "Layering":
        layers = tuple(layers)
        return cls(layers, max(layers, default=0) if y_cap is None else y_cap)

    def __getitem__(self, v: int) -> int:
        return self.assignment[v]

    def __len__(self) -> int:
        return len(self.assignment)

    @property
    def height(self) -> int:
        return max(self.assignment, default=0)


@dataclass(frozen=True)
class Metrics:
    total_length: int
    reversed: int
    dummies: dict[int, int]
    layer_sizes: dict[int, int]
    width: int
    height: int
    scale: Fraction | None
    inv_scale: Fraction | None
    y_cap: int = field(default=0)

    def to_dict(self) -> dict:
        """JSON-ready view; fractions are ``"p/q"`` strings."""
        return {
            "total_length": self.total_length,
            "reversed": self.reversed,
            "dummies": {str(k): c for k, c in sorted(self.dummies.items())},
            "layer_sizes": {str(k): c for k, c in sorted(self.layer_sizes.items())},
            "width": self.width,
            "height": self.height,
            "scale": None if self.scale is None else str(self.scale),
            "inv_scale": None if self.inv_scale is None else str(self.inv_scale),
            "y_cap": self.y_cap,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _check_cover(g: DiGraph, l: Layering) -> None:
    if len(l) != g.n:
        raise LayeringError(f"layering covers {len(l)} vertices, graph has {g.n}")


def check_feasible(g: DiGraph, l: Layering, variant: Variant = Variant.GLP) -> bool:
    _check_cover(g, l)
    variant = Variant.parse(variant)
    a = l.assignment
    if variant.directed:
        return all(a[v] - a[u] >= 1 for u, v in g.arcs)
    return all(a[u] != a[v] for u, v in g.arcs)


def scale_factors(width: int, height: int, r_w: Fraction, r_h: Fraction) -> tuple[Fraction, Fraction]:
    """Return ``(S, S_bar)`` with ``S = min(r_w/W, r_h/H)`` and ``S_bar = 1/S``."""
    if width < 1 or height < 1:
        raise ValueError("scale factors need W >= 1 and H >= 1")
    r_w, r_h = _frac(r_w), _frac(r_h)
    s = min(r_w / width, r_h / height)
    s_bar = max(Fraction(width) / r_w, Fraction(height) / r_h)
    return s, s_bar


def evaluate(g: DiGraph, l: Layering, scheme: WeightScheme | None = None) -> Metrics:
    """All aesthetics of a layering that is feasible in the generalized sense.

    Width counts original vertices on every layer and, on the interior
    layers ``2..Y-1``, one dummy per arc passing strictly through.
    """
    if not check_feasible(g, l, Variant.GLP):
        raise LayeringError("layering places the endpoints of an arc on the same layer")
    scheme = scheme or WeightScheme()
    y = l.y_cap
    a = l.assignment
    sizes = {k: 0 for k in range(1, y + 1)}
    for k in a:
        sizes[k] += 1
    dummies = {k: 0 for k in range(2, y)}
    length = rev = 0
    for u, v in g.arcs:
        lo, hi = sorted((a[u], a[v]))
        length += hi - lo
        if a[v] < a[u]:
            rev += 1
        for k in range(lo + 1, hi):
            dummies[k] += 1
    width = max((sizes[k] + dummies.get(k, 0) for k in sizes), default=0)
    height = l.height
    if width >= 1 and height >= 1:
        s, s_bar = scale_factors(width, height, scheme.r_w, scheme.r_h)
    else:
        s = s_bar = None
    return Metrics(length, rev, dummies, sizes, width, height, s, s_bar, y)


def objective(metrics: Metrics, scheme: WeightScheme, variant: Variant) -> Fraction:
    variant = Variant.parse(variant)
    if variant.directed and metrics.reversed:
        raise LayeringError(f"{variant.value} does not admit reversed arcs ({metrics.reversed} present)")
    value = scheme.w_len * metrics.total_length
    if not variant.directed:
        value += scheme.w_rev * metrics.reversed
    if variant.uses_width:
        value += scheme.w_wid * metrics.width
    elif variant is Variant.GLP_MS:
        if metrics.scale is None:
            raise LayeringError("scale factor undefined on an empty layering")
        value -= scheme.w_scl * metrics.scale
    elif variant is Variant.GLP_MS_STAR:
        if metrics.inv_scale is None:
            raise LayeringError("scale factor undefined on an empty layering")
        value += scheme.w_scl * metrics.inv_scale
    return value


def layering_objective(g: DiGraph, l: Layering, scheme: WeightScheme, variant: Variant) -> Fraction:
    """Convenience: feasibility check, :func:`evaluate` and :func:`objective` in one call."""
    variant = Variant.parse(variant)
    if not check_feasible(g, l, variant):
        raise LayeringError(f"layering infeasible for {variant.value}")
    return objective(evaluate(g, l, scheme), scheme, variant)


def normalize_layering(l: Layering) -> Layering:
    """Drop empty layers and renumber the occupied ones ``1, 2, ...`` in order.

    The layer cap is kept, so the result stays comparable with the input.
    """
    rank = {k: i for i, k in enumerate(sorted(set(l.assignment)), start=1)}
    return Layering(tuple(rank[k] for k in l.assignment), l.y_cap)


def normalize_area(r_w, r_h) -> tuple[Fraction, Fraction]:
    r_w, r_h = _frac(r_w), _frac(r_h)
    if r_w <= 0 or r_h <= 0:
        raise ValueError("target area sides must be positive")
    m = min(r_w, r_h)
    return r_w / m, r_h / m


# ---------------------------------------------------------------------------
# layering files: one "vertex layer" pair per line


def parse_layering(text: str | TextIO, n: int, y_cap: int | None = None) -> Layering:
    if not isinstance(text, str):
        text = text.read()
    found: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise LayeringError(f"line {lineno}: expected 'vertex layer'")
        try:
            v, k = int(parts[0]), int(parts[1])
        except ValueError:
            raise LayeringError(f"line {lineno}: non-integer entry") from None
        if not 0 <= v < n:
            raise LayeringError(f"line {lineno}: vertex {v} outside 0..{n - 1}")
        if v in found:
            raise LayeringError(f"line {lineno}: vertex {v} assigned twice")
        found[v] = k
    missing = [v for v in range(n) if v not in found]
    if missing:
        raise LayeringError(f"layering misses vertices {missing[:10]}")
    return Layering.of([found[v] for v in range(n)], y_cap)


def serialize_layering(l: Layering) -> str:
    return "".join(f"{v} {k}\n" for v, k in enumerate(l.assignment))
