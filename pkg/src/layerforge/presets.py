"""Benchmark weight presets.

``exp1``/``exp2`` are the width experiments (almost pure GLP vs. width
first); ``ms_1_2``, ``ms_1_1`` and ``ms_2_1`` target drawing areas with
``r_h : r_w`` equal to 1:2, 1:1 and 2:1. The scale presets use the printed
weights as they stand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .graph import DiGraph
from .metrics import Variant, WeightScheme, normalize_area

PRESETS = ("exp1", "exp2", "ms_1_2", "ms_1_1", "ms_2_1")

# r_h : r_w per scale preset
_AREA = {"ms_1_2": (1, 2), "ms_1_1": (1, 1), "ms_2_1": (2, 1)}


@dataclass(frozen=True)
class Preset:
    name: str
    Y: int
    weights: WeightScheme
    variant: Variant


def width_layer_cap(n_vertices: int) -> int:
    """``ceil(1.6 * sqrt(|V|))`` computed exactly: smallest Y with 25 Y^2 >= 64 |V|."""
    y = max(1, math.isqrt(64 * n_vertices // 25))
    while 25 * y * y < 64 * n_vertices:
        y += 1
    while y > 1 and 25 * (y - 1) ** 2 >= 64 * n_vertices:
        y -= 1
    return y


def make_preset(name: str, g: DiGraph, variant: Variant | str | None = None) -> Preset:
    n, m = g.n, g.m
    if name in ("exp1", "exp2"):
        Y = width_layer_cap(n)
        w_len = Fraction(1)
        w_rev = Y * w_len * m
        w_wid = Fraction(1) if name == "exp1" else w_rev * m + m * Y + 1
        ws = WeightScheme(w_len=w_len, w_rev=w_rev, w_wid=w_wid)
        return Preset(name, Y, ws, Variant.parse(variant or Variant.GLP_W))
    if name in _AREA:
        Y = n
        w_len = Fraction(1)
        w_rev = Y * w_len * m
        w_scl = w_rev * m + m * Y + 1
        r_h, r_w = _AREA[name]
        r_w, r_h = normalize_area(r_w, r_h)
        ws = WeightScheme(w_len=w_len, w_rev=w_rev, w_scl=w_scl, r_w=r_w, r_h=r_h)
        return Preset(name, Y, ws, Variant.parse(variant or Variant.GLP_MS_STAR))
    raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
