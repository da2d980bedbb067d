"""Integer-scaled search problem shared by both kernels."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from ..graph import DiGraph
from ..metrics import Variant, WeightScheme

INT64_SAFE = 2**62


def shape_value(variant: Variant, scheme: WeightScheme, width: int, height: int) -> Fraction:
    """Exact width/scale part of the objective for given W and H."""
    if variant.uses_width:
        return scheme.w_wid * width
    if variant is Variant.GLP_MS:
        return -scheme.w_scl * min(scheme.r_w / width, scheme.r_h / height)
    if variant is Variant.GLP_MS_STAR:
        return scheme.w_scl * max(Fraction(width) / scheme.r_w, Fraction(height) / scheme.r_h)
    return Fraction(0)


def branching_order(g: DiGraph, rule: str, seed: int | None = None) -> list[int]:
    if rule == "id":
        return list(range(g.n))
    if rule == "degree_desc":
        deg = g.degrees()
        keys = list(range(g.n))
        if seed is not None:
            random.Random(seed).shuffle(keys)
        tie = {v: i for i, v in enumerate(keys)}
        return sorted(range(g.n), key=lambda v: (-deg[v], tie[v]))
    if rule == "connected":
        # grow the decided set along arcs: most arcs into the ordered prefix first, then degree
        deg = g.degrees()
        keys = list(range(g.n))
        if seed is not None:
            random.Random(seed).shuffle(keys)
        tie = {v: i for i, v in enumerate(keys)}
        links = [0] * g.n
        nbrs: list[list[int]] = [[] for _ in range(g.n)]
        for u, v in g.arcs:
            nbrs[u].append(v)
            nbrs[v].append(u)
        left = set(range(g.n))
        out = []
        while left:
            v = min(left, key=lambda w: (-links[w], -deg[w], tie[w]))
            left.remove(v)
            out.append(v)
            for w in nbrs[v]:
                links[w] += 1
        return out
    raise ValueError(f"unknown branch order {rule!r}")


@dataclass
class SearchProblem:
    n: int
    m: int
    Y: int
    order: list[int]
    inc_tail: list[list[int]]
    inc_head: list[list[int]]
    cost: list[list[int]]
    forbid: list[list[int]]
    uu: list[int]
    w_len: int
    table: list[list[int]] | None
    first_limit: int
    h_floor: int
    scale: int  # every objective value is multiplied by this
    magnitude: int  # bound on any |value| the kernel can produce

    def unscale(self, value: int) -> Fraction:
        return Fraction(value, self.scale)

    @property
    def fits_int64(self) -> bool:
        return self.magnitude < INT64_SAFE


def prepare(g: DiGraph, Y: int, variant: Variant, scheme: WeightScheme, order: list[int]) -> SearchProblem:
    n, m = g.n, g.m
    directed = variant.directed
    w_rev = Fraction(0) if directed else scheme.w_rev

    shape = None
    if (variant.uses_width and scheme.w_wid) or (variant.uses_scale and scheme.w_scl):
        wmax = n + m
        shape = [[shape_value(variant, scheme, max(w, 1), max(h, 1)) for h in range(Y + 1)]
                 for w in range(wmax + 1)]

    denoms = [scheme.w_len.denominator, w_rev.denominator]
    if shape:
        denoms.extend(x.denominator for row in shape for x in row)
    scale = 1
    for d in denoms:
        scale = math.lcm(scale, d)
    wl = int(scheme.w_len * scale)
    wr = int(w_rev * scale)
    table = [[int(x * scale) for x in row] for row in shape] if shape else None

    cost = [[0] * (Y + 1) for _ in range(Y + 1)]
    forbid = [[0] * (Y + 1) for _ in range(Y + 1)]
    for a in range(1, Y + 1):
        for b in range(1, Y + 1):
            if a == b or (directed and b < a):
                forbid[a][b] = 1
            else:
                cost[a][b] = wl * abs(b - a) + (wr if b < a else 0)

    inc_tail: list[list[int]] = [[] for _ in range(n)]
    inc_head: list[list[int]] = [[] for _ in range(n)]
    for u, v in g.arcs:
        inc_tail[u].append(v)
        inc_head[v].append(u)
    pos = {v: i for i, v in enumerate(order)}
    uu = [0] * (n + 1)
    for u, v in g.arcs:
        first = min(pos[u], pos[v])
        for t in range(first + 1):
            uu[t] += 1

    mirror_invariant = not directed and w_rev == 0
    first_limit = (Y + 1) // 2 if mirror_invariant else Y
    magnitude = (wl * (Y - 1) + wr) * m + 1
    if table:
        magnitude += max(abs(x) for row in table for x in row)
    return SearchProblem(
        n=n, m=m, Y=Y, order=order, inc_tail=inc_tail, inc_head=inc_head, cost=cost, forbid=forbid,
        uu=uu, w_len=wl, table=table, first_limit=first_limit,
        h_floor=min(2, Y) if m else 1, scale=scale, magnitude=magnitude,
    )
