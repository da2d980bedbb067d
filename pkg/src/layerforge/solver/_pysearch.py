"""Pure-Python depth-first branch-and-bound kernel.

Works on an integer-scaled problem prepared by :mod:`layerforge.solver.problem`.
The compiled kernel in ``_csearch.pyx`` implements the same algorithm
node for node, so both report identical node counts.

Node bound: exact cost of arcs between decided vertices, plus for every
undecided vertex its cheapest admissible layer against its decided
neighbours, plus ``w_len`` per arc between undecided vertices, plus the
smallest width/scale term compatible with the current layer loads, the
height, and a lower bound on the total number of vertices and dummies.
Admissible layers are capped by the height and width any improving
solution can still have.
"""

from __future__ import annotations

import time

CHECK_INTERVAL = 4096


class _Timeout(Exception):
    pass


def search(p, cutoff, cutoff_found: bool, deadline: float, on_node=None):
    """Run the search on prepared problem ``p``.

    ``cutoff`` is the incumbent value to beat (``None`` for none). With
    ``cutoff_found`` false, solutions equal to the cutoff are still
    accepted, so a warm start never hides the lexicographically first
    optimum.

    ``on_node(layers, bound, incumbent, found)`` is called at every node
    with the partial assignment (0 = undecided) and the node's scaled bound,
    or ``None`` when the node was found dead; it exists for tests.

    Returns ``(timed_out, best_layers, best_value, lower_bound, nodes)``.
    """
    n, Y = p.n, p.Y
    if n == 0:
        return False, [], 0, 0, 0
    order = p.order
    inc_tail, inc_head = p.inc_tail, p.inc_head
    cm, fb = p.cost, p.forbid  # [tail layer][head layer]
    uu = p.uu
    wl = p.w_len
    table = p.table
    use_shape = table is not None
    base_len = wl * p.m
    wtop = len(table) - 1 if use_shape else 0

    layer = [0] * n
    cost = [[0] * (Y + 1) for _ in range(n)]
    forb = [[0] * (Y + 1) for _ in range(n)]
    span = [[0] * (Y + 1) for _ in range(n)]  # summed distance to decided neighbours
    ndec = [0] * n  # arcs to decided neighbours
    dist = [[abs(a - b) for b in range(Y + 1)] for a in range(Y + 1)]
    load = [0] * (Y + 2)
    occ = [0] * (Y + 2)

    st = {
        "inc": cutoff,
        "found": bool(cutoff_found) if cutoff is not None else False,
        "best": None,
        "nodes": 0,
        "dec": 0,
        "maxlayer": 0,
        "distinct": 0,
        "hcap": Y,
        "wcap": n + p.m,
    }
    stack_bounds: list = []

    def admits(value) -> bool:
        inc = st["inc"]
        if inc is None:
            return True
        return value < inc or (value == inc and not st["found"])

    def set_caps() -> None:
        if not use_shape or st["inc"] is None:
            st["hcap"], st["wcap"] = Y, n + p.m
            return
        hcap = 0
        for h in range(1, Y + 1):
            if admits(table[-(-n // h)][h] + base_len):
                hcap = h
        wcap = 0
        for w in range(1, wtop + 1):
            h0 = max(p.h_floor, -(-n // w))
            if h0 <= Y and admits(table[w][h0] + base_len):
                wcap = w
        st["hcap"], st["wcap"] = hcap, wcap

    def shape_lb(total):
        """Smallest shape term for some height; None if no height can hold ``total``."""
        wmax = max(load[1:Y + 1])
        best = None
        for h in range(max(st["maxlayer"], p.h_floor), Y + 1):
            w = max(wmax, -(-total // h))
            if w > wtop:
                continue
            val = table[w][h]
            if best is None or val < best:
                best = val
        return best

    def undecided_bound():
        """Per-vertex minima over admissible layers, summed.

        Returns ``(cost, extra_load)`` where ``extra_load`` bounds the load the
        undecided vertices and their dummies add, or None if some vertex has no
        admissible layer.
        """
        hcap, wcap = st["hcap"], st["wcap"]
        total = extra = 0
        for w in range(n):
            if layer[w]:
                continue
            cw, fw, sw = cost[w], forb[w], span[w]
            best = dmin = None
            for k in range(1, hcap + 1):
                if not fw[k] and load[k] < wcap:
                    c = cw[k]
                    if best is None or c < best:
                        best = c
                    if dmin is None or sw[k] < dmin:
                        dmin = sw[k]
            if best is None:
                return None
            total += best
            extra += 1 + dmin - ndec[w]
        return total, extra

    def capacity_ok(total: int) -> bool:
        wcap = st["wcap"]
        for k in range(1, st["hcap"] + 1):
            if load[k] > wcap:
                return False
        return total <= wcap * st["hcap"]

    def shift(u: int, l: int, sign: int) -> None:
        for w in inc_tail[u]:
            b = layer[w]
            if b:
                lo, hi = (l, b) if l < b else (b, l)
                for k in range(lo + 1, hi):
                    load[k] += sign
            else:
                cw, fw, sw, row_c, row_f, row_d = cost[w], forb[w], span[w], cm[l], fb[l], dist[l]
                for k in range(1, Y + 1):
                    cw[k] += sign * row_c[k]
                    fw[k] += sign * row_f[k]
                    sw[k] += sign * row_d[k]
                ndec[w] += sign
        for w in inc_head[u]:
            a = layer[w]
            if a:
                lo, hi = (l, a) if l < a else (a, l)
                for k in range(lo + 1, hi):
                    load[k] += sign
            else:
                cw, fw, sw, row_d = cost[w], forb[w], span[w], dist[l]
                for k in range(1, Y + 1):
                    cw[k] += sign * cm[k][l]
                    fw[k] += sign * fb[k][l]
                    sw[k] += sign * row_d[k]
                ndec[w] += sign

    def visit(t: int) -> None:
        u = order[t]
        remaining = n - t - 1
        limit = p.first_limit if t == 0 else Y
        cu, fu = cost[u], forb[u]
        for l in range(1, limit + 1):
            if fu[l] or l > st["hcap"]:
                continue
            new_max = l if l > st["maxlayer"] else st["maxlayer"]
            new_distinct = st["distinct"] + (1 if occ[l] == 0 else 0)
            if new_max - new_distinct > remaining:
                continue

            old_max, old_distinct = st["maxlayer"], st["distinct"]
            layer[u] = l
            st["maxlayer"], st["distinct"] = new_max, new_distinct
            occ[l] += 1
            load[l] += 1
            st["dec"] += cu[l]
            shift(u, l, 1)

            rest = undecided_bound()
            dead = rest is None
            bound = st["dec"] + wl * uu[t + 1]
            if not dead:
                total = sum(load) + rest[1]
                bound += rest[0]
                dead = not capacity_ok(total)
                if use_shape and not dead:
                    shape = shape_lb(total)
                    dead = shape is None
                    bound += shape or 0
            st["nodes"] += 1
            if on_node is not None:
                on_node(layer[:], None if dead else bound, st["inc"], st["found"])
            if st["nodes"] % CHECK_INTERVAL == 0 and time.monotonic() > deadline:
                stack_bounds.append(bound)
                raise _Timeout
            if not dead and admits(bound):
                if remaining == 0:
                    st["inc"] = bound
                    st["found"] = True
                    st["best"] = layer[:]
                    set_caps()
                else:
                    stack_bounds.append(bound)
                    visit(t + 1)
                    stack_bounds.pop()

            shift(u, l, -1)
            st["dec"] -= cu[l]
            load[l] -= 1
            occ[l] -= 1
            st["maxlayer"], st["distinct"] = old_max, old_distinct
            layer[u] = 0

    set_caps()
    root = wl * uu[0] + ((shape_lb(n) or 0) if use_shape else 0)
    stack_bounds.append(root)
    try:
        visit(0)
    except _Timeout:
        lower = min(stack_bounds)
        if st["inc"] is not None and st["inc"] < lower:
            lower = st["inc"]
        return True, st["best"], st["inc"], lower, st["nodes"]
    return False, st["best"], st["inc"], st["inc"], st["nodes"]
