# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled branch-and-bound kernel.

Same algorithm, child order and node accounting as ``_pysearch``; all
values are int64, so the caller only dispatches here when the scaled
objective magnitudes fit (``SearchProblem.fits_int64``).
"""

from libc.stdlib cimport malloc, calloc, free
from libc.stdint cimport int64_t, int32_t

import time

cdef int CHECK_INTERVAL = 4096


cdef struct State:
    int n
    int m
    int Y
    int Y1
    int* order
    int* tail_ptr
    int* tail_adj
    int* head_ptr
    int* head_adj
    int64_t* cm
    int32_t* fb
    int64_t* uu
    int64_t wl
    int64_t* table
    int wtop
    int use_shape
    int first_limit
    int h_floor
    # search state
    int* layer
    int64_t* cost
    int32_t* forb
    int64_t* span
    int* ndec
    int64_t* load
    int* occ
    int64_t* stack_bounds
    int depth_bounds
    int64_t dec
    int maxlayer
    int distinct
    int hcap
    int64_t wcap
    int has_inc
    int64_t inc
    int found
    int* best
    int64_t nodes
    double deadline
    int timed_out


cdef inline int admits(State* s, int64_t value):
    if not s.has_inc:
        return 1
    return value < s.inc or (value == s.inc and not s.found)


cdef void set_caps(State* s):
    cdef int h, w, h0
    if not s.use_shape or not s.has_inc:
        s.hcap = s.Y
        s.wcap = s.n + s.m
        return
    cdef int64_t base_len = s.wl * s.m
    s.hcap = 0
    for h in range(1, s.Y + 1):
        if admits(s, s.table[((s.n + h - 1) // h) * s.Y1 + h] + base_len):
            s.hcap = h
    s.wcap = 0
    for w in range(1, s.wtop + 1):
        h0 = (s.n + w - 1) // w
        if h0 < s.h_floor:
            h0 = s.h_floor
        if h0 <= s.Y and admits(s, s.table[w * s.Y1 + h0] + base_len):
            s.wcap = w


cdef inline int shape_lb(State* s, int64_t total, int64_t* out):
    """Smallest shape term for some height; 0 if no height can hold ``total``."""
    cdef int k, h
    cdef int64_t wmax = 0, best = 0, val, w
    cdef int first = 1
    for k in range(1, s.Y + 1):
        if s.load[k] > wmax:
            wmax = s.load[k]
    h = s.maxlayer if s.maxlayer > s.h_floor else s.h_floor
    while h <= s.Y:
        w = (total + h - 1) // h
        if wmax > w:
            w = wmax
        if w <= s.wtop:
            val = s.table[w * s.Y1 + h]
            if first or val < best:
                best = val
                first = 0
        h += 1
    out[0] = best
    return not first


cdef inline int undecided_bound(State* s, int64_t* out_cost, int64_t* out_extra):
    """Per-vertex minima over admissible layers; 0 if some vertex has none."""
    cdef int w, k, base, any_ok
    cdef int64_t total = 0, extra = 0, best, dmin, c
    for w in range(s.n):
        if s.layer[w]:
            continue
        base = w * s.Y1
        any_ok = 0
        best = 0
        dmin = 0
        for k in range(1, s.hcap + 1):
            if s.forb[base + k] == 0 and s.load[k] < s.wcap:
                c = s.cost[base + k]
                if not any_ok:
                    best = c
                    dmin = s.span[base + k]
                    any_ok = 1
                else:
                    if c < best:
                        best = c
                    if s.span[base + k] < dmin:
                        dmin = s.span[base + k]
        if not any_ok:
            return 0
        total += best
        extra += 1 + dmin - s.ndec[w]
    out_cost[0] = total
    out_extra[0] = extra
    return 1


cdef inline int capacity_ok(State* s, int64_t total):
    cdef int k
    for k in range(1, s.hcap + 1):
        if s.load[k] > s.wcap:
            return 0
    return total <= s.wcap * s.hcap


cdef inline void shift(State* s, int u, int l, int sign):
    cdef int i, k, w, a, b, lo, hi, base
    cdef int rowl = l * s.Y1
    for i in range(s.tail_ptr[u], s.tail_ptr[u + 1]):
        w = s.tail_adj[i]
        b = s.layer[w]
        if b:
            if l < b:
                lo = l; hi = b
            else:
                lo = b; hi = l
            for k in range(lo + 1, hi):
                s.load[k] += sign
        else:
            base = w * s.Y1
            for k in range(1, s.Y + 1):
                s.cost[base + k] += sign * s.cm[rowl + k]
                s.forb[base + k] += sign * s.fb[rowl + k]
                s.span[base + k] += sign * (k - l if k > l else l - k)
            s.ndec[w] += sign
    for i in range(s.head_ptr[u], s.head_ptr[u + 1]):
        w = s.head_adj[i]
        a = s.layer[w]
        if a:
            if l < a:
                lo = l; hi = a
            else:
                lo = a; hi = l
            for k in range(lo + 1, hi):
                s.load[k] += sign
        else:
            base = w * s.Y1
            for k in range(1, s.Y + 1):
                s.cost[base + k] += sign * s.cm[k * s.Y1 + l]
                s.forb[base + k] += sign * s.fb[k * s.Y1 + l]
                s.span[base + k] += sign * (k - l if k > l else l - k)
            s.ndec[w] += sign


cdef int visit(State* s, int t) except -1:
    cdef int u = s.order[t]
    cdef int remaining = s.n - t - 1
    cdef int limit = s.first_limit if t == 0 else s.Y
    cdef int ubase = u * s.Y1
    cdef int l, i, k, new_max, new_distinct, old_max, old_distinct, dead
    cdef int64_t bound, rest = 0, extra = 0, total, shape
    for l in range(1, limit + 1):
        if s.forb[ubase + l] or l > s.hcap:
            continue
        new_max = l if l > s.maxlayer else s.maxlayer
        new_distinct = s.distinct + (1 if s.occ[l] == 0 else 0)
        if new_max - new_distinct > remaining:
            continue

        old_max = s.maxlayer
        old_distinct = s.distinct
        s.layer[u] = l
        s.maxlayer = new_max
        s.distinct = new_distinct
        s.occ[l] += 1
        s.load[l] += 1
        s.dec += s.cost[ubase + l]
        shift(s, u, l, 1)

        dead = not undecided_bound(s, &rest, &extra)
        bound = s.dec + s.wl * s.uu[t + 1]
        if not dead:
            total = extra
            for k in range(1, s.Y + 1):
                total += s.load[k]
            bound += rest
            dead = not capacity_ok(s, total)
            if s.use_shape and not dead:
                shape = 0
                dead = not shape_lb(s, total, &shape)
                bound += shape
        s.nodes += 1
        if s.nodes % CHECK_INTERVAL == 0 and time.monotonic() > s.deadline:
            s.stack_bounds[s.depth_bounds] = bound
            s.depth_bounds += 1
            s.timed_out = 1
            return 0
        if not dead and admits(s, bound):
            if remaining == 0:
                s.inc = bound
                s.has_inc = 1
                s.found = 1
                for i in range(s.n):
                    s.best[i] = s.layer[i]
                set_caps(s)
            else:
                s.stack_bounds[s.depth_bounds] = bound
                s.depth_bounds += 1
                visit(s, t + 1)
                if s.timed_out:
                    return 0
                s.depth_bounds -= 1

        shift(s, u, l, -1)
        s.dec -= s.cost[ubase + l]
        s.load[l] -= 1
        s.occ[l] -= 1
        s.maxlayer = old_max
        s.distinct = old_distinct
        s.layer[u] = 0
    return 0


cdef void release(State* s):
    free(s.order); free(s.tail_ptr); free(s.tail_adj); free(s.head_ptr); free(s.head_adj)
    free(s.cm); free(s.fb); free(s.uu); free(s.table)
    free(s.layer); free(s.cost); free(s.forb); free(s.span); free(s.ndec); free(s.load); free(s.occ)
    free(s.stack_bounds); free(s.best)


def search(p, cutoff, cutoff_found, double deadline):
    """Compiled counterpart of ``_pysearch.search`` with the same contract."""
    cdef State s
    cdef int n = p.n, Y = p.Y, Y1 = p.Y + 1
    cdef int i, j, m = 0, wdim
    cdef int64_t root_shape
    if n == 0:
        return False, [], 0, 0, 0
    for i in range(n):
        m += len(p.inc_tail[i])
    s.n = n
    s.m = m
    s.Y = Y
    s.Y1 = Y1
    s.order = <int*>malloc(n * sizeof(int))
    s.tail_ptr = <int*>malloc((n + 1) * sizeof(int))
    s.head_ptr = <int*>malloc((n + 1) * sizeof(int))
    s.tail_adj = <int*>malloc((m + 1) * sizeof(int))
    s.head_adj = <int*>malloc((m + 1) * sizeof(int))
    s.cm = <int64_t*>malloc(Y1 * Y1 * sizeof(int64_t))
    s.fb = <int32_t*>malloc(Y1 * Y1 * sizeof(int32_t))
    s.uu = <int64_t*>malloc((n + 1) * sizeof(int64_t))
    s.layer = <int*>calloc(n, sizeof(int))
    s.cost = <int64_t*>calloc(n * Y1, sizeof(int64_t))
    s.forb = <int32_t*>calloc(n * Y1, sizeof(int32_t))
    s.span = <int64_t*>calloc(n * Y1, sizeof(int64_t))
    s.ndec = <int*>calloc(n, sizeof(int))
    s.load = <int64_t*>calloc(Y + 2, sizeof(int64_t))
    s.occ = <int*>calloc(Y + 2, sizeof(int))
    s.stack_bounds = <int64_t*>malloc((n + 2) * sizeof(int64_t))
    s.best = <int*>calloc(n, sizeof(int))
    s.table = NULL
    try:
        for i in range(n):
            s.order[i] = p.order[i]
        s.tail_ptr[0] = 0
        s.head_ptr[0] = 0
        for i in range(n):
            s.tail_ptr[i + 1] = s.tail_ptr[i] + len(p.inc_tail[i])
            for j, w in enumerate(p.inc_tail[i]):
                s.tail_adj[s.tail_ptr[i] + j] = w
            s.head_ptr[i + 1] = s.head_ptr[i] + len(p.inc_head[i])
            for j, w in enumerate(p.inc_head[i]):
                s.head_adj[s.head_ptr[i] + j] = w
        for i in range(Y1):
            for j in range(Y1):
                s.cm[i * Y1 + j] = p.cost[i][j]
                s.fb[i * Y1 + j] = p.forbid[i][j]
        for i in range(n + 1):
            s.uu[i] = p.uu[i]
        s.wl = p.w_len
        s.use_shape = p.table is not None
        s.wtop = 0
        if s.use_shape:
            wdim = len(p.table)
            s.wtop = wdim - 1
            s.table = <int64_t*>malloc(wdim * Y1 * sizeof(int64_t))
            for i in range(wdim):
                for j in range(Y1):
                    s.table[i * Y1 + j] = p.table[i][j]
        s.first_limit = p.first_limit
        s.h_floor = p.h_floor
        s.depth_bounds = 0
        s.dec = 0
        s.maxlayer = 0
        s.distinct = 0
        s.nodes = 0
        s.deadline = deadline
        s.timed_out = 0
        if cutoff is None:
            s.has_inc = 0
            s.inc = 0
            s.found = 0
        else:
            s.has_inc = 1
            s.inc = cutoff
            s.found = 1 if cutoff_found else 0
        set_caps(&s)

        root_shape = 0
        if s.use_shape:
            shape_lb(&s, n, &root_shape)
        root = s.wl * s.uu[0] + root_shape
        s.stack_bounds[0] = root
        s.depth_bounds = 1
        visit(&s, 0)

        best = [s.best[i] for i in range(n)] if s.found else None
        inc = s.inc if s.has_inc else None
        if s.timed_out:
            lower = min(s.stack_bounds[i] for i in range(s.depth_bounds))
            if inc is not None and inc < lower:
                lower = inc
            return True, best, inc, lower, s.nodes
        return False, best, inc, inc, s.nodes
    finally:
        release(&s)
