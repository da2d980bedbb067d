import itertools
import time
from fractions import Fraction as F

import numpy as np
import pytest

from layerforge.graph import DiGraph, GenSpec, generate_random, random_digraph
from layerforge.metrics import Layering, Variant, WeightScheme, evaluate, objective
from layerforge.presets import make_preset
from layerforge.solver import (
    FEASIBLE,
    HAVE_COMPILED,
    INFEASIBLE,
    OPTIMAL,
    TIMEOUT,
    SolveConfig,
    _pysearch,
    branch_and_bound,
    brute_force,
    solve,
    solve_with_restarts,
    warm_start_layering,
)
from layerforge.solver.problem import branching_order, prepare

VARIANTS = list(Variant)
W_LR = WeightScheme(w_len=1, w_rev=10)


def random_weights(rng):
    pick = lambda *xs: F(xs[int(rng.integers(len(xs)))])  # noqa: E731
    return WeightScheme(
        w_len=pick(0, 1, 1, 2, F(1, 2)),
        w_rev=pick(0, 1, 3, F(5, 2)),
        w_wid=pick(0, 1, 2, F(3, 2)),
        w_scl=pick(0, 1, 4, F(7, 3)),
        r_w=pick(1, 2, F(3, 2)),
        r_h=pick(1, 2, F(1, 3)),
    )


def random_case(rng):
    n = int(rng.integers(1, 7))
    m = int(rng.integers(0, 9)) if n > 1 else 0
    Y = int(rng.integers(1, 5))
    while Y ** n > 5000:
        Y -= 1
    return random_digraph(n, m, rng), Y


def objective_of(g, lay, cfg):
    return objective(evaluate(g, lay, cfg.weights), cfg.weights, cfg.variant)


# --- examples -------------------------------------------------------------------


def test_single_arc():
    cfg = SolveConfig(Variant.GLP, WeightScheme(w_len=1, w_rev=100), Y=2)
    g = DiGraph(2, ((0, 1),))
    for res in (brute_force(g, cfg), branch_and_bound(g, cfg), solve(g, cfg)):
        assert res.status == OPTIMAL and res.objective == 1 and res.best.assignment == (1, 2)


def test_two_cycle():
    cfg = SolveConfig(Variant.GLP, W_LR, Y=2)
    g = DiGraph(2, ((0, 1), (1, 0)))
    assert brute_force(g, cfg).objective == 12
    assert branch_and_bound(g, cfg).objective == 12
    assert solve(g, cfg).objective == 12


def test_triangle_infeasible():
    cfg = SolveConfig(Variant.GLP, W_LR, Y=2)
    g = DiGraph(3, ((0, 1), (1, 2), (0, 2)))
    for res in (brute_force(g, cfg), branch_and_bound(g, cfg), solve(g, cfg)):
        assert res.status == INFEASIBLE and res.best is None and res.objective is None


def test_directed_screens():
    cyc = DiGraph(2, ((0, 1), (1, 0)))
    assert branch_and_bound(cyc, SolveConfig(Variant.DLP, W_LR, Y=5)).status == INFEASIBLE
    path = DiGraph(4, ((0, 1), (1, 2), (2, 3)))
    assert branch_and_bound(path, SolveConfig(Variant.DLP, W_LR, Y=3)).status == INFEASIBLE
    assert branch_and_bound(path, SolveConfig(Variant.DLP, W_LR, Y=4)).objective == 3


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_path(n):
    w = WeightScheme(w_len=F(3, 2), w_rev=4)
    g = DiGraph(n, tuple((i, i + 1) for i in range(n - 1)))
    res = branch_and_bound(g, SolveConfig(Variant.GLP, w, Y=n))
    assert res.status == OPTIMAL and res.objective == (n - 1) * w.w_len


@pytest.mark.parametrize("m", [1, 3, 6])
def test_star(m):
    w = WeightScheme(w_len=2, w_rev=5)
    g = DiGraph(m + 1, tuple((0, i) for i in range(1, m + 1)))
    res = branch_and_bound(g, SolveConfig(Variant.GLP, w, Y=2))
    assert res.status == OPTIMAL and res.objective == m * w.w_len


def test_empty_graph():
    res = solve(DiGraph(0), SolveConfig(Variant.GLP_MS_STAR, W_LR, Y=2))
    assert res.status == OPTIMAL and res.best.assignment == ()


# --- oracle ---------------------------------------------------------------------


def test_brute_force_enumerates_lexicographically():
    # both layerings of an arc on two layers cost the same without reversal weight
    g = DiGraph(2, ((0, 1),))
    res = brute_force(g, SolveConfig(Variant.GLP, WeightScheme(w_len=1, w_rev=0), Y=2))
    assert res.best.assignment == (1, 2) and res.nodes_explored == 4


def test_brute_force_cap():
    with pytest.raises(ValueError):
        brute_force(DiGraph(8), SolveConfig(Y=8), cap=10**6)


@pytest.mark.parametrize("seed", range(6))
def test_oracle_equivalence(seed):
    rng = np.random.default_rng(1000 + seed)
    for _ in range(25):
        g, Y = random_case(rng)
        cfg = SolveConfig(VARIANTS[int(rng.integers(len(VARIANTS)))], random_weights(rng), Y, branch_order="id")
        ref = brute_force(g, cfg)
        for res in (branch_and_bound(g, cfg), solve(g, cfg)):
            assert res.status == ref.status
            assert res.objective == ref.objective
            if ref.best is not None:
                assert res.best == ref.best  # lexicographically first optimum
                assert objective_of(g, res.best, cfg) == res.objective
                assert res.lower_bound == res.objective


@pytest.mark.parametrize("order", ["degree_desc", "connected"])
def test_other_orders_reach_the_same_optimum(order):
    rng = np.random.default_rng(77)
    for _ in range(40):
        g, Y = random_case(rng)
        cfg = SolveConfig(VARIANTS[int(rng.integers(len(VARIANTS)))], random_weights(rng), Y,
                          branch_order=order, seed=int(rng.integers(100)))
        ref = brute_force(g, cfg)
        res = solve(g, cfg)
        assert (res.status, res.objective) == (ref.status, ref.objective)
        if res.best is not None:
            assert objective_of(g, res.best, cfg) == res.objective


def test_restarts_cover_tall_optima():
    # a wide target area favours a flat drawing, a tall one needs every layer
    rng = np.random.default_rng(3)
    for _ in range(15):
        g = random_digraph(6, int(rng.integers(3, 8)), rng)
        for r_h in (F(1, 3), 1, 4):
            w = WeightScheme(w_len=1, w_rev=2, w_scl=20, r_w=1, r_h=r_h)
            for variant in (Variant.GLP_MS, Variant.GLP_MS_STAR):
                cfg = SolveConfig(variant, w, Y=6, branch_order="id")
                ref = brute_force(g, cfg)
                res = solve_with_restarts(g, cfg)
                assert (res.status, res.objective, res.best) == (ref.status, ref.objective, ref.best)


def test_large_weights_use_bigint_kernel():
    g = DiGraph(4, ((0, 1), (1, 2), (2, 0), (2, 3)))
    cfg = SolveConfig(Variant.GLP_MS_STAR, WeightScheme(w_len=1, w_rev=10**30, w_scl=10**40), Y=4)
    res = branch_and_bound(g, cfg)
    assert res.backend == "python"
    assert res.objective == brute_force(g, cfg).objective


# --- guarantees -------------------------------------------------------------------


def completions(partial, Y):
    free = [v for v, k in enumerate(partial) if k == 0]
    for ks in itertools.product(range(1, Y + 1), repeat=len(free)):
        full = list(partial)
        for v, k in zip(free, ks):
            full[v] = k
        yield Layering(tuple(full), Y)


@pytest.mark.parametrize("seed", range(8))
def test_node_bounds_are_sound(seed):
    rng = np.random.default_rng(seed)
    g = random_digraph(5, int(rng.integers(3, 8)), rng)
    variant = VARIANTS[seed % len(VARIANTS)]
    cfg = SolveConfig(variant, random_weights(rng), Y=4)
    order = branching_order(g, "connected")
    p = prepare(g, cfg.Y, variant, cfg.weights, order)
    nodes = []
    _pysearch.search(p, None, False, time.monotonic() + 60,
                     on_node=lambda *args: nodes.append(args))
    assert nodes
    for partial, bound, inc, found in nodes[::max(1, len(nodes) // 40)]:
        for lay in completions(partial, cfg.Y):
            if not all(lay[u] != lay[v] and (not variant.directed or lay[u] < lay[v]) for u, v in g.arcs):
                continue
            value = objective_of(g, lay, cfg) * p.scale
            admitted = inc is None or value < inc or (value == inc and not found)
            if not admitted:
                continue
            assert bound is not None, "node pruned as dead but holds an improving completion"
            assert bound <= value


def test_anytime_bounds():
    g = generate_random(GenSpec(30, seed=4))
    pre = make_preset("ms_2_1", g)
    cfg = SolveConfig(pre.variant, pre.weights, pre.Y, time_limit=0.05)
    res = solve(g, cfg)
    assert res.status in (FEASIBLE, OPTIMAL, TIMEOUT)
    if res.status == TIMEOUT:
        assert res.best is None
    else:
        assert res.lower_bound <= res.objective
        assert objective_of(g, res.best, cfg) == res.objective
    res = branch_and_bound(g, cfg)
    assert res.status != OPTIMAL
    assert res.lower_bound is None or res.best is None or res.lower_bound <= res.objective


def test_determinism():
    g = generate_random(GenSpec(14, seed=2))
    pre = make_preset("exp2", g)
    cfg = SolveConfig(pre.variant, pre.weights, pre.Y, seed=5)
    a, b = solve(g, cfg), solve(g, cfg)
    assert (a.status, a.best, a.objective, a.lower_bound, a.nodes_explored) == \
           (b.status, b.best, b.objective, b.lower_bound, b.nodes_explored)


@pytest.mark.parametrize("variant", [Variant.GLP_MS, Variant.GLP_MS_STAR])
def test_scale_identity_on_incumbents(variant):
    g = generate_random(GenSpec(10, seed=1))
    w = WeightScheme(w_len=1, w_rev=3, w_scl=50, r_w=2, r_h=1)
    res = solve(g, SolveConfig(variant, w, Y=g.n))
    met = evaluate(g, res.best, w)
    assert met.scale * met.inv_scale == 1


def test_warm_start():
    path = DiGraph(3, ((0, 1), (1, 2)))
    cfg = SolveConfig(Variant.GLP, W_LR, Y=3)
    warm = warm_start_layering(path, cfg)
    assert warm.assignment == (1, 2, 3)
    res = solve_with_restarts(path, cfg)
    assert res.objective == objective_of(path, warm, cfg) and res.nodes_explored <= 10
    assert warm_start_layering(DiGraph(2, ((0, 1), (1, 0))), cfg) is None
    g = generate_random(GenSpec(12, seed=9))
    cfg = SolveConfig(Variant.GLP_W, WeightScheme(w_len=1, w_rev=5, w_wid=3), Y=5)
    warm = warm_start_layering(g, cfg)
    if warm is not None:
        assert objective_of(g, warm, cfg) >= solve(g, cfg).objective


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernel not built")
@pytest.mark.parametrize("preset", ["exp1", "exp2", "ms_1_1"])
def test_kernel_parity(preset):
    for seed in range(3):
        g = generate_random(GenSpec(11, seed=seed))
        pre = make_preset(preset, g)
        base = dict(variant=pre.variant, weights=pre.weights, Y=pre.Y)
        c = solve(g, SolveConfig(**base, backend="compiled"))
        p = solve(g, SolveConfig(**base, backend="python"))
        assert c.backend == "compiled" and p.backend == "python"
        assert (c.status, c.best, c.objective, c.nodes_explored) == (p.status, p.best, p.objective, p.nodes_explored)


def test_kernel_env_override(monkeypatch):
    monkeypatch.setenv("LAYERFORGE_KERNEL", "python")
    res = branch_and_bound(DiGraph(2, ((0, 1),)), SolveConfig(Y=2))
    assert res.backend == "python"


def test_config_validation():
    with pytest.raises(ValueError):
        SolveConfig(time_limit=0)
    with pytest.raises(ValueError):
        SolveConfig(Y=0)
    with pytest.raises(ValueError):
        SolveConfig(backend="gpu")
    with pytest.raises(ValueError):
        branching_order(DiGraph(2), "random")
    assert SolveConfig(variant="glp-ms*").variant is Variant.GLP_MS_STAR


def test_result_dict():
    res = solve(DiGraph(2, ((0, 1), (1, 0))), SolveConfig(Variant.GLP, W_LR, Y=2))
    d = res.to_dict()
    assert d["objective"] == "12" and d["status"] == OPTIMAL and len(d["layering"]) == 2
