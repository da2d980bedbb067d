from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from layerforge.graph import DiGraph
from layerforge.metrics import (
    Layering,
    LayeringError,
    Metrics,
    Variant,
    WeightScheme,
    check_feasible,
    evaluate,
    layering_objective,
    normalize_area,
    normalize_layering,
    objective,
    parse_layering,
    scale_factors,
    serialize_layering,
)

from strategies import graph_with_layering

PATH3 = DiGraph(3, ((0, 1), (1, 2)))
ARC = DiGraph(2, ((0, 1),))


def expanded_width(g, l):
    """Width by materialising dummy vertices, independent of the evaluator's bookkeeping."""
    rows = {k: [] for k in range(1, l.y_cap + 1)}
    for v in range(g.n):
        rows[l[v]].append(("v", v))
    for i, (u, v) in enumerate(g.arcs):
        lo, hi = sorted((l[u], l[v]))
        for k in range(lo + 1, hi):
            if 1 < k < l.y_cap:
                rows[k].append(("d", i))
    return max((len(r) for r in rows.values()), default=0)


def test_feasibility_examples():
    assert check_feasible(PATH3, Layering.of((1, 2, 3)), Variant.GLP)
    assert not check_feasible(ARC, Layering.of((2, 1)), Variant.DLP)
    assert check_feasible(ARC, Layering.of((2, 1)), Variant.GLP)
    assert not check_feasible(ARC, Layering((1, 1), 2), Variant.GLP)


def test_cover_and_range_errors():
    with pytest.raises(LayeringError):
        check_feasible(PATH3, Layering.of((1, 2)))
    with pytest.raises(LayeringError):
        Layering((0, 1), 2)
    with pytest.raises(LayeringError):
        Layering((3,), 2)


def test_evaluate_path():
    met = evaluate(PATH3, Layering((1, 2, 3), 3))
    assert (met.total_length, met.reversed, met.dummies, met.width, met.height) == (2, 0, {2: 0}, 1, 3)


def test_evaluate_spanning_arc():
    met = evaluate(ARC, Layering((1, 3), 3))
    assert met.dummies == {2: 1} and met.total_length == 2 and met.width == 1


def test_dummies_and_vertices_share_a_layer():
    g = DiGraph(3, ((0, 1), (0, 2)))
    met = evaluate(g, Layering((1, 3, 2), 3))
    assert met.dummies == {2: 1}
    assert met.layer_sizes == {1: 1, 2: 1, 3: 1}
    assert met.width == 2


def test_evaluate_rejects_shared_layer():
    with pytest.raises(LayeringError):
        evaluate(ARC, Layering((1, 1), 2))


def test_scale_example():
    s, s_bar = scale_factors(5, 10, F(1), F(2))
    assert s == F(1, 5) and s_bar == 5


def test_objective_examples():
    base = Metrics(2, 0, {}, {}, 1, 3, F(1), F(1))
    assert objective(base, WeightScheme(w_len=1, w_rev=10), Variant.GLP) == 2
    met = Metrics(1, 1, {}, {}, 2, 2, F(1, 2), F(2))
    assert objective(met, WeightScheme(w_len=1, w_rev=3, w_wid=5), Variant.GLP_W) == 14
    s, s_bar = scale_factors(8, 4, F(2), F(1))
    met = Metrics(0, 0, {}, {}, 8, 4, s, s_bar)
    ws = WeightScheme(w_len=0, w_rev=0, w_scl=7, r_w=2, r_h=1)
    assert objective(met, ws, Variant.GLP_MS_STAR) == 4 * 7
    assert objective(met, ws, Variant.GLP_MS) == -7 * F(1, 4)


def test_directed_variants_reject_reversals():
    met = evaluate(ARC, Layering((2, 1), 2))
    with pytest.raises(LayeringError):
        objective(met, WeightScheme(), Variant.DLP)
    with pytest.raises(LayeringError):
        layering_objective(ARC, Layering((2, 1), 2), WeightScheme(), "DLP_W")


def test_dlp_ignores_reversal_weight_and_width_variants_add_width():
    met = evaluate(PATH3, Layering((1, 2, 3), 3))
    ws = WeightScheme(w_len=2, w_rev=100, w_wid=3)
    assert objective(met, ws, Variant.DLP) == 4
    assert objective(met, ws, Variant.DLP_W) == 7
    assert objective(met, ws, Variant.GLP) == 4


@pytest.mark.parametrize("name", ["glp-ms*", "GLP_MS_STAR", "glp_msstar", " dlp-w "])
def test_variant_parse(name):
    assert Variant.parse(name) in (Variant.GLP_MS_STAR, Variant.DLP_W)


def test_variant_parse_unknown():
    with pytest.raises(ValueError):
        Variant.parse("XYZ")


@pytest.mark.parametrize(
    "layers, cap, expected",
    [((3, 5), 6, (1, 2)), ((1, 2, 3), 3, (1, 2, 3)), ((2, 2, 4), 4, (1, 1, 2))],
)
def test_normalize_layering(layers, cap, expected):
    out = normalize_layering(Layering(layers, cap))
    assert out.assignment == expected and out.y_cap == cap


@pytest.mark.parametrize(
    "area, expected",
    [((2, 4), (1, 2)), ((1, 1), (1, 1)), ((3, 2), (F(3, 2), 1))],
)
def test_normalize_area(area, expected):
    assert normalize_area(*area) == expected


def test_weight_validation():
    with pytest.raises(ValueError):
        WeightScheme(w_len=-1)
    with pytest.raises(ValueError):
        WeightScheme(r_w=0)
    assert WeightScheme(w_len="1/3").w_len == F(1, 3)


def test_layering_file_round_trip():
    l = Layering((2, 1, 3), 3)
    assert parse_layering(serialize_layering(l), 3, 3) == l
    for bad in ("0 1\n0 2\n1 1\n2 1", "0 1\n1 1", "0 x", "5 1"):
        with pytest.raises(LayeringError):
            parse_layering(bad, 3)


@settings(max_examples=300, deadline=None)
@given(graph_with_layering(max_n=7, max_m=10, max_y=6))
def test_metric_invariants(pair):
    g, l = pair
    met = evaluate(g, l)
    assert met.total_length >= g.m
    assert sum(met.dummies.values()) == met.total_length - g.m
    assert met.width == expanded_width(g, l)
    assert sum(met.layer_sizes.values()) == g.n
    if g.n:
        assert met.scale * met.inv_scale == 1


@settings(max_examples=200, deadline=None)
@given(graph_with_layering(max_n=7, max_m=10, max_y=6))
def test_reversing_all_arcs_swaps_reversals(pair):
    g, l = pair
    a, b = evaluate(g, l), evaluate(g.reversed(), l)
    assert a.reversed + b.reversed == g.m
    assert a.total_length == b.total_length and a.width == b.width


@settings(max_examples=200, deadline=None)
@given(graph_with_layering(max_n=7, max_m=10, max_y=6))
def test_normalize_is_idempotent_and_never_worse(pair):
    g, l = pair
    c = normalize_layering(l)
    assert normalize_layering(c) == c
    assert check_feasible(g, c)
    a, b = evaluate(g, l), evaluate(g, c)
    assert b.total_length <= a.total_length and b.reversed == a.reversed
    assert b.width <= a.width and b.height <= a.height


rationals = st.fractions(min_value=F(1, 20), max_value=20, max_denominator=20)


@settings(max_examples=200, deadline=None)
@given(rationals, rationals, st.integers(1, 30), st.integers(1, 30))
def test_scale_identities(r_w, r_h, w, h):
    s, s_bar = scale_factors(w, h, r_w, r_h)
    assert s == min(r_w / w, r_h / h) and s_bar == max(w / r_w, h / r_h) and s * s_bar == 1
    assert min(normalize_area(r_w, r_h)) == 1
