import math
from fractions import Fraction as F

import pytest

from layerforge.bench import bucket_of, resolve_setup
from layerforge.graph import DiGraph
from layerforge.metrics import Variant
from layerforge.presets import PRESETS, make_preset, width_layer_cap


def graph(n, m):
    return DiGraph(n, tuple((i % n, (i + 1) % n) for i in range(m)))


@pytest.mark.parametrize("n", [1, 2, 4, 10, 20, 25, 36, 50, 64, 99, 100, 400])
def test_width_layer_cap_table(n):
    # float reference is safe here: none of these sizes hits an exact boundary
    assert width_layer_cap(n) == math.ceil(1.6 * math.sqrt(n))


def test_exp1_at_36_vertices():
    p = make_preset("exp1", graph(36, 50))
    assert p.Y == 10
    assert (p.weights.w_len, p.weights.w_rev, p.weights.w_wid) == (1, 10 * 50, 1)
    assert p.variant is Variant.GLP_W


def test_exp2_width_weight():
    p = make_preset("exp2", graph(20, 30))
    Y = 8
    assert p.Y == Y and p.weights.w_rev == Y * 30
    assert p.weights.w_wid == Y * 30 * 30 + 30 * Y + 1


@pytest.mark.parametrize("name, r_w, r_h", [("ms_1_2", 2, 1), ("ms_1_1", 1, 1), ("ms_2_1", 1, 2)])
def test_scale_presets(name, r_w, r_h):
    g = graph(12, 18)
    p = make_preset(name, g)
    assert p.Y == 12 and p.variant is Variant.GLP_MS_STAR
    assert p.weights.w_rev == 12 * 18 and p.weights.w_scl == 12 * 18 * 18 + 18 * 12 + 1
    assert (p.weights.r_w, p.weights.r_h) == (r_w, r_h)
    assert make_preset(name, g, "GLP_MS").variant is Variant.GLP_MS


def test_unknown_preset():
    with pytest.raises(ValueError):
        make_preset("exp3", graph(3, 2))
    assert len(PRESETS) == 5


def test_resolve_setup_overrides():
    g = graph(9, 9)
    s = resolve_setup(g, "exp1", None, None, {"w_len": F(2), "r_w": None})
    assert s.Y == 5 and s.weights.w_len == 2 and s.weights.w_rev == 45
    s = resolve_setup(g)
    assert (s.Y, s.variant) == (9, Variant.GLP)


@pytest.mark.parametrize("n, name", [(0, "|V|<=30"), (30, "|V|<=30"), (31, "31<=|V|<=45"), (60, "46<=|V|<=60"),
                                     (61, "|V|>60")])
def test_buckets(n, name):
    assert bucket_of(n) == name
