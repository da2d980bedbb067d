import re
import xml.etree.ElementTree as ET

import pytest

from layerforge.graph import DiGraph
from layerforge.metrics import Layering, LayeringError
from layerforge.render import DASH_DOT, layout, render_svg

NS = {"s": "http://www.w3.org/2000/svg"}


def parse(svg):
    return ET.fromstring(svg)


def test_path_has_three_rows_and_straight_arcs():
    g = DiGraph(3, ((0, 1), (1, 2)))
    root = parse(render_svg(g, Layering((1, 2, 3), 3)))
    assert len(root.findall("s:line[@class='layer']", NS)) == 3
    arcs = root.findall("s:polyline", NS)
    assert [a.get("class") for a in arcs] == ["arc", "arc"]
    assert all(len(a.get("points").split()) == 2 for a in arcs)
    assert root.findall("s:circle[@class='dummy']", NS) == []
    xy, _, _, _ = layout(g, Layering((1, 2, 3), 3))
    assert xy[0][1] < xy[1][1] < xy[2][1]  # layer 1 on top


def test_spanning_arc_gets_a_dummy_on_the_middle_row():
    g = DiGraph(2, ((0, 1),))
    root = parse(render_svg(g, Layering((1, 3), 3)))
    dummies = root.findall("s:circle[@class='dummy']", NS)
    assert [(d.get("data-arc"), d.get("data-layer")) for d in dummies] == [("0", "2")]
    assert len(root.find("s:polyline", NS).get("points").split()) == 3


def test_reversed_arc_is_dash_dotted():
    g = DiGraph(3, ((0, 1), (2, 1)))
    svg = render_svg(g, Layering((1, 2, 3), 3))
    arcs = {a.get("data-arc"): a for a in parse(svg).findall("s:polyline", NS)}
    assert arcs["0"].get("stroke-dasharray") is None
    assert arcs["1"].get("stroke-dasharray") == DASH_DOT and arcs["1"].get("class") == "arc reversed"


def test_labels_are_escaped_and_output_is_deterministic():
    g = DiGraph(2, ((0, 1),))
    a = render_svg(g, Layering((2, 1), 2), labels=["a<b", "c"])
    assert a == render_svg(g, Layering((2, 1), 2), labels=["a<b", "c"])
    assert "a&lt;b" in a
    assert re.search(r'data-vertex="1"', a)


def test_render_rejects_shared_layer():
    with pytest.raises(LayeringError):
        render_svg(DiGraph(2, ((0, 1),)), Layering((1, 1), 1))
