"""Directed multigraphs, edge-list / DOT ingestion and the random DAG generator."""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import TextIO

import numpy as np


class GraphFormatError(ValueError):
    """Raised for malformed graph input (bad lines, self-loops, ids out of range)."""


@dataclass(frozen=True)
class DiGraph:
    """Directed multigraph on vertices ``0..n-1``.

    Arcs are kept in insertion order and parallel arcs are allowed;
    every objective counts them separately.
    """

    n: int
    arcs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise GraphFormatError("vertex count must be non-negative")
        arcs = tuple((int(u), int(v)) for u, v in self.arcs)
        for u, v in arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphFormatError(f"arc ({u}, {v}) references a vertex outside 0..{self.n - 1}")
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
        object.__setattr__(self, "arcs", arcs)

    @property
    def m(self) -> int:
        return len(self.arcs)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.arcs:
            deg[u] += 1
            deg[v] += 1
        return deg

    def neighbors(self) -> list[set[int]]:
        """Underlying undirected adjacency as sets."""
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.arcs:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def reversed(self) -> "DiGraph":
        return DiGraph(self.n, tuple((v, u) for u, v in self.arcs))


_COMMENT = re.compile(r"#.*$")


def parse_edge_list(text: str | TextIO) -> DiGraph:
    """Read ``tail head`` lines with an optional leading ``n <count>`` header.

    Without a header the vertex count is ``1 + max id``. ``#`` starts a comment.
    """
    if not isinstance(text, str):
        text = text.read()
    n_header: int | None = None
    arcs: list[tuple[int, int]] = []
    seen_content = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _COMMENT.sub("", raw).strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if seen_content or len(parts) != 2:
                raise GraphFormatError(f"line {lineno}: header must be the first line and read 'n <count>'")
            try:
                n_header = int(parts[1])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
            if n_header < 0:
                raise GraphFormatError(f"line {lineno}: negative vertex count")
            seen_content = True
            continue
        seen_content = True
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'tail head', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer vertex id in {raw!r}") from None
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative vertex id")
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop at vertex {u}")
        if n_header is not None and max(u, v) >= n_header:
            raise GraphFormatError(f"line {lineno}: vertex id {max(u, v)} >= n = {n_header}")
        arcs.append((u, v))
    if n_header is None:
        n_header = 1 + max((max(a) for a in arcs), default=-1)
    return DiGraph(n_header, tuple(arcs))


def serialize_edge_list(g: DiGraph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.arcs)
    return "\n".join(lines) + "\n"


_DOT_HEADER = re.compile(r"^\s*(strict\s+)?digraph\s*(\"[^\"]*\"|[A-Za-z_][\w]*)?\s*\{(?P<body>.*)\}\s*$", re.S)
_DOT_ID = r'(?:"[^"]*"|[A-Za-z_\d.][\w.]*)'
_DOT_STMT = re.compile(rf"^({_DOT_ID})(\s*->\s*{_DOT_ID})*$")


def parse_dot(text: str | TextIO) -> tuple[DiGraph, list[str]]:
    """Read the restricted DOT subset ``digraph { a -> b -> c; d; }``.

    Identifiers are numbered densely in order of first appearance; the
    returned label list maps ids back to names. Attribute lists are
    not supported.
    """
    if not isinstance(text, str):
        text = text.read()
    text = re.sub(r"//[^\n]*", "", text)
    text = re.sub(r"/\*.*?\*/", "", text, flags=re.S)
    match = _DOT_HEADER.match(text)
    if match is None:
        raise GraphFormatError("expected 'digraph { ... }'")
    labels: list[str] = []
    index: dict[str, int] = {}

    def vid(token: str) -> int:
        token = token.strip()
        if token.startswith('"'):
            token = token[1:-1]
        if token not in index:
            index[token] = len(labels)
            labels.append(token)
        return index[token]

    arcs: list[tuple[int, int]] = []
    for stmt in re.split(r"[;\n]", match.group("body")):
        stmt = stmt.strip()
        if not stmt:
            continue
        if not _DOT_STMT.match(stmt):
            raise GraphFormatError(f"unsupported DOT statement {stmt!r}")
        chain = [vid(tok) for tok in re.split(r"\s*->\s*", stmt)]
        for u, v in zip(chain, chain[1:]):
            if u == v:
                raise GraphFormatError(f"self-loop at {labels[u]!r}")
            arcs.append((u, v))
    return DiGraph(len(labels), tuple(arcs)), labels


def read_graph(path: str) -> DiGraph:
    """Load a graph file, dispatching on a ``.dot``/``.gv`` suffix."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith((".dot", ".gv")):
        return parse_dot(text)[0]
    return parse_edge_list(text)


def topological_order(g: DiGraph) -> list[int] | None:
    """Kahn's algorithm with smallest-id-first; ``None`` if a cycle exists."""
    indeg = [0] * g.n
    succ: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in g.arcs:
        succ[u].append(v)
        indeg[v] += 1
    heap = [v for v in range(g.n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        u = heapq.heappop(heap)
        order.append(u)
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(heap, v)
    return order if len(order) == g.n else None


def is_acyclic(g: DiGraph) -> bool:
    return topological_order(g) is not None


def longest_path_layering(g: DiGraph) -> list[int]:
    """Classic longest-path layering (sources on layer 1); requires a DAG."""
    order = topological_order(g)
    if order is None:
        raise ValueError("longest-path layering needs an acyclic graph")
    preds: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in g.arcs:
        preds[v].append(u)
    layer = [1] * g.n
    for v in order:
        if preds[v]:
            layer[v] = 1 + max(layer[u] for u in preds[v])
    return layer


def min_feasible_layers(g: DiGraph) -> int:
    """Greedy colouring of the underlying undirected graph in id order.

    The result bounds the chromatic number from above, so a feasible
    generalized layering exists for every layer cap at least this large.
    """
    if g.n == 0:
        return 0
    adj = g.neighbors()
    color = [0] * g.n
    for v in range(g.n):
        used = {color[u] for u in adj[v] if u < v}
        c = 1
        while c in used:
            c += 1
        color[v] = c
    return max(color)


# ---------------------------------------------------------------------------
# random instances


@dataclass(frozen=True)
class GenSpec:
    """Parameters of one random DAG draw.

    ``density_factor`` is arcs per requested vertex (1.5 for the
    benchmark corpus); the PRNG is numpy's PCG64 seeded with ``seed``.
    """

    n_target: int
    density_factor: Fraction = Fraction(3, 2)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "density_factor", Fraction(self.density_factor))
        if self.n_target < 2:
            raise ValueError("n_target must be at least 2")
        if self.density_factor <= 0:
            raise ValueError("density_factor must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

    @property
    def arc_count(self) -> int:
        """round(density * n) with halves rounded up."""
        x = self.density_factor * self.n_target
        return int((x + Fraction(1, 2)).__floor__())


def _draw_arcs(spec: GenSpec, rng: np.random.Generator) -> list[tuple[int, int]]:
    n, m = spec.n_target, spec.arc_count
    if m > n * (n - 1) // 2:
        raise ValueError(f"{m} arcs do not fit into a simple DAG on {n} vertices")
    # tail i may point to any higher id; capacity n-1-i distinct targets
    capacity = [n - 1 - i for i in range(n)]
    outdeg = [0] * n
    for _ in range(m):
        open_tails = [i for i in range(n) if outdeg[i] < capacity[i]]
        outdeg[open_tails[int(rng.integers(len(open_tails)))]] += 1
    arcs = []
    for u in range(n):
        if outdeg[u] == 0:
            continue
        pool = list(range(u + 1, n))
        for _ in range(outdeg[u]):
            arcs.append((u, pool.pop(int(rng.integers(len(pool))))))
    return arcs


def generate_random(spec: GenSpec) -> DiGraph:
    """Random acyclic graph with ``spec.arc_count`` arcs before compaction.

    Out-degrees are drawn by assigning each arc to a uniformly random tail
    that still has room; targets are drawn without replacement among higher
    ids, so the result is simple and acyclic. Labels are then shuffled,
    isolated vertices dropped and the survivors renumbered densely in
    label order.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    arcs = _draw_arcs(spec, rng)
    perm = [int(p) for p in rng.permutation(spec.n_target)]
    arcs = [(perm[u], perm[v]) for u, v in arcs]
    used = sorted({x for arc in arcs for x in arc})
    relabel = {old: new for new, old in enumerate(used)}
    arcs.sort()
    return DiGraph(len(used), tuple((relabel[u], relabel[v]) for u, v in arcs))


def random_digraph(n: int, m: int, rng: np.random.Generator) -> DiGraph:
    """Uniform random multigraph without self-loops (may be cyclic); for tests and corpora."""
    arcs = []
    while len(arcs) < m:
        u, v = (int(x) for x in rng.integers(n, size=2))
        if u != v:
            arcs.append((u, v))
    return DiGraph(n, tuple(arcs))

