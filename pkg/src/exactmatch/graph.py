"""Colored, weighted graphs, perfect matchings and alternating cycles.

Vertices are the integers ``0..n-1``. Every edge carries a positive integer
weight (Python ints, so arbitrarily large weights are exact) and a color.
Matchings are plain ``frozenset`` objects holding edge indices.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import InvalidParameter

Matching = frozenset


class Color(str, enum.Enum):
    RED = "r"
    BLUE = "b"


RED = Color.RED
BLUE = Color.BLUE


class Edge(NamedTuple):
    u: int
    v: int
    weight: int
    color: Color

    @property
    def key(self) -> tuple[int, int]:
        return (self.u, self.v) if self.u < self.v else (self.v, self.u)

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u


@dataclass(frozen=True)
class ColoredWeightedGraph:
    """Undirected simple graph with per-edge weight and red/blue color.

    ``bipartition`` optionally assigns side 0 or 1 to every vertex.
    Construction does not validate; use :func:`validate_graph`.
    """

    n: int
    edges: tuple[Edge, ...]
    bipartition: tuple[int, ...] | None = None
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence], bipartition=None, meta=None):
        """Build from ``(u, v, weight[, color])`` tuples; color defaults to blue."""
        out = []
        for e in edges:
            u, v, w = int(e[0]), int(e[1]), int(e[2])
            c = Color(e[3]) if len(e) > 3 else BLUE
            out.append(Edge(u, v, w, c))
        part = tuple(int(s) for s in bipartition) if bipartition is not None else None
        return cls(n, tuple(out), part, dict(meta or {}))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {e.key: i for i, e in enumerate(self.edges)}

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            inc[e.u].append(i)
            if e.v != e.u:
                inc[e.v].append(i)
        return tuple(tuple(x) for x in inc)

    def edge_between(self, u: int, v: int) -> int | None:
        return self.index.get((u, v) if u < v else (v, u))

    @cached_property
    def weights(self) -> tuple[int, ...]:
        return tuple(e.weight for e in self.edges)

    @cached_property
    def red(self) -> tuple[bool, ...]:
        return tuple(e.color is RED for e in self.edges)

    @cached_property
    def max_weight(self) -> int:
        return max(self.weights, default=0)

    @cached_property
    def ordering(self) -> "EdgeOrdering":
        return EdgeOrdering.of(self)

    @cached_property
    def sides(self) -> tuple[int, ...] | None:
        """A valid 2-coloring of the vertices, or None if the graph has an odd cycle.

        The declared bipartition wins when it is consistent with the edges.
        """
        if self.bipartition is not None:
            if all(self.bipartition[e.u] != self.bipartition[e.v] for e in self.edges):
                return self.bipartition
            return None
        side = [-1] * self.n
        for root in range(self.n):
            if side[root] >= 0:
                continue
            side[root] = 0
            queue = deque([root])
            while queue:
                x = queue.popleft()
                for i in self.incident[x]:
                    y = self.edges[i].other(x)
                    if side[y] < 0:
                        side[y] = 1 - side[x]
                        queue.append(y)
                    elif side[y] == side[x]:
                        return None
        return tuple(side)

    @property
    def is_bipartite(self) -> bool:
        return self.sides is not None

    # -- matching helpers -------------------------------------------------

    def weight_of(self, matching: Iterable[int], weights: Sequence[int] | None = None) -> int:
        ws = self.weights if weights is None else weights
        return sum(ws[i] for i in matching)

    def red_count(self, matching: Iterable[int]) -> int:
        return sum(1 for i in matching if self.red[i])

    def is_matching(self, matching: Iterable[int]) -> bool:
        seen = set()
        for i in matching:
            if not 0 <= i < self.m:
                return False
            e = self.edges[i]
            if e.u in seen or e.v in seen:
                return False
            seen.add(e.u)
            seen.add(e.v)
        return True

    def is_perfect_matching(self, matching: Iterable[int]) -> bool:
        matching = list(matching)
        return 2 * len(matching) == self.n and self.is_matching(matching)

    def mate(self, matching: Iterable[int]) -> list[int]:
        """Partner of every vertex under ``matching`` (-1 when exposed)."""
        mate = [-1] * self.n
        for i in matching:
            e = self.edges[i]
            mate[e.u] = e.v
            mate[e.v] = e.u
        return mate

    def with_edges(self, edges: Iterable[Edge], **meta) -> "ColoredWeightedGraph":
        """Same vertex set and bipartition, new edge list."""
        return ColoredWeightedGraph(self.n, tuple(edges), self.bipartition, {**self.meta, **meta})

    def recolored(self, colors: Sequence[Color], weights: Sequence[int] | None = None):
        ws = self.weights if weights is None else weights
        return self.with_edges(
            Edge(e.u, e.v, int(w), c) for e, w, c in zip(self.edges, ws, colors)
        )


class EdgeOrdering:
    """Strict total order on edges: decreasing weight, ties by (min, max) endpoint.

    ``order[r]`` is the edge at rank ``r``; ``rank[i]`` is the rank of edge ``i``.
    """

    __slots__ = ("order", "rank")

    def __init__(self, order: Sequence[int]):
        self.order = tuple(order)
        rank = [0] * len(self.order)
        for r, i in enumerate(self.order):
            rank[i] = r
        self.rank = tuple(rank)

    @classmethod
    def of(cls, graph: ColoredWeightedGraph, weights: Sequence[int] | None = None):
        ws = graph.weights if weights is None else weights
        keys = [(-ws[i], *graph.edges[i].key) for i in range(graph.m)]
        return cls(sorted(range(graph.m), key=keys.__getitem__))

    def __len__(self) -> int:
        return len(self.order)

    def sort(self, edges: Iterable[int]) -> list[int]:
        return sorted(edges, key=self.rank.__getitem__)

    def key_sequence(self, graph: ColoredWeightedGraph) -> list[tuple[int, int, int]]:
        """The ordering expressed as (weight, u, v) triples, independent of edge indices."""
        return [(graph.edges[i].weight, *graph.edges[i].key) for i in self.order]


def top_k_weight(graph: ColoredWeightedGraph, matching: Iterable[int], k: int) -> int:
    """Sum of the weights of the ``k`` earliest edges of ``matching`` in the edge ordering."""
    matching = list(matching)
    if k < 0 or k > len(matching):
        raise InvalidParameter(f"k={k} outside [0, {len(matching)}]")
    first = graph.ordering.sort(matching)[:k]
    return sum(graph.weights[i] for i in first)


# -- alternating cycles ----------------------------------------------------


@dataclass(frozen=True)
class Cycle:
    """A simple cycle given by its vertex sequence and the edges joining consecutive vertices."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.edges)

    @classmethod
    def from_vertices(cls, graph: ColoredWeightedGraph, vertices: Sequence[int]) -> "Cycle":
        vs = tuple(vertices)
        es = []
        for a, b in zip(vs, vs[1:] + vs[:1]):
            i = graph.edge_between(a, b)
            if i is None:
                raise InvalidParameter(f"no edge between {a} and {b}")
            es.append(i)
        return cls(vs, tuple(es))


CycleSet = tuple  # tuple[Cycle, ...]


def symmetric_difference(graph: ColoredWeightedGraph, m1: Iterable[int], m2: Iterable[int]) -> tuple[Cycle, ...]:
    """Decompose ``m1 Δ m2`` of two perfect matchings into disjoint alternating cycles."""
    m1, m2 = frozenset(m1), frozenset(m2)
    if not (graph.is_perfect_matching(m1) and graph.is_perfect_matching(m2)):
        raise InvalidParameter("symmetric_difference needs two perfect matchings")
    mate1, mate2 = graph.mate(m1), graph.mate(m2)
    done = [False] * graph.n
    cycles = []
    for start in range(graph.n):
        if done[start] or mate1[start] == mate2[start]:
            continue
        vs = []
        x, use_first = start, True
        while True:
            vs.append(x)
            done[x] = True
            x = mate1[x] if use_first else mate2[x]
            use_first = not use_first
            if x == start:
                break
        cycles.append(Cycle.from_vertices(graph, vs))
    return tuple(cycles)


def apply_cycles(graph: ColoredWeightedGraph, matching: Iterable[int], cycles: Iterable[Cycle]) -> frozenset:
    """Return ``matching Δ cycles`` after checking the cycles are disjoint and alternating."""
    matching = frozenset(matching)
    used: set[int] = set()
    flip: set[int] = set()
    for cyc in cycles:
        if len(cyc.edges) % 2 or len(set(cyc.vertices)) != len(cyc.vertices):
            raise InvalidParameter("cycle is not a simple even cycle")
        if used.intersection(cyc.vertices):
            raise InvalidParameter("cycles share a vertex")
        used.update(cyc.vertices)
        inside = [i in matching for i in cyc.edges]
        if any(inside[j] == inside[j - 1] for j in range(len(inside))):
            raise InvalidParameter("cycle is not alternating with respect to the matching")
        flip.update(cyc.edges)
    return matching.symmetric_difference(flip)


def red_delta(graph: ColoredWeightedGraph, matching: Iterable[int], cycle: Cycle) -> int:
    """Change in red-edge count caused by flipping ``cycle``."""
    matching = frozenset(matching)
    return sum((-1 if i in matching else 1) for i in cycle.edges if graph.red[i])


def weight_delta(graph: ColoredWeightedGraph, matching: Iterable[int], cycle: Cycle, weights=None) -> int:
    ws = graph.weights if weights is None else weights
    matching = frozenset(matching)
    return sum((-ws[i] if i in matching else ws[i]) for i in cycle.edges)


def validate_graph(graph: ColoredWeightedGraph) -> list[str]:
    """List every violated invariant; an empty list means the graph is valid."""
    problems = []
    if graph.n < 0:
        problems.append(f"negative vertex count {graph.n}")
    seen = set()
    for i, e in enumerate(graph.edges):
        if not (0 <= e.u < graph.n and 0 <= e.v < graph.n):
            problems.append(f"edge {i}: endpoint out of range")
            continue
        if e.u == e.v:
            problems.append(f"edge {i}: self-loop at {e.u}")
            continue
        if e.key in seen:
            problems.append(f"edge {i}: duplicate edge {e.key}")
        seen.add(e.key)
        if not isinstance(e.weight, int) or e.weight < 1:
            problems.append(f"edge {i}: weight {e.weight!r} is not a positive integer")
        if not isinstance(e.color, Color):
            problems.append(f"edge {i}: unknown color {e.color!r}")
    if graph.bipartition is not None:
        if len(graph.bipartition) != graph.n or any(s not in (0, 1) for s in graph.bipartition):
            problems.append("bipartition must give side 0 or 1 for every vertex")
        else:
            for i, e in enumerate(graph.edges):
                if 0 <= e.u < graph.n and 0 <= e.v < graph.n and graph.bipartition[e.u] == graph.bipartition[e.v]:
                    problems.append(f"edge {i}: both endpoints on side {graph.bipartition[e.u]}")
    return problems
