"""Perfect-matching subroutines: max/min weight, minimum red count, any PM.

Bipartite graphs go to an integer Hungarian method; everything else goes to
the blossom implementation shipped with networkx (exact on integer weights).
A brute-force engine backed by the oracle exists for cross-checking.
All functions return a ``frozenset`` of edge indices or ``None`` when no
perfect matching exists.
"""

from __future__ import annotations

import enum
from typing import Sequence

import networkx as nx

from . import oracle
from .errors import InvalidParameter, Unsupported
from .graph import ColoredWeightedGraph


class EngineKind(enum.Enum):
    BIPARTITE_EXACT = "bipartite"
    GENERAL_BLOSSOM = "blossom"
    BRUTE_FORCE = "brute"


BRUTE_FORCE_CAP = 20


def _hungarian_min_cost(cost: list[list[int | None]]) -> list[int] | None:
    """Min-cost assignment on a square matrix; ``None`` entries are forbidden.

    Shortest-augmenting-path Hungarian method with integer potentials, O(n^3).
    Returns ``assign[row] = col`` or None if every assignment uses a forbidden entry.
    """
    n = len(cost)
    if n == 0:
        return []
    finite = [abs(c) for row in cost for c in row if c is not None]
    big = 2 * (n * (max(finite, default=0) + 1)) + 1
    a = [[big if c is None else c for c in row] for row in cost]
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [None] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            row = a[i0 - 1]
            delta = None
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = row[j - 1] - u[i0] - v[j]
                if minv[j] is None or cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if delta is None or minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    assign = [0] * n
    for j in range(1, n + 1):
        assign[p[j] - 1] = j - 1
    if any(cost[r][c] is None for r, c in enumerate(assign)):
        return None
    return assign


def _bipartite_max(graph: ColoredWeightedGraph, weights: Sequence[int], sides) -> frozenset | None:
    left = [x for x in range(graph.n) if sides[x] == 0]
    right = [x for x in range(graph.n) if sides[x] == 1]
    if len(left) != len(right):
        return None
    col = {x: j for j, x in enumerate(right)}
    row = {x: i for i, x in enumerate(left)}
    cost: list[list[int | None]] = [[None] * len(right) for _ in left]
    for i, e in enumerate(graph.edges):
        a, b = (e.u, e.v) if sides[e.u] == 0 else (e.v, e.u)
        cost[row[a]][col[b]] = -weights[i]
    assign = _hungarian_min_cost(cost)
    if assign is None:
        return None
    return frozenset(graph.edge_between(left[r], right[c]) for r, c in enumerate(assign))


def _blossom_max(graph: ColoredWeightedGraph, weights: Sequence[int]) -> frozenset | None:
    if graph.n % 2:
        return None
    if graph.n == 0:
        return frozenset()
    # Shift to strictly positive weights; all perfect matchings have n/2 edges
    # so the maximiser among perfect matchings does not move.
    shift = max((abs(w) for w in weights), default=0) + 1
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    for i, e in enumerate(graph.edges):
        g.add_edge(e.u, e.v, weight=weights[i] + shift)
    pairs = nx.max_weight_matching(g, maxcardinality=True)
    if 2 * len(pairs) != graph.n:
        return None
    return frozenset(graph.edge_between(a, b) for a, b in pairs)


def max_weight_pm(
    graph: ColoredWeightedGraph,
    weights: Sequence[int] | None = None,
    engine: EngineKind | None = None,
) -> frozenset | None:
    """Perfect matching of maximum total ``weights`` (signed integers allowed)."""
    ws = list(graph.weights if weights is None else weights)
    if len(ws) != graph.m:
        raise InvalidParameter("one weight per edge is required")
    if engine is None:
        engine = EngineKind.BIPARTITE_EXACT if graph.is_bipartite else EngineKind.GENERAL_BLOSSOM
    if engine is EngineKind.BIPARTITE_EXACT:
        sides = graph.sides
        if sides is None:
            raise InvalidParameter("bipartite engine on a non-bipartite graph")
        return _bipartite_max(graph, ws, sides)
    if engine is EngineKind.GENERAL_BLOSSOM:
        return _blossom_max(graph, ws)
    if graph.n > BRUTE_FORCE_CAP:
        raise Unsupported(f"brute force limited to {BRUTE_FORCE_CAP} vertices")
    return oracle.max_weight_pm(graph, ws, cap=BRUTE_FORCE_CAP)


def min_weight_pm(graph, weights=None, engine=None):
    ws = graph.weights if weights is None else weights
    return max_weight_pm(graph, [-w for w in ws], engine)


def min_red_pm(graph, engine=None):
    """Perfect matching with the fewest red edges (red weighs -1, blue 0)."""
    return max_weight_pm(graph, [-1 if r else 0 for r in graph.red], engine)


def any_pm(graph, engine=None):
    return max_weight_pm(graph, [0] * graph.m, engine)
