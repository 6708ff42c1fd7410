"""Brute-force ground truth by enumerating every perfect matching.

Only meant for small graphs; everything here refuses inputs above ``cap``
vertices.
"""

from __future__ import annotations

from typing import Iterator

from .errors import InvalidParameter, Unsupported
from .graph import ColoredWeightedGraph, top_k_weight

DEFAULT_CAP = 20


def _check_cap(graph: ColoredWeightedGraph, cap: int) -> None:
    if graph.n > cap:
        raise Unsupported(f"{graph.n} vertices exceeds the brute-force cap of {cap}")


def enumerate_pms(graph: ColoredWeightedGraph, cap: int = DEFAULT_CAP) -> Iterator[frozenset]:
    """Yield every perfect matching exactly once.

    Recurses on the lowest-index uncovered vertex and tries its partners in
    ascending order, so the output order is deterministic.
    """
    _check_cap(graph, cap)
    if graph.n % 2:
        return
    n = graph.n
    nbrs = [sorted((graph.edges[i].other(x), i) for i in graph.incident[x]) for x in range(n)]
    covered = [False] * n
    chosen: list[int] = []

    def rec(x: int):
        while x < n and covered[x]:
            x += 1
        if x == n:
            yield frozenset(chosen)
            return
        covered[x] = True
        for y, i in nbrs[x]:
            if covered[y]:
                continue
            covered[y] = True
            chosen.append(i)
            yield from rec(x + 1)
            chosen.pop()
            covered[y] = False
        covered[x] = False

    yield from rec(0)


def _best(graph, cap, key, accept=lambda m: True):
    best = None
    best_key = None
    for m in enumerate_pms(graph, cap):
        if not accept(m):
            continue
        kv = key(m)
        if best is None or kv > best_key:
            best, best_key = m, kv
    return best, best_key


def max_weight_pm(graph: ColoredWeightedGraph, weights=None, cap: int = DEFAULT_CAP):
    """Maximum-weight perfect matching, or None when there is none."""
    ws = graph.weights if weights is None else weights
    m, _ = _best(graph, cap, lambda m: sum(ws[i] for i in m))
    return m


def em_oracle(graph: ColoredWeightedGraph, k: int, cap: int = DEFAULT_CAP):
    """A perfect matching with exactly ``k`` red edges, or None for a "No" instance."""
    for m in enumerate_pms(graph, cap):
        if graph.red_count(m) == k:
            return m
    return None


def red_counts(graph: ColoredWeightedGraph, cap: int = DEFAULT_CAP) -> set[int]:
    return {graph.red_count(m) for m in enumerate_pms(graph, cap)}


def ewpm_oracle(graph: ColoredWeightedGraph, W: int, cap: int = DEFAULT_CAP):
    for m in enumerate_pms(graph, cap):
        if graph.weight_of(m) == W:
            return m
    return None


def mwem_oracle(graph: ColoredWeightedGraph, k: int, cap: int = DEFAULT_CAP):
    """(weight, matching) of the heaviest perfect matching with exactly ``k`` red edges, or None."""
    m, w = _best(graph, cap, graph.weight_of, lambda m: graph.red_count(m) == k)
    return None if m is None else (w, m)


def _check_k(graph, k):
    if not 0 <= k <= graph.n // 2:
        raise InvalidParameter(f"k={k} outside [0, {graph.n // 2}]")


def tkpm_oracle(graph: ColoredWeightedGraph, k: int, cap: int = DEFAULT_CAP):
    """(optimal top-k weight, witness) or None when the graph has no perfect matching."""
    _check_k(graph, k)
    m, w = _best(graph, cap, lambda m: top_k_weight(graph, m, k))
    return None if m is None else (w, m)


def min_tkpm_oracle(graph: ColoredWeightedGraph, k: int, cap: int = DEFAULT_CAP):
    _check_k(graph, k)
    m, w = _best(graph, cap, lambda m: -top_k_weight(graph, m, k))
    return None if m is None else (-w, m)
