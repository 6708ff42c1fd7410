"""Directed auxiliary graphs and the two constrained dynamic programs.

* :func:`find_positive_cycle_bounded` -- Bellman-Ford with an extra budget
  dimension: finds a directed cycle of positive weight using at most ``k``
  units of budget (by default one unit per positive arc).
* :func:`dag_exact_constrained_path` -- heaviest path in a DAG with exact
  numbers of matching-red and non-matching-red arcs.
"""

from __future__ import annotations

import enum
import graphlib
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameter
from .graph import ColoredWeightedGraph, Cycle


class ArcLabel(enum.Enum):
    MATCHING_RED = "rm"
    NONMATCHING_RED = "rn"
    OTHER = "-"


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    weight: int
    edge: int = -1
    label: ArcLabel = ArcLabel.OTHER
    cost: int | None = None

    @property
    def positive(self) -> bool:
        return self.weight > 0

    @property
    def budget(self) -> int:
        """Budget consumed by the arc in the bounded-cycle search."""
        if self.cost is not None:
            return self.cost
        return 1 if self.weight > 0 else 0


@dataclass(frozen=True)
class DirectedAuxGraph:
    n: int
    arcs: tuple[Arc, ...]

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable) -> "DirectedAuxGraph":
        out = []
        for a in arcs:
            out.append(a if isinstance(a, Arc) else Arc(int(a[0]), int(a[1]), int(a[2])))
        return cls(n, tuple(out))

    def provenance(self) -> dict[int, int]:
        """Arc index -> original edge index."""
        return {j: a.edge for j, a in enumerate(self.arcs) if a.edge >= 0}

    def cycle_weight(self, arc_ids: Sequence[int]) -> int:
        return sum(self.arcs[j].weight for j in arc_ids)

    def cycle_budget(self, arc_ids: Sequence[int]) -> int:
        return sum(self.arcs[j].budget for j in arc_ids)

    def is_simple_cycle(self, arc_ids: Sequence[int]) -> bool:
        if not arc_ids:
            return False
        arcs = [self.arcs[j] for j in arc_ids]
        for a, b in zip(arcs, arcs[1:] + arcs[:1]):
            if a.head != b.tail:
                return False
        tails = [a.tail for a in arcs]
        return len(set(tails)) == len(tails)


# -- weighting rules for G_M -----------------------------------------------


@dataclass(frozen=True)
class RedUnit:
    """Blue arcs 0, red matching arcs -1, red non-matching arcs +1."""


@dataclass(frozen=True)
class ThresholdSigned:
    """Thresholded weight ``max(w - t, 0)``, negated on matching arcs.

    ``weights`` overrides the graph's own weights (e.g. scaled copies).
    """

    t: int
    weights: tuple[int, ...] | None = None


@dataclass(frozen=True)
class RedMultiplicity:
    """Each edge counts ``mult[e]`` red units; arcs consume that much budget.

    This is the path-contracted view of the weight-to-red-path gadget: a
    gadget path for edge ``e`` carries ``mult[e]`` red edges.
    """

    mult: tuple[int, ...]


WeightingRule = RedUnit | ThresholdSigned | RedMultiplicity


def build_aux_graph(graph: ColoredWeightedGraph, matching, rule: WeightingRule = RedUnit(), sides=None) -> DirectedAuxGraph:
    """Orient matching edges from side 0 to side 1, all others from side 1 to side 0.

    With this orientation every directed cycle alternates with respect to the
    matching, and the arc weights give the change of the objective when the
    cycle is flipped.
    """
    sides = graph.sides if sides is None else sides
    if sides is None:
        raise InvalidParameter("auxiliary graph needs a bipartite graph")
    matching = frozenset(matching)
    if not graph.is_perfect_matching(matching):
        raise InvalidParameter("auxiliary graph needs a perfect matching")
    arcs = []
    for i, e in enumerate(graph.edges):
        inside = i in matching
        a, b = (e.u, e.v) if sides[e.u] == 0 else (e.v, e.u)
        tail, head = (a, b) if inside else (b, a)
        red = graph.red[i]
        label = ArcLabel.OTHER
        if red:
            label = ArcLabel.MATCHING_RED if inside else ArcLabel.NONMATCHING_RED
        cost = None
        if isinstance(rule, RedUnit):
            w = (-1 if inside else 1) if red else 0
        elif isinstance(rule, ThresholdSigned):
            base = graph.weights[i] if rule.weights is None else rule.weights[i]
            wt = max(base - rule.t, 0)
            w = -wt if inside else wt
        elif isinstance(rule, RedMultiplicity):
            mu = rule.mult[i]
            w = -mu if inside else mu
            cost = 0 if inside else mu
        else:
            raise InvalidParameter(f"unknown weighting rule {rule!r}")
        arcs.append(Arc(tail, head, w, i, label, cost))
    return DirectedAuxGraph(graph.n, tuple(arcs))


def arcs_to_cycle(graph: ColoredWeightedGraph, aux: DirectedAuxGraph, arc_ids: Sequence[int]) -> Cycle:
    arcs = [aux.arcs[j] for j in arc_ids]
    return Cycle(tuple(a.tail for a in arcs), tuple(a.edge for a in arcs))


# -- bounded positive cycle ------------------------------------------------


@dataclass
class CycleSearchStats:
    rounds: int = 0
    sources_scanned: int = 0


def _split_closed_walk(arcs: Sequence[Arc], arc_ids: Sequence[int]) -> list[list[int]]:
    """Decompose a closed walk into simple cycles (each a list of arc ids)."""
    cycles = []
    stack: list[int] = []
    pos: dict[int, int] = {}
    for j in arc_ids:
        a = arcs[j]
        pos[a.tail] = len(stack)
        stack.append(j)
        if a.head in pos:
            start = pos[a.head]
            cyc = stack[start:]
            del stack[start:]
            for jj in cyc:
                pos.pop(arcs[jj].tail, None)
            cycles.append(cyc)
    return cycles


_INT64_SAFE = 1 << 52


def _detect(aux: DirectedAuxGraph, k: int, stats: CycleSearchStats) -> tuple[int, int] | None:
    """Fill d(s, v, c) for all sources at once; return the first (level, source) with d(s, s, c) < 0."""
    n = aux.n
    arcs = aux.arcs
    if n == 0 or not arcs:
        return None
    bound = sum(abs(a.weight) for a in arcs) + 1
    dtype = np.int64 if bound < _INT64_SAFE else object
    inf = _INT64_SAFE * 4 if dtype is np.int64 else None
    if dtype is object:
        inf = bound * 4
    tail = np.array([a.tail for a in arcs])
    head = np.array([a.head for a in arcs])
    wbar = np.array([-a.weight for a in arcs], dtype=dtype)
    cost = np.array([a.budget for a in arcs])
    free = cost == 0
    ft, fh, fw = tail[free], head[free], wbar[free]
    diag = np.arange(n)
    table = np.empty((k + 1, n, n), dtype=dtype)  # table[c, v, s]
    for c in range(k + 1):
        cur = np.full((n, n), inf, dtype=dtype)
        cur[diag, diag] = 0
        use = (cost > 0) & (cost <= c)
        if use.any():
            cand = table[c - cost[use], tail[use]] + wbar[use][:, None]
            cand = np.minimum(cand, inf)
            np.minimum.at(cur, head[use], cand)
        if len(ft):
            while True:
                stats.rounds += 1
                cand = np.minimum(cur[ft] + fw[:, None], inf)
                nxt = cur.copy()
                np.minimum.at(nxt, fh, cand)
                if np.array_equal(nxt, cur):
                    break
                cur = nxt
        else:
            stats.rounds += 1
        table[c] = cur
        neg = np.nonzero(cur[diag, diag] < 0)[0]
        if len(neg):
            stats.sources_scanned += int(neg[0]) + 1
            return c, int(neg[0])
    stats.sources_scanned += n
    return None


def _single_source_walk(aux: DirectedAuxGraph, s: int, level: int) -> list[int]:
    """Re-run the table for source ``s`` with predecessor links; return the closed walk at ``level``."""
    n = aux.n
    arcs = aux.arcs
    costly = [(j, a.tail, a.head, -a.weight, a.budget) for j, a in enumerate(arcs) if a.budget > 0]
    free = [(j, a.tail, a.head, -a.weight) for j, a in enumerate(arcs) if a.budget == 0]
    dist: list[list[int | None]] = []
    pred: list[list[tuple[int, int] | None]] = []
    for c in range(level + 1):
        cur: list[int | None] = [None] * n
        pr: list[tuple[int, int] | None] = [None] * n
        cur[s] = 0
        for j, t, h, wb, cost in costly:
            c0 = c - cost
            if c0 < 0 or dist[c0][t] is None:
                continue
            val = dist[c0][t] + wb
            if cur[h] is None or val < cur[h]:
                cur[h] = val
                pr[h] = (j, c0)
        changed = True
        while changed:
            changed = False
            for j, t, h, wb in free:
                if cur[t] is None:
                    continue
                val = cur[t] + wb
                if cur[h] is None or val < cur[h]:
                    cur[h] = val
                    pr[h] = (j, c)
                    changed = True
        dist.append(cur)
        pred.append(pr)
    assert dist[level][s] is not None and dist[level][s] < 0
    return _trace_walk(arcs, pred, s, level)


def find_positive_cycle_bounded(
    aux: DirectedAuxGraph, k: int, stats: CycleSearchStats | None = None
) -> tuple[int, ...] | None:
    """Return the arc ids of a simple directed cycle with weight > 0 and budget <= k.

    Weights are negated and a shortest-walk table ``d(s, v, c)`` is filled one
    budget level at a time: arcs that consume budget lead from level ``c - cost``
    to level ``c``, free arcs are relaxed inside a level until stable. Every
    ``d(s, s, c)`` starts at 0, so a negative diagonal entry certifies a
    closed walk of positive original weight within budget ``c``. The first
    such (level, source) is traced back through predecessor links and the
    walk is split into simple cycles; a positive one is returned. Returns
    None when no qualifying cycle exists.
    """
    if k < 1:
        raise InvalidParameter("budget k must be at least 1")
    if any(a.budget == 0 and a.weight > 0 for a in aux.arcs):
        raise InvalidParameter("positive arcs must consume budget")
    if stats is None:
        stats = CycleSearchStats()
    hit = _detect(aux, k, stats)
    if hit is None:
        return None
    level, s = hit
    walk = _single_source_walk(aux, s, level)
    for cyc in _split_closed_walk(aux.arcs, walk):
        if aux.cycle_weight(cyc) > 0:
            return tuple(cyc)
    raise AssertionError("positive closed walk without a positive simple cycle")


def _trace_walk(arcs: Sequence[Arc], pred, s: int, c: int) -> list[int]:
    walk = []
    v, level = s, c
    while pred[level][v] is not None:
        j, level = pred[level][v]
        walk.append(j)
        v = arcs[j].tail
    assert v == s
    walk.reverse()
    return walk


# -- exact-constrained heaviest path in a DAG ----------------------------


@dataclass
class DagPathTable:
    """``best[(v, rm, rn)] = (weight, arc id or -1 for the source, previous key)``."""

    source: int
    best: dict = field(default_factory=dict)

    def path_to(self, t: int, rm: int, rn: int) -> tuple[int, ...] | None:
        key = (t, rm, rn)
        if key not in self.best:
            return None
        out = []
        while True:
            _, j, prev = self.best[key]
            if j < 0:
                break
            out.append(j)
            key = prev
        out.reverse()
        return tuple(out)

    def weight_to(self, t: int, rm: int, rn: int) -> int | None:
        entry = self.best.get((t, rm, rn))
        return None if entry is None else entry[0]


def _topological_order(aux: DirectedAuxGraph, arc_ids: Sequence[int]) -> list[int]:
    ts: graphlib.TopologicalSorter = graphlib.TopologicalSorter()
    for v in range(aux.n):
        ts.add(v)
    for j in arc_ids:
        a = aux.arcs[j]
        ts.add(a.head, a.tail)
    try:
        return list(ts.static_order())
    except graphlib.CycleError as exc:
        raise InvalidParameter("dag_exact_constrained_path needs an acyclic graph") from exc


def dag_constrained_table(
    aux: DirectedAuxGraph, s: int, arc_ids: Sequence[int] | None = None,
    rm_max: int | None = None, rn_max: int | None = None,
) -> DagPathTable:
    """Heaviest s->v paths for every reachable (v, #matching-red, #non-matching-red)."""
    ids = list(range(len(aux.arcs))) if arc_ids is None else sorted(arc_ids)
    order = _topological_order(aux, ids)
    out_arcs: list[list[int]] = [[] for _ in range(aux.n)]
    for j in ids:
        out_arcs[aux.arcs[j].tail].append(j)
    table = DagPathTable(s)
    best = table.best
    best[(s, 0, 0)] = (0, -1, None)
    by_vertex: dict[int, list[tuple[int, int]]] = {s: [(0, 0)]}
    for v in order:
        for rm, rn in by_vertex.get(v, ()):
            wv = best[(v, rm, rn)][0]
            for j in out_arcs[v]:
                a = aux.arcs[j]
                rm2 = rm + (a.label is ArcLabel.MATCHING_RED)
                rn2 = rn + (a.label is ArcLabel.NONMATCHING_RED)
                if (rm_max is not None and rm2 > rm_max) or (rn_max is not None and rn2 > rn_max):
                    continue
                key = (a.head, rm2, rn2)
                val = wv + a.weight
                old = best.get(key)
                if old is None:
                    by_vertex.setdefault(a.head, []).append((rm2, rn2))
                if old is None or val > old[0]:
                    best[key] = (val, j, (v, rm, rn))
    return table


def dag_exact_constrained_path(
    aux: DirectedAuxGraph, s: int, t: int, rm: int, rn: int, arc_ids: Sequence[int] | None = None
) -> tuple[int, ...] | None:
    """Heaviest s->t path using exactly ``rm`` matching-red and ``rn`` non-matching-red arcs.

    ``arc_ids`` restricts the search to a sub-digraph, which must be acyclic.
    """
    if rm < 0 or rn < 0:
        raise InvalidParameter("red counts must be non-negative")
    table = dag_constrained_table(aux, s, arc_ids, rm, rn)
    return table.path_to(t, rm, rn)
