"""Color coding over small alternating cycle sets, and the FPT solvers built on it.

``colorcoded_improve`` looks for vertex-disjoint M-alternating cycles with at
most ``L`` edges in total whose flip gives exactly ``r`` red edges, and
among those the heaviest result. Vertices are colored with ``q = min(L, n)``
colors; only colorful cycle sets (all vertices distinct colors) are searched,
which turns the search into a dynamic program over color subsets.

Two routes fill the per-color-set cycle table:

* ``"dp"`` extends alternating paths one matching edge at a time from an
  anchor carrying the smallest color of its cycle.
* ``"enumerate"`` guesses the cyclic color order, orients the colored
  subgraph along it (which makes it acyclic), guesses the closing edge and
  calls :func:`dag_exact_constrained_path`-style tables. Exponential in the
  cycle length; kept for cross-checking small ``L``.

Colorings come either from seeded random trials or from an exhaustive
family that colors every ``q``-subset of vertices injectively.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterator

import networkx as nx

from . import engines
from .cycles import Arc, ArcLabel, DirectedAuxGraph, dag_constrained_table
from .errors import InvalidParameter, Unsupported
from .graph import ColoredWeightedGraph, Cycle, apply_cycles, top_k_weight
from .reductions import tkpm_to_mwem
from .report import SolveReport, Status


@dataclass(frozen=True)
class ExactRed:
    r: int


@dataclass(frozen=True)
class ExactRedMaxWeight:
    r: int


Objective = ExactRed | ExactRedMaxWeight

_ENUMERATE_MAX_Q = 8


@dataclass
class ColorCodingPlan:
    """How colorings are produced and searched.

    ``mode``: "random" (seeded trials), "exhaustive" (one injective coloring
    per ``q``-subset of vertices) or "auto" (whichever family is smaller).
    ``trials`` overrides the randomized trial count.
    """

    mode: str = "auto"
    delta: float = 0.01
    seed: int = 0
    trials: int | None = None
    route: str = "dp"
    doubling: bool = False
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("auto", "random", "exhaustive"):
            raise InvalidParameter(f"unknown coloring mode {self.mode!r}")
        if self.route not in ("dp", "enumerate"):
            raise InvalidParameter(f"unknown route {self.route!r}")
        if not 0 < self.delta < 1:
            raise InvalidParameter("delta must lie in (0, 1)")

    def trial_count(self, q: int) -> int:
        if self.trials is not None:
            return self.trials
        return math.ceil(math.exp(q) * math.log(1 / self.delta))

    def family(self, n: int, q: int) -> str:
        if q >= n:
            return "identity"
        if self.mode != "auto":
            return self.mode
        return "exhaustive" if math.comb(n, q) <= self.trial_count(q) else "random"

    def colorings(self, n: int, q: int) -> Iterator[list[int]]:
        """Colorings as lists with -1 for vertices left out."""
        fam = self.family(n, q)
        if fam == "identity":
            yield list(range(n))
        elif fam == "exhaustive":
            for subset in itertools.combinations(range(n), q):
                col = [-1] * n
                for c, v in enumerate(subset):
                    col[v] = c
                yield col
        else:
            for t in range(self.trial_count(q)):
                rng = random.Random(f"{self.seed}:{t}")
                yield [rng.randrange(q) for _ in range(n)]


# -- per-color-set cycle tables ----------------------------------------------------


def _setup(graph, matching, weights):
    mate = graph.mate(matching)
    medge = [graph.edge_between(x, mate[x]) for x in range(graph.n)]
    red = [1 if r else 0 for r in graph.red]
    nbr = [[(graph.edges[i].other(x), i) for i in graph.incident[x] if i not in matching] for x in range(graph.n)]
    return mate, medge, red, list(weights), nbr


def _record(table, mask, d, g, cyc):
    slot = table.setdefault(mask, {})
    old = slot.get(d)
    if old is None or g > old[0]:
        slot[d] = (g, cyc)


def _table_dp(ctx, colors):
    """``table[mask][red delta] = (weight gain, cycle vertices)`` for colorful single cycles."""
    mate, medge, red, w, nbr = ctx
    table: dict[int, dict] = {}
    for s, cs in enumerate(colors):
        if cs < 0:
            continue
        x = mate[s]
        cx = colors[x]
        if cx <= cs:
            continue
        e = medge[s]
        layer = {((1 << cs) | (1 << cx), x): {-red[e]: (-w[e], (s, x))}}
        while layer:
            nxt: dict = {}
            for (mask, x), by_d in layer.items():
                for u, i in nbr[x]:
                    if u == s:
                        for d, (g, path) in by_d.items():
                            _record(table, mask, d + red[i], g + w[i], path)
                        continue
                    cu = colors[u]
                    if cu <= cs or (mask >> cu) & 1:
                        continue
                    v = mate[u]
                    cv = colors[v]
                    if cv <= cs or (mask >> cv) & 1 or cv == cu:
                        continue
                    em = medge[u]
                    dd, gg = red[i] - red[em], w[i] - w[em]
                    slot = nxt.setdefault((mask | (1 << cu) | (1 << cv), v), {})
                    for d, (g, path) in by_d.items():
                        old = slot.get(d + dd)
                        if old is None or g + gg > old[0]:
                            slot[d + dd] = (g + gg, path + (u, v))
            layer = nxt
    return table


def _table_enumerate(graph, matching, ctx, colors, q):
    """Same table via color orders, an acyclic orientation and exact-count DAG paths."""
    mate, medge, red, w, nbr = ctx
    by_color: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        if c >= 0:
            by_color.setdefault(c, []).append(v)
    # both orientations of every edge; the color order later keeps one of them
    arcs = []
    for i, e in enumerate(graph.edges):
        inside = i in matching
        label = ArcLabel.OTHER
        if red[i]:
            label = ArcLabel.MATCHING_RED if inside else ArcLabel.NONMATCHING_RED
        for a, b in ((e.u, e.v), (e.v, e.u)):
            arcs.append(Arc(a, b, -w[i] if inside else w[i], i, label))
    aux = DirectedAuxGraph(graph.n, tuple(arcs))
    table: dict[int, dict] = {}
    used = sorted(by_color)
    for size in range(4, len(used) + 1, 2):
        for cset in itertools.combinations(used, size):
            mask = sum(1 << c for c in cset)
            first = cset[0]
            for rest in itertools.permutations(cset[1:]):
                order = (first,) + rest
                pos = {c: p for p, c in enumerate(order)}
                # position p -> p+1 uses a matching edge for even p, non-matching for odd p
                ids = []
                for j, a in enumerate(arcs):
                    pt, ph = pos.get(colors[a.tail]), pos.get(colors[a.head])
                    if pt is None or ph is None or ph != pt + 1:
                        continue
                    if (a.edge in matching) == (pt % 2 == 0):
                        ids.append(j)
                last = order[-1]
                for s in by_color[first]:
                    dag = dag_constrained_table(aux, s, ids)
                    for t in by_color[last]:
                        close = graph.edge_between(t, s)
                        if close is None or close in matching:
                            continue
                        for (v, rm, rn), (g, _, _) in list(dag.best.items()):
                            if v != t:
                                continue
                            path = dag.path_to(t, rm, rn)
                            verts = (s,) + tuple(aux.arcs[j].head for j in path)
                            _record(table, mask, rn + red[close] - rm, g + w[close], verts)
    return table


def _combine(table):
    """Best disjoint unions of table cycles: ``{red delta: (gain, cycles)}``.

    Two disjoint cycles never share their smallest color, so taking at most
    one cycle per smallest color, in increasing color order, reaches every
    disjoint union exactly once.
    """
    groups: dict[int, list] = {}
    for mask, by_d in table.items():
        groups.setdefault(mask & -mask, []).append((mask, by_d))
    states: dict[int, dict] = {0: {0: (0, ())}}
    for low in sorted(groups):
        new: dict[int, dict] = {}
        for U, cur in states.items():
            if U & low:
                continue
            for C, by_d in groups[low]:
                if U & C:
                    continue
                slot = new.setdefault(U | C, {})
                for d1, (g1, c1) in by_d.items():
                    for d2, (g2, c2) in cur.items():
                        old = slot.get(d1 + d2)
                        if old is None or g1 + g2 > old[0]:
                            slot[d1 + d2] = (g1 + g2, c2 + (c1,))
        for U, slot in new.items():
            if U in states:
                cur = states[U]
                for d, val in slot.items():
                    if d not in cur or val[0] > cur[d][0]:
                        cur[d] = val
            else:
                states[U] = slot
    out: dict = {}
    for cur in states.values():
        for d, val in cur.items():
            if d not in out or val[0] > out[d][0]:
                out[d] = val
    return out


def _search_coloring(graph, matching, ctx, colors, q, route, want):
    if route == "dp":
        table = _table_dp(ctx, colors)
    else:
        table = _table_enumerate(graph, matching, ctx, colors, q)
    return _combine(table).get(want)


def colorcoded_improve(
    graph: ColoredWeightedGraph,
    matching,
    L: int,
    objective: Objective,
    plan: ColorCodingPlan | None = None,
    weights=None,
) -> frozenset | None:
    """Flip a colorful set of alternating cycles (at most ``L`` edges) to reach ``objective.r`` red edges.

    Returns the resulting perfect matching, or None when no coloring revealed
    one. ``ExactRed`` stops at the first hit; ``ExactRedMaxWeight`` keeps the
    heaviest result over all colorings (ties to the earliest). ``weights``
    overrides the graph weights for the weight objective. Statistics land in
    ``plan.stats``.
    """
    if L < 4:
        raise InvalidParameter("L must be at least 4")
    plan = plan or ColorCodingPlan()
    matching = frozenset(matching)
    if not graph.is_perfect_matching(matching):
        raise InvalidParameter("colorcoded_improve needs a perfect matching")
    want = objective.r - graph.red_count(matching)
    if isinstance(objective, ExactRed) and want == 0:
        plan.stats.update(L=L, colorings=0, cycles=0)
        return matching
    ws = graph.weights if weights is None else weights
    ctx = _setup(graph, matching, ws)
    while True:
        q = min(L, graph.n)
        if plan.route == "enumerate" and q > _ENUMERATE_MAX_Q:
            raise Unsupported(f"enumerate route limited to {_ENUMERATE_MAX_Q} colors")
        best = None
        done = 0
        for colors in plan.colorings(graph.n, q):
            done += 1
            hit = _search_coloring(graph, matching, ctx, colors, q, plan.route, want)
            if hit is not None and (best is None or hit[0] > best[0]):
                best = hit
                if isinstance(objective, ExactRed):
                    break
        plan.stats.update(L=L, q=q, family=plan.family(graph.n, q), colorings=done)
        if best is not None or not plan.doubling or q >= graph.n:
            break
        L *= 2
    if best is None:
        plan.stats["cycles"] = 0
        return None
    cycles = [Cycle.from_vertices(graph, vs) for vs in best[1]]
    assert sum(len(c) for c in cycles) <= L
    plan.stats["cycles"] = len(cycles)
    return apply_cycles(graph, matching, cycles)


# -- parameters ----------------------------------------------------------------


@dataclass(frozen=True)
class FptParameters:
    k: int
    alpha: int | None = None
    beta: int | None = None
    c: int | None = None

    @property
    def L_circumference(self) -> int:
        return 2 * self.c ** 4

    @property
    def L_alpha(self) -> int:
        return self.k * 4 ** (self.alpha + 1)

    @property
    def L_beta(self) -> int:
        return self.k * (2 * self.beta + 2)


VERIFY_CAP = 20


def independence_number(graph: ColoredWeightedGraph) -> int:
    g = nx.complement(_nx(graph))
    _, size = nx.max_weight_clique(g, weight=None)
    return size


def balanced_independence(graph: ColoredWeightedGraph) -> int:
    """Largest ``h`` with an independent set of ``h`` vertices on each side."""
    sides = graph.sides
    if sides is None:
        raise InvalidParameter("balanced independence needs a bipartite graph")
    left = [v for v in range(graph.n) if sides[v] == 0]
    right = [v for v in range(graph.n) if sides[v] == 1]
    nb = [0] * graph.n
    for e in graph.edges:
        nb[e.u] |= 1 << e.v
        nb[e.v] |= 1 << e.u
    right_mask = sum(1 << v for v in right)
    best = 0
    for size in range(1, len(left) + 1):
        found = False
        for subset in itertools.combinations(left, size):
            blocked = 0
            for v in subset:
                blocked |= nb[v]
            if bin(right_mask & ~blocked).count("1") >= size:
                found = True
                break
        if not found:
            break
        best = size
    return best


def bipartite_beta(graph: ColoredWeightedGraph) -> int:
    """``2h + 1`` for the balanced independence ``h``: every balanced set with ``ceil(beta/2)`` per side spans an edge."""
    return 2 * balanced_independence(graph) + 1


def circumference(graph: ColoredWeightedGraph) -> int:
    """Length of a longest simple cycle (0 for forests), by DFS from each lowest vertex."""
    n = graph.n
    adj = [sorted(graph.edges[i].other(x) for i in graph.incident[x]) for x in range(n)]
    best = 0
    for s in range(n):
        on = [False] * n
        on[s] = True

        def dfs(x, length):
            nonlocal best
            for y in adj[x]:
                if y == s and length >= 3:
                    best = max(best, length)
                elif y > s and not on[y]:
                    on[y] = True
                    dfs(y, length + 1)
                    on[y] = False

        dfs(s, 1)
        if best == n:
            break
    return best


def _nx(graph):
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    g.add_edges_from(e.key for e in graph.edges)
    return g


@dataclass
class ParameterReport:
    alpha: int | None = None
    beta: int | None = None
    c: int | None = None
    claims: dict = field(default_factory=dict)

    @property
    def sound(self) -> bool:
        """Every claim is at least the true value (the bounds only need upper estimates)."""
        return all(getattr(self, key) is None or claim >= getattr(self, key) for key, claim in self.claims.items())

    def lines(self) -> list[str]:
        out = []
        for key in ("alpha", "beta", "c"):
            val = getattr(self, key)
            if val is None:
                continue
            claim = self.claims.get(key)
            verdict = "" if claim is None else (" ok" if claim >= val else " under-claimed")
            out.append(f"{key} {val}" + ("" if claim is None else f" claim {claim}{verdict}"))
        return out


def verify_parameters(graph: ColoredWeightedGraph, alpha=None, beta=None, c=None, cap: int = VERIFY_CAP,
                      compute_all: bool = False) -> ParameterReport:
    """Brute-force alpha, beta (bipartite only) and circumference and compare with claims."""
    if graph.n > cap:
        raise Unsupported(f"{graph.n} vertices exceeds the verification cap of {cap}")
    rep = ParameterReport(claims={k: v for k, v in (("alpha", alpha), ("beta", beta), ("c", c)) if v is not None})
    if alpha is not None or compute_all:
        rep.alpha = independence_number(graph)
    if beta is not None or (compute_all and graph.sides is not None):
        rep.beta = bipartite_beta(graph)
    if c is not None or compute_all:
        rep.c = circumference(graph)
    return rep


# -- solvers -------------------------------------------------------------------


def em_fpt_circumference(graph: ColoredWeightedGraph, k: int, c: int, plan: ColorCodingPlan | None = None,
                         L: int | None = None) -> SolveReport:
    """Perfect matching with exactly ``k`` red edges, for graphs of circumference ``c``.

    From a minimum-red perfect matching, repeatedly look for a cycle set of at
    most ``2 c^4`` edges raising the red count to some ``r <= k`` (targets tried
    from ``k`` downwards). NotFound proves nothing if ``c`` was under-claimed.
    """
    if c < 3:
        raise InvalidParameter("circumference must be at least 3")
    if k < 0:
        raise InvalidParameter("k must be non-negative")
    plan = plan or ColorCodingPlan()
    L = 2 * c ** 4 if L is None else L
    m = engines.min_red_pm(graph)
    if m is None:
        return SolveReport("em-fpt-circ", Status.INFEASIBLE, k=k)
    trajectory = [graph.red_count(m)]
    colorings = 0
    while trajectory[-1] < k:
        nxt = None
        for r in range(k, trajectory[-1], -1):
            nxt = colorcoded_improve(graph, m, L, ExactRed(r), plan)
            colorings += plan.stats.get("colorings", 0)
            if nxt is not None:
                break
        if nxt is None:
            break
        m = nxt
        trajectory.append(graph.red_count(m))
    counters = {"L": L, "colorings": colorings, "trajectory": trajectory}
    status = Status.OK if trajectory[-1] == k else Status.NOT_FOUND
    if status is Status.NOT_FOUND:
        return SolveReport("em-fpt-circ", status, k=k, counters=counters)
    return SolveReport.build("em-fpt-circ", graph, m, k, counters=counters)


def _tkpm_fpt(name, graph, k, L, plan):
    if not 1 <= k <= graph.n // 2:
        raise InvalidParameter(f"k={k} outside [1, {graph.n // 2}]")
    plan = plan or ColorCodingPlan()
    m0 = engines.any_pm(graph)
    if m0 is None:
        return SolveReport(name, Status.INFEASIBLE, k=k)
    order = graph.ordering
    best, best_val, best_edge = m0, top_k_weight(graph, m0, k), -1
    guesses = pruned = colorings = 0
    for rank, ek in enumerate(order.order):
        if rank < k - 1:
            continue
        inst = tkpm_to_mwem(graph, k, ek).graph
        # the guess can only win if a perfect matching of its zeroed weights beats the incumbent
        ub = engines.max_weight_pm(inst)
        if inst.weight_of(ub) <= best_val:
            pruned += 1
            continue
        guesses += 1
        m = colorcoded_improve(inst, m0, L, ExactRedMaxWeight(k), plan)
        colorings += plan.stats.get("colorings", 0)
        if m is None:
            continue
        val = top_k_weight(graph, m, k)
        if val > best_val:
            best, best_val, best_edge = m, val, ek
    counters = {"L": L, "guesses": guesses, "pruned": pruned, "colorings": colorings}
    return SolveReport.build(name, graph, best, k, counters=counters, certificate={"guess_edge": best_edge})


def tkpm_fpt_alpha(graph: ColoredWeightedGraph, k: int, alpha: int, plan: ColorCodingPlan | None = None,
                   L: int | None = None) -> SolveReport:
    """Exact top-k perfect matching for graphs with independence number ``alpha``."""
    if alpha < 1:
        raise InvalidParameter("alpha must be at least 1")
    return _tkpm_fpt("tkpm-fpt-alpha", graph, k, FptParameters(k, alpha=alpha).L_alpha if L is None else L, plan)


def tkpm_fpt_beta(graph: ColoredWeightedGraph, k: int, beta: int, plan: ColorCodingPlan | None = None,
                  L: int | None = None) -> SolveReport:
    """Exact top-k perfect matching for bipartite graphs with parameter ``beta``."""
    if graph.sides is None:
        raise InvalidParameter("tkpm_fpt_beta needs a bipartite graph")
    if beta < 1:
        raise InvalidParameter("beta must be at least 1")
    return _tkpm_fpt("tkpm-fpt-beta", graph, k, FptParameters(k, beta=beta).L_beta if L is None else L, plan)
