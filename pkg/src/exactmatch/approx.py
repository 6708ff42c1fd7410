"""Approximation algorithms for EM, EWPM and top-k perfect matching.

``em_relaxed_bipartite`` and ``ewpm_relaxed`` allow the red count (weight)
to miss its target by a factor of two either way. ``tkpm_half_approx`` is
the threshold binary search for general graphs, and
``tkpm_08_approx_bipartite`` refines it with bounded positive cycles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import engines
from .cycles import (
    CycleSearchStats,
    RedMultiplicity,
    RedUnit,
    ThresholdSigned,
    arcs_to_cycle,
    build_aux_graph,
    find_positive_cycle_bounded,
)
from .errors import InvalidParameter
from .graph import ColoredWeightedGraph, apply_cycles, top_k_weight
from .reductions import ewpm_to_em, truncate_weights
from .report import SolveReport, Status


def band(k: int) -> tuple[int, int]:
    """Integer band ``[ceil(k/2), floor(3k/2)]``."""
    return (k + 1) // 2, (3 * k) // 2


@dataclass
class RelaxedEmResult:
    status: Status
    matching: frozenset | None
    k: int
    red_count: int | None = None
    iterations: int = 0
    trace: list[tuple[int, int]] = field(default_factory=list)  # (cycle gain, red count after)

    @property
    def in_band(self) -> bool:
        lo, hi = band(self.k)
        return self.red_count is not None and lo <= self.red_count <= hi


def _relaxed(graph: ColoredWeightedGraph, mult: Sequence[int] | None, k: int) -> RelaxedEmResult:
    """Raise the (multiplicity-weighted) red count along bounded positive cycles.

    ``mult=None`` means plain red edges. Otherwise edge ``e`` counts ``mult[e]``
    red units, which is the gadget graph of ``ewpm_to_em`` with every path
    contracted back to its edge.
    """
    if k < 1:
        raise InvalidParameter("k must be at least 1")
    if graph.sides is None:
        raise InvalidParameter("relaxed EM needs a bipartite graph")
    if mult is None:
        weights = [1 if r else 0 for r in graph.red]
        rule = RedUnit()
    else:
        weights = list(mult)
        rule = RedMultiplicity(tuple(weights))
    m = engines.min_weight_pm(graph, weights)
    if m is None:
        return RelaxedEmResult(Status.INFEASIBLE, None, k)
    count = graph.weight_of(m, weights)
    res = RelaxedEmResult(Status.OK, m, k, count)
    lo = (k + 1) // 2
    while count < lo:
        aux = build_aux_graph(graph, m, rule)
        arc_ids = find_positive_cycle_bounded(aux, k)
        if arc_ids is None:
            res.status = Status.NO_EVIDENCE
            break
        gain = aux.cycle_weight(arc_ids)
        m = apply_cycles(graph, m, [arcs_to_cycle(graph, aux, arc_ids)])
        count += gain
        res.iterations += 1
        res.trace.append((gain, count))
    res.matching, res.red_count = m, count
    return res


def em_relaxed_bipartite(graph: ColoredWeightedGraph, k: int) -> RelaxedEmResult:
    """Perfect matching with ``ceil(k/2) <= |R| <= floor(3k/2)`` on "Yes" instances.

    Starts from a minimum-red perfect matching and flips positive cycles of
    the red-count digraph that use at most ``k`` red non-matching edges. Each
    flip gains at most ``k``, so the first count at or above ``ceil(k/2)``
    stays below ``floor(3k/2)``.
    """
    return _relaxed(graph, None, k)


# -- EWPM ------------------------------------------------------------------------


def _relaxed_weight(graph: ColoredWeightedGraph, weights: Sequence[int], target: int, route: str):
    """Relaxed EM on the weight gadget; returns a matching of ``graph`` or None."""
    shift = 1 if any(w <= 0 for w in weights) else 0
    k = target + shift * (graph.n // 2)
    if k < 1:
        return None
    if route == "gadget":
        src = graph.with_edges(e._replace(weight=w) for e, w in zip(graph.edges, weights))
        gadget, k2, cert = ewpm_to_em(src, target)
        res = em_relaxed_bipartite(gadget, k2)
        return cert.pull_back(res.matching) if res.status is Status.OK else None
    res = _relaxed(graph, [w + shift for w in weights], k)
    return res.matching if res.status is Status.OK else None


def ewpm_relaxed(graph: ColoredWeightedGraph, W: int, f: int | None = None, route: str = "auto",
                 gadget_limit: int = 400) -> SolveReport:
    """Perfect matching with weight roughly within ``[W/2, 3W/2]``.

    Weights above ``f`` (default ``4 n^2``) are truncated to their top bits
    and every target in ``f - n/2 .. f + n/2`` is tried; the candidate whose
    original weight is closest to ``W`` is returned. ``route`` picks between
    the literal path gadget and the equivalent contracted search; "auto" uses
    the gadget while it has at most ``gadget_limit`` vertices.
    """
    if graph.sides is None:
        raise InvalidParameter("ewpm_relaxed needs a bipartite graph")
    if W < 1:
        raise InvalidParameter("W must be positive")
    if route not in ("auto", "gadget", "contracted"):
        raise InvalidParameter(f"unknown route {route!r}")
    if f is None:
        f = 4 * graph.n * graph.n
    if engines.any_pm(graph) is None:
        return SolveReport("ewpm-relaxed", Status.INFEASIBLE)
    half = graph.n // 2
    if W <= f:
        work, kept, weights, targets = graph, None, list(graph.weights), [W]
    else:
        tr = truncate_weights(graph, W, f)
        work, kept, weights = tr.graph, tr.kept, list(tr.graph.weights)
        targets = list(range(max(f - half, 1), f + half + 1))
    best = best_gap = None
    tried = 0
    for T in targets:
        r = route
        if r == "auto":
            size = work.n + sum(2 * (w + 1) for w in weights)
            r = "gadget" if size <= gadget_limit else "contracted"
        m = _relaxed_weight(work, weights, T, r) if work.m else None
        tried += 1
        if m is None:
            continue
        if kept is not None:
            m = frozenset(kept[i] for i in m)
        gap = abs(graph.weight_of(m) - W)
        if best is None or gap < best_gap:
            best, best_gap = m, gap
    counters = {"targets": tried, "f": f, "truncated": kept is not None}
    if best is None:
        return SolveReport("ewpm-relaxed", Status.NO_EVIDENCE, counters=counters)
    return SolveReport.build("ewpm-relaxed", graph, best, counters=counters, certificate={"W": W})


def ewpm_band(graph: ColoredWeightedGraph, W: int, f: int) -> tuple[Fraction, Fraction]:
    """Guaranteed weight window of ``ewpm_relaxed`` on a "Yes" instance."""
    if W <= f:
        return Fraction(W, 2), Fraction(3 * W, 2)
    slack = Fraction(2 * graph.n, f)
    return (Fraction(1, 2) - slack) * W, (Fraction(3, 2) + slack) * W


# -- top-k perfect matching --------------------------------------------------------


@dataclass(frozen=True)
class ApproxConfig:
    """``epsilon=None`` means ``1/n``. ``seed`` is reserved."""

    epsilon: Fraction | None = None
    max_probes: int = 1_000_000
    seed: int | None = None
    prune: bool = True

    def eps_for(self, graph: ColoredWeightedGraph) -> Fraction:
        eps = Fraction(1, max(graph.n, 2)) if self.epsilon is None else Fraction(self.epsilon)
        if not 0 < eps < 1:
            raise InvalidParameter("epsilon must lie in (0, 1)")
        return eps


def _check_tkpm(graph, k):
    if not 1 <= k <= graph.n // 2:
        raise InvalidParameter(f"k={k} outside [1, {graph.n // 2}]")


def _above(matching, weights, t) -> int:
    return sum(1 for i in matching if weights[i] > t)


def _thresholded(weights, t):
    return [max(w - t, 0) for w in weights]


@dataclass
class _Search:
    lower: frozenset  # more than k edges above t_lo
    upper: frozenset  # at most k edges above t_hi
    t_lo: int
    t_hi: int
    early: bool
    calls: int


def _threshold_search(graph, weights, k, unit, first=None) -> _Search | None:
    """Binary search for adjacent thresholds with the above-threshold count crossing ``k``.

    ``first`` is a precomputed maximum-weight PM at ``t = 0`` (still counted as a call).
    """
    m = engines.max_weight_pm(graph, weights) if first is None else first
    if m is None:
        return None
    if _above(m, weights, 0) <= k:
        return _Search(m, m, 0, 0, True, 1)
    # at t = max weight every thresholded weight is 0, so any PM is maximum there
    lo, hi = 0, max(weights)
    lower = upper = m
    calls = 1
    while hi - lo > unit:
        t = (lo + hi) // 2
        cand = engines.max_weight_pm(graph, _thresholded(weights, t))
        calls += 1
        if _above(cand, weights, t) > k:
            lo, lower = t, cand
        else:
            hi, upper = t, cand
    return _Search(lower, upper, lo, hi, False, calls)


def _best_of(graph, k, candidates):
    best = best_val = None
    for m in candidates:
        val = top_k_weight(graph, m, k)
        if best is None or val > best_val:
            best, best_val = m, val
    return best, best_val


def tkpm_half_approx(graph: ColoredWeightedGraph, k: int, cfg: ApproxConfig | None = None) -> SolveReport:
    """Top-k perfect matching within a factor 1/2, on any graph.

    Weights are scaled by ``2k`` so thresholds stay integral; the search keeps
    a maximum thresholded matching with more than ``k`` above-threshold edges
    at ``t1`` and one with at most ``k`` at ``t2 = t1 + 1``.
    """
    _check_tkpm(graph, k)
    scaled = [2 * k * w for w in graph.weights]
    s = _threshold_search(graph, scaled, k, 1)
    if s is None:
        return SolveReport("tkpm-0.5", Status.INFEASIBLE, k=k)
    counters = {"maxwpm_calls": s.calls, "early_return": s.early}
    if s.early:
        return SolveReport.build("tkpm-0.5", graph, s.lower, k, counters=counters)
    best, _ = _best_of(graph, k, [s.lower, s.upper])
    counters["t1"] = Fraction(s.t_lo, 2 * k)
    counters["t2"] = Fraction(s.t_hi, 2 * k)
    return SolveReport.build("tkpm-0.5", graph, best, k, counters=counters)


def half_approx_call_bound(graph: ColoredWeightedGraph, k: int) -> float:
    return 2 + math.log2(2 * k * graph.max_weight)


@dataclass
class _ImproveStats:
    cycles: int = 0
    probes: int = 0
    capped: bool = False
    search: CycleSearchStats = field(default_factory=CycleSearchStats)


def _improve(graph, weights, k, m, t, stats: _ImproveStats):
    """Augment ``m`` along bounded positive cycles of ``w_t`` until it has more than k edges above t."""
    if _above(m, weights, t) > k:
        return m, m, True
    m1 = m2 = m
    rule = ThresholdSigned(t, tuple(weights))
    while _above(m1, weights, t) <= k:
        aux = build_aux_graph(graph, m1, rule)
        arc_ids = find_positive_cycle_bounded(aux, k, stats.search)
        if arc_ids is None:
            break
        m2 = m1
        m1 = apply_cycles(graph, m1, [arcs_to_cycle(graph, aux, arc_ids)])
        stats.cycles += 1
    if _above(m1, weights, t) < k:
        return m1, m1, False
    return m1, m2, True


def _guess(graph, k, weights, step, stats: _ImproveStats, max_probes: int, first):
    """Phase 1 (threshold search at resolution ``step``) then phase 2 (linear descent)."""
    s = _threshold_search(graph, weights, k, step, first)
    m0p, m0, t0 = s.lower, s.upper, s.t_hi
    if s.early:
        return [m0, m0p], s.calls
    m1 = m2 = m0
    success = False
    t = t0
    while not success and t - step > 0:
        if stats.probes >= max_probes:
            stats.capped = True
            break
        t -= step
        stats.probes += 1
        m1, m2, success = _improve(graph, weights, k, m1, t, stats)
        if not success:
            m0 = m1
    return [m0, m0p, m1, m2], s.calls


def tkpm_08_approx_bipartite(graph: ColoredWeightedGraph, k: int, cfg: ApproxConfig | None = None) -> SolveReport:
    """Top-k perfect matching within ``0.8 - O(eps)`` on bipartite graphs.

    Every edge is tried as the k-th heaviest edge of an optimum; later edges
    get weight 0. Weights are scaled by ``k / eps`` so the descent step
    ``eps / k`` is one integer unit (times the numerator of ``eps``).
    A guess is skipped when the maximum perfect matching of its zeroed
    weights cannot beat the best top-k value already found.
    """
    _check_tkpm(graph, k)
    if graph.sides is None:
        raise InvalidParameter("tkpm_08_approx_bipartite needs a bipartite graph")
    cfg = cfg or ApproxConfig()
    eps = cfg.eps_for(graph)
    scale, step = eps.denominator * k, eps.numerator
    if engines.any_pm(graph) is None:
        return SolveReport("tkpm-0.8", Status.INFEASIBLE, k=k)
    order = graph.ordering
    stats = _ImproveStats()
    best = best_val = None
    best_edge = -1
    calls = guesses = pruned = 0
    for rank, ek in enumerate(order.order):
        if rank < k - 1:
            continue
        weights = [scale * w if order.rank[i] <= rank else 0 for i, w in enumerate(graph.weights)]
        first = engines.max_weight_pm(graph, weights)
        # an optimum guessed at ek has top-k weight equal to its zeroed weight
        if cfg.prune and best is not None and graph.weight_of(first, weights) <= scale * best_val:
            pruned += 1
            calls += 1
            continue
        cands, c = _guess(graph, k, weights, step, stats, cfg.max_probes, first)
        guesses += 1
        calls += c
        m, val = _best_of(graph, k, cands)
        if best is None or val > best_val:
            best, best_val, best_edge = m, val, ek
    counters = {"maxwpm_calls": calls, "guesses": guesses, "pruned": pruned, "probes": stats.probes,
                "cycles": stats.cycles, "probe_cap_hit": stats.capped}
    return SolveReport.build("tkpm-0.8", graph, best, k, counters=counters,
                             certificate={"guess_edge": best_edge, "epsilon": str(eps)})
