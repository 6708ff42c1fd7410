"""Thresholding and the reduction chain TkPM -> MWEM -> EWPM -> EM.

Also the polynomial-time exact solver for minimum top-k perfect matching
(threshold at the guessed k-th edge, then a minimum-weight perfect matching)
and the bit-window weight truncation used for exponentially large weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from . import engines
from .errors import InvalidParameter
from .graph import BLUE, RED, ColoredWeightedGraph, Edge, top_k_weight
from .report import SolveReport, Status


@dataclass(frozen=True)
class ThresholdedWeights:
    graph: ColoredWeightedGraph
    t: int
    weights: tuple[int, ...]


def threshold(graph: ColoredWeightedGraph, t, weights=None) -> ThresholdedWeights:
    """Per-edge ``max(w - t, 0)``."""
    if t < 0:
        raise InvalidParameter("threshold must be non-negative")
    ws = graph.weights if weights is None else weights
    return ThresholdedWeights(graph, t, tuple(max(w - t, 0) for w in ws))


def _check_k(graph, k):
    if not 1 <= k <= graph.n // 2:
        raise InvalidParameter(f"k={k} outside [1, {graph.n // 2}]")


def solve_min_tkpm(graph: ColoredWeightedGraph, k: int) -> SolveReport:
    """Exact minimum top-k perfect matching.

    Every edge is tried as the k-th edge of an optimum; thresholding at its
    weight and taking a minimum-weight perfect matching of the thresholded
    weights yields a matching whose top-k weight is at most the optimum.
    """
    _check_k(graph, k)
    best = best_val = None
    best_edge = -1
    calls = 0
    by_t: dict[int, frozenset | None] = {}
    for rank, i in enumerate(graph.ordering.order):
        t = graph.weights[i]
        if t not in by_t:
            by_t[t] = engines.min_weight_pm(graph, threshold(graph, t).weights)
            calls += 1
        m = by_t[t]
        if m is None:
            return SolveReport("min-tkpm", Status.INFEASIBLE, k=k, counters={"minwpm_calls": calls})
        val = top_k_weight(graph, m, k)
        if best is None or val < best_val:
            best, best_val, best_edge = m, val, i
    if best is None:
        return SolveReport("min-tkpm", Status.INFEASIBLE, k=k)
    return SolveReport.build("min-tkpm", graph, best, k, counters={"minwpm_calls": calls},
                             certificate={"guess_edge": best_edge})


# -- TkPM -> MWEM ------------------------------------------------------------


@dataclass(frozen=True)
class MwemInstance:
    graph: ColoredWeightedGraph
    k: int
    guess_edge: int


def tkpm_to_mwem(graph: ColoredWeightedGraph, k: int, guess_edge: int) -> MwemInstance:
    """Edges up to ``guess_edge`` in the ordering become red (weights kept); later edges blue with weight 0."""
    if not 0 <= guess_edge < graph.m:
        raise InvalidParameter("guess edge out of range")
    cut = graph.ordering.rank[guess_edge]
    edges = []
    for i, e in enumerate(graph.edges):
        if graph.ordering.rank[i] <= cut:
            edges.append(Edge(e.u, e.v, e.weight, RED))
        else:
            edges.append(Edge(e.u, e.v, 0, BLUE))
    return MwemInstance(graph.with_edges(edges), k, guess_edge)


# -- MWEM -> EWPM ------------------------------------------------------------


@dataclass(frozen=True)
class MwemToEwpm:
    """Red edges shifted by ``n * w_max`` so the red count is readable off the weight."""

    source: ColoredWeightedGraph
    target: ColoredWeightedGraph
    k: int
    w_max: int

    @property
    def shift(self) -> int:
        return self.source.n * self.w_max

    def band(self) -> tuple[Fraction, Fraction]:
        """Open interval of shifted weights that forces exactly ``k`` red edges."""
        return (Fraction(2 * self.k - 1, 2) * self.shift, Fraction(2 * self.k + 1, 2) * self.shift)

    def in_band(self, value: int) -> bool:
        lo, hi = self.band()
        return lo < value < hi

    def probes(self) -> Iterator[int]:
        """Targets W from ``(k+1) n w_max`` downwards, stopping at the bottom of the band."""
        lo, _ = self.band()
        W = (self.k + 1) * self.shift
        while W > lo:
            yield W
            W -= 1

    def pull_back(self, matching) -> frozenset | None:
        if matching is None:
            return None
        matching = frozenset(matching)
        if self.source.red_count(matching) != self.k:
            return None
        return matching


def mwem_to_ewpm(graph: ColoredWeightedGraph, k: int) -> MwemToEwpm:
    w_max = graph.max_weight + 1
    shift = graph.n * w_max
    edges = [Edge(e.u, e.v, e.weight + (shift if graph.red[i] else 0), e.color)
             for i, e in enumerate(graph.edges)]
    return MwemToEwpm(graph, graph.with_edges(edges), k, w_max)


def solve_mwem_via_ewpm(graph: ColoredWeightedGraph, k: int, ewpm_solver: Callable) -> tuple[int, frozenset] | None:
    """Probe ``ewpm_solver(target_graph, W)`` downward; the first hit is an MWEM optimum."""
    red = mwem_to_ewpm(graph, k)
    for W in red.probes():
        m = red.pull_back(ewpm_solver(red.target, W))
        if m is not None:
            return graph.weight_of(m), m
    return None


# -- EWPM -> EM (path gadget) -----------------------------------------------


@dataclass
class ReductionCertificate:
    """Maps between an EWPM instance and its EM gadget graph."""

    source: ColoredWeightedGraph
    target: ColoredWeightedGraph
    W_in: int
    k: int
    shift: int
    paths: list[tuple[int, ...]] = field(default_factory=list)  # gadget edge ids per source edge

    def pull_back(self, matching) -> frozenset:
        """Source edge e is matched iff the first (red) edge of its path is matched."""
        matching = frozenset(matching)
        return frozenset(i for i, path in enumerate(self.paths) if path[0] in matching)

    def push_forward(self, matching) -> frozenset:
        matching = frozenset(matching)
        out = set()
        for i, path in enumerate(self.paths):
            out.update(path[0::2] if i in matching else path[1::2])
        return frozenset(out)

    def as_dict(self) -> dict:
        return {"reduction": "ewpm-to-em", "W": self.W_in, "k": self.k, "shift": self.shift,
                "source_n": self.source.n, "target_n": self.target.n,
                "paths": [" ".join(map(str, p)) for p in self.paths]}


def ewpm_to_em(graph: ColoredWeightedGraph, W: int) -> tuple[ColoredWeightedGraph, int, ReductionCertificate]:
    """Replace each edge by an alternating red/blue path with ``2w - 1`` edges.

    A perfect matching of weight ``W`` corresponds to a gadget perfect matching
    with ``W`` red edges. Zero weights are handled by adding 1 to every weight
    and ``n/2`` to ``W`` first.
    """
    ws = list(graph.weights)
    shift = 1 if any(w <= 0 for w in ws) else 0
    ws = [w + shift for w in ws]
    if any(w <= 0 for w in ws):
        raise InvalidParameter("ewpm_to_em needs non-negative weights")
    k = W + shift * (graph.n // 2)
    n = graph.n
    part = list(graph.sides) if graph.sides is not None else None
    edges: list[Edge] = []
    paths = []
    for i, e in enumerate(graph.edges):
        chain = [e.u]
        for step in range(1, 2 * ws[i] - 1):
            chain.append(n)
            if part is not None:
                part.append(part[e.u] if step % 2 == 0 else 1 - part[e.u])
            n += 1
        chain.append(e.v)
        ids = []
        for pos, (a, b) in enumerate(zip(chain, chain[1:])):
            ids.append(len(edges))
            edges.append(Edge(a, b, 1, RED if pos % 2 == 0 else BLUE))
        paths.append(tuple(ids))
    target = ColoredWeightedGraph(n, tuple(edges), tuple(part) if part is not None else None)
    cert = ReductionCertificate(graph, target, W, k, shift, paths)
    return target, k, cert


# -- weight truncation ---------------------------------------------------------


@dataclass(frozen=True)
class TruncatedWeights:
    graph: ColoredWeightedGraph  # surviving edges with truncated weights
    kept: tuple[int, ...]  # source edge id of every surviving edge
    W: int
    f: int

    @property
    def scale(self) -> Fraction:
        return Fraction(self.W, self.f)

    def pull_back(self, matching) -> frozenset:
        return frozenset(self.kept[i] for i in matching)


def truncate_weights(graph: ColoredWeightedGraph, W: int, f: int) -> TruncatedWeights:
    """Drop edges heavier than ``W`` and keep only the top bits: ``w' = floor(w f / W)``.

    Each surviving weight then satisfies ``|w - w' W/f| < W/f`` and ``w' <= f``.
    """
    if W < 1:
        raise InvalidParameter("W must be positive")
    if f < 2 * graph.n:
        raise InvalidParameter("f must be at least 2n")
    kept = []
    edges = []
    for i, e in enumerate(graph.edges):
        if e.weight > W:
            continue
        kept.append(i)
        edges.append(Edge(e.u, e.v, (e.weight * f) // W, e.color))
    return TruncatedWeights(graph.with_edges(edges), tuple(kept), W, f)
