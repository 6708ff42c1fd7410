"""Benchmark harness: run solvers on generated instances, compare with the oracle, write CSV.

Columns (fixed):

``instance, family, n, m, solver, k, status, objective, oracle, ratio, band_ok, wall_time_s, min_ratio, mean_ratio``

One row per (instance, solver), ordered by instance id then solver order,
followed by one ``summary`` row per solver carrying the min and mean ratio.
Solver exceptions become rows with status ``error:<type>``.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import approx, fpt, oracle, reductions
from .generate import GeneratorSpec, generate
from .graph import ColoredWeightedGraph

COLUMNS = ["instance", "family", "n", "m", "solver", "k", "status", "objective", "oracle", "ratio",
           "band_ok", "wall_time_s", "min_ratio", "mean_ratio"]

SOLVERS = ("tkpm-0.5", "tkpm-0.8", "tkpm-fpt-alpha", "tkpm-fpt-beta", "min-tkpm", "em-relaxed",
           "ewpm-relaxed", "em-fpt-circ")


@dataclass
class SuiteConfig:
    solvers: list[str] = field(default_factory=list)
    instances: list[GeneratorSpec] = field(default_factory=list)
    k: int | None = None  # default: red count of the planted matching (EM) or n/4 (TkPM)
    epsilon: Fraction | None = None
    cap: int = oracle.DEFAULT_CAP
    seed: int = 0
    record_time: bool = True

    @classmethod
    def from_dict(cls, d: dict) -> "SuiteConfig":
        inst = []
        for spec in d.get("instances", []):
            count = spec.get("count", 1)
            base = {key: val for key, val in spec.items() if key != "count"}
            seed0 = base.pop("seed", d.get("seed", 0))
            for j in range(count):
                inst.append(GeneratorSpec(seed=seed0 + j, **base))
        eps = d.get("epsilon")
        return cls(list(d.get("solvers", [])), inst, d.get("k"), None if eps is None else Fraction(eps),
                   d.get("cap", oracle.DEFAULT_CAP), d.get("seed", 0), d.get("record_time", True))


def _fmt(val) -> str:
    if val is None:
        return ""
    if isinstance(val, bool):
        return "true" if val else "false"
    if isinstance(val, (float, Fraction)):
        return f"{float(val):.6g}"
    return str(val)


def _em_k(graph: ColoredWeightedGraph, cfg: SuiteConfig) -> int:
    if cfg.k is not None:
        return cfg.k
    planted = graph.meta.get("planted", ())
    return max(1, graph.red_count(planted))


def _tk_k(graph: ColoredWeightedGraph, cfg: SuiteConfig) -> int:
    k = cfg.k if cfg.k is not None else max(1, graph.n // 4)
    return min(k, graph.n // 2)


def _run_one(solver: str, graph: ColoredWeightedGraph, cfg: SuiteConfig):
    """Return (k, status, objective, oracle value, ratio, band_ok)."""
    small = graph.n <= cfg.cap
    plan = fpt.ColorCodingPlan(seed=cfg.seed)
    if solver in ("tkpm-0.5", "tkpm-0.8", "tkpm-fpt-alpha", "tkpm-fpt-beta", "min-tkpm"):
        k = _tk_k(graph, cfg)
        if solver == "tkpm-0.5":
            rep = approx.tkpm_half_approx(graph, k)
            floor = Fraction(1, 2)
        elif solver == "tkpm-0.8":
            acfg = approx.ApproxConfig(epsilon=cfg.epsilon)
            rep = approx.tkpm_08_approx_bipartite(graph, k, acfg)
            floor = Fraction(4, 5) - acfg.eps_for(graph)
        elif solver == "tkpm-fpt-alpha":
            rep = fpt.tkpm_fpt_alpha(graph, k, fpt.independence_number(graph), plan)
            floor = Fraction(1)
        elif solver == "tkpm-fpt-beta":
            rep = fpt.tkpm_fpt_beta(graph, k, fpt.bipartite_beta(graph), plan)
            floor = Fraction(1)
        else:
            rep = reductions.solve_min_tkpm(graph, k)
            floor = None
        best = None
        if small:
            res = (oracle.min_tkpm_oracle if solver == "min-tkpm" else oracle.tkpm_oracle)(graph, k, cfg.cap)
            best = None if res is None else res[0]
        obj = rep.top_k
        ratio = None if best in (None, 0) or obj is None else Fraction(obj, best)
        if floor is None:
            band = None if best is None else obj == best
        else:
            band = None if ratio is None else ratio >= floor
        return k, rep.status.value, obj, best, ratio, band
    if solver == "em-relaxed":
        k = _em_k(graph, cfg)
        res = approx.em_relaxed_bipartite(graph, k)
        yes = None
        if small:
            yes = oracle.em_oracle(graph, k, cfg.cap) is not None
        ratio = None if res.red_count is None else Fraction(res.red_count, k)
        return k, res.status.value, res.red_count, k if yes else None, ratio, res.in_band
    if solver == "ewpm-relaxed":
        W = graph.weight_of(graph.meta.get("planted", ()))
        rep = approx.ewpm_relaxed(graph, W)
        ratio = None if rep.weight is None else Fraction(rep.weight, W)
        lo, hi = approx.ewpm_band(graph, W, rep.counters.get("f", 4 * graph.n ** 2))
        band = None if rep.weight is None else lo <= rep.weight <= hi
        return W, rep.status.value, rep.weight, W, ratio, band
    if solver == "em-fpt-circ":
        k = _em_k(graph, cfg)
        c = max(3, fpt.circumference(graph))
        rep = fpt.em_fpt_circumference(graph, k, c, plan)
        yes = None
        if small:
            yes = oracle.em_oracle(graph, k, cfg.cap) is not None
        found = rep.status.value == "ok"
        return k, rep.status.value, rep.red_count, k if yes else None, None, None if yes is None else found == yes
    raise ValueError(f"unknown solver {solver!r}")


def run_suite(cfg: SuiteConfig) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(COLUMNS)
    ratios: dict[str, list] = {s: [] for s in cfg.solvers}
    for idx, spec in enumerate(cfg.instances):
        graph = generate(spec)
        for solver in cfg.solvers:
            start = time.perf_counter()
            try:
                k, status, obj, best, ratio, band = _run_one(solver, graph, cfg)
            except Exception as exc:  # recorded as a row, never aborts the suite
                k = status = obj = best = ratio = band = None
                status = f"error:{type(exc).__name__}"
            wall = time.perf_counter() - start if cfg.record_time else 0.0
            if ratio is not None:
                ratios[solver].append(ratio)
            writer.writerow([_fmt(v) for v in (idx, spec.family, graph.n, graph.m, solver, k, status, obj, best,
                                               ratio, band, wall, None, None)])
    if cfg.instances:
        for solver in cfg.solvers:
            rs = ratios[solver]
            lo = min(rs) if rs else None
            mean = sum(rs) / len(rs) if rs else None
            writer.writerow([_fmt(v) for v in ("summary", "", "", "", solver, "", "", "", "", "", "", "",
                                               lo, mean)])
    return out.getvalue()
