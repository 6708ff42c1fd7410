"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s``; the lines are also
printed (uncaptured) during a normal run.
"""

import random
import time
from fractions import Fraction

import pytest

from exactmatch import engines, oracle
from exactmatch.approx import (
    ApproxConfig,
    em_relaxed_bipartite,
    ewpm_band,
    ewpm_relaxed,
    half_approx_call_bound,
    tkpm_08_approx_bipartite,
    tkpm_half_approx,
)
from exactmatch.cycles import find_positive_cycle_bounded
from exactmatch.engines import EngineKind
from exactmatch.fpt import (
    ColorCodingPlan,
    ExactRedMaxWeight,
    bipartite_beta,
    circumference,
    colorcoded_improve,
    em_fpt_circumference,
    independence_number,
    tkpm_fpt_alpha,
    tkpm_fpt_beta,
)
from exactmatch.generate import FAMILIES, GeneratorSpec, generate
from exactmatch.graph import top_k_weight
from exactmatch.reductions import (
    ewpm_to_em,
    solve_min_tkpm,
    solve_mwem_via_ewpm,
    tkpm_to_mwem,
    truncate_weights,
)

from test_cycles import qualifying_exists, random_digraph
from test_fpt import targets_within

BIP = "random-bipartite-with-planted-pm"
GEN = "random-general-with-planted-pm"


@pytest.fixture
def report(capsys):
    def emit(num, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance] criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})")
    return emit


def corpus(count, seed, sizes, families, **kw):
    rng = random.Random(seed)
    for i in range(count):
        fam = families[i % len(families)]
        yield generate(GeneratorSpec(fam, rng.choice(sizes), seed=seed * 100_003 + i, **kw))


def topk_optima(graph):
    """Optimal top-k weight for every k in one pass over the perfect matchings."""
    best = [None] * (graph.n // 2 + 1)
    for m in oracle.enumerate_pms(graph):
        ws = sorted((graph.weights[i] for i in m), reverse=True)
        acc = 0
        for k, w in enumerate(ws, 1):
            acc += w
            if best[k] is None or acc > best[k]:
                best[k] = acc
    return best


def gadget_red_counts(graph):
    """Every red count of a perfect matching, by a memoized most-constrained-vertex search.

    Independent of the library oracle; copes with the long forced paths of the weight gadget.
    """
    n = graph.n
    adj = [[(graph.edges[i].other(x), 1 if graph.edges[i].color.value == "r" else 0)
            for i in graph.incident[x]] for x in range(n)]
    full = (1 << n) - 1
    memo = {}

    def solve(mask):
        if mask == full:
            return frozenset({0})
        if mask in memo:
            return memo[mask]
        pick, opts = None, None
        for x in range(n):
            if mask >> x & 1:
                continue
            free = [(y, r) for y, r in adj[x] if not mask >> y & 1]
            if pick is None or len(free) < len(opts):
                pick, opts = x, free
                if len(free) <= 1:
                    break
        out = set()
        for y, r in opts:
            for c in solve(mask | 1 << pick | 1 << y):
                out.add(c + r)
        memo[mask] = res = frozenset(out)
        return res

    return solve(0)


def test_criterion_1_relaxed_em_band(report):
    start = time.perf_counter()
    rng = random.Random(1)
    total = bad = 0
    for g in corpus(560, 1, [4, 6, 8, 10, 12, 14, 16], [BIP], p=0.5, red_p=0.45):
        counts = sorted(oracle.red_counts(g) - {0})
        if not counts:
            continue
        k = rng.choice(counts)
        res = em_relaxed_bipartite(g, k)
        total += 1
        if not (res.in_band and g.is_perfect_matching(res.matching)):
            bad += 1
    elapsed = time.perf_counter() - start
    ok = total >= 500 and bad == 0 and elapsed <= 60
    report(1, ok, f"{total} yes-instances, {bad} out of band, {elapsed:.1f}s")
    assert ok


def test_criterion_2_bounded_cycle_dp(report):
    rng = random.Random(2)
    graphs = disagree = invalid = 0
    for _ in range(1000):
        aux = random_digraph(rng, rng.randint(2, 8), rng.uniform(0.15, 0.55))
        graphs += 1
        for k in range(1, 6):
            cyc = find_positive_cycle_bounded(aux, k)
            if (cyc is not None) != qualifying_exists(aux, k):
                disagree += 1
            if cyc is not None and not (aux.is_simple_cycle(cyc) and aux.cycle_weight(cyc) > 0
                                        and aux.cycle_budget(cyc) <= k):
                invalid += 1
    ok = graphs >= 1000 and disagree == 0 and invalid == 0
    report(2, ok, f"{graphs} digraphs x k=1..5, {disagree} disagreements, {invalid} invalid cycles")
    assert ok


def test_criterion_3_half_approx(report):
    runs = below = over_bound = 0
    ratios = []
    graphs = list(corpus(150, 3, [4, 6, 8, 10, 12], [BIP])) + list(corpus(150, 30, [4, 6, 8, 10, 12], [GEN]))
    for g in graphs:
        best = topk_optima(g)
        for k in range(1, g.n // 2 + 1):
            rep = tkpm_half_approx(g, k)
            ratio = Fraction(rep.top_k, best[k])
            ratios.append(ratio)
            runs += 1
            below += ratio < Fraction(1, 2)
            over_bound += rep.counters["maxwpm_calls"] > half_approx_call_bound(g, k)
    ok = len(graphs) >= 300 and below == 0 and over_bound == 0
    report(3, ok, f"{len(graphs)} graphs, {runs} runs, min ratio {float(min(ratios)):.3f}, "
                  f"mean {float(sum(ratios) / len(ratios)):.3f}, {over_bound} call-bound violations")
    assert ok


def test_criterion_4_eight_approx(report):
    start = time.perf_counter()
    runs = below = capped = 0
    worst = Fraction(1)
    graphs = list(corpus(200, 4, [4, 6, 8, 10, 12], [BIP]))
    for g in graphs:
        best = topk_optima(g)
        eps = Fraction(1, g.n)
        for k in range(1, g.n // 2 + 1):
            rep = tkpm_08_approx_bipartite(g, k, ApproxConfig(epsilon=eps))
            ratio = Fraction(rep.top_k, best[k])
            worst = min(worst, ratio)
            runs += 1
            below += ratio < Fraction(4, 5) - eps
            capped += rep.counters["probe_cap_hit"]
    elapsed = time.perf_counter() - start
    ok = len(graphs) >= 200 and below == 0 and elapsed <= 600
    report(4, ok, f"{len(graphs)} graphs, {runs} runs, min ratio {float(worst):.3f}, {capped} probe caps, "
                  f"{elapsed:.1f}s")
    assert ok


def test_criterion_5_reduction_round_trips(report):
    mism = {"a": 0, "b": 0, "c": 0, "d": 0}
    graphs = list(corpus(200, 5, [4, 6, 8, 10], [BIP, GEN], w_max=4))
    for g in graphs:
        pm_weights = {g.weight_of(m) for m in oracle.enumerate_pms(g)}
        # (a) the gadget depends only on the weights, so one search serves every W
        target, _, _ = ewpm_to_em(g, 1)
        reds = gadget_red_counts(target)
        for W in range(1, 4 * (g.n // 2) + 2):
            _, k, _ = ewpm_to_em(g, W)
            mism["a"] += (k in reds) != (oracle.ewpm_oracle(g, W) is not None)
            mism["a"] += (k in reds) != (W in pm_weights)
        for k in range(g.n // 2 + 1):
            # (b)
            got = solve_mwem_via_ewpm(g, k, oracle.ewpm_oracle)
            want = oracle.mwem_oracle(g, k)
            mism["b"] += (got is None) != (want is None) or (got is not None and got[0] != want[0])
            if k == 0:
                continue
            # (c) best over guesses of the top-k value of the MWEM optimum
            best = None
            for ek in range(g.m):
                inst = tkpm_to_mwem(g, k, ek).graph
                res = oracle.mwem_oracle(inst, k)
                if res is not None:
                    val = top_k_weight(g, res[1], k)
                    best = val if best is None else max(best, val)
            mism["c"] += best != oracle.tkpm_oracle(g, k)[0]
            # (d)
            mism["d"] += solve_min_tkpm(g, k).top_k != oracle.min_tkpm_oracle(g, k)[0]
    ok = len(graphs) >= 200 and not any(mism.values())
    report(5, ok, f"{len(graphs)} graphs, mismatches " + " ".join(f"{p}={v}" for p, v in mism.items()))
    assert ok


def test_criterion_6_truncation(report):
    edge_bad = pm_bad = band_bad = screened = 0
    graphs = list(corpus(100, 6, [4, 6, 8, 10], [BIP], w_min=2 ** 39, w_max=2 ** 40 - 1))
    graphs += list(corpus(40, 60, [4, 6, 8, 10], [GEN], w_min=2 ** 39, w_max=2 ** 40 - 1))
    for g in graphs:
        W = g.weight_of(g.meta["planted"])
        f = 4 * g.n ** 2
        tr = truncate_weights(g, W, f)
        unit = Fraction(W, f)
        for j, i in enumerate(tr.kept):
            edge_bad += abs(g.weights[i] - tr.graph.weights[j] * unit) > unit
        for m in oracle.enumerate_pms(tr.graph):
            orig = g.weight_of(tr.pull_back(m))
            pm_bad += abs(orig - tr.graph.weight_of(m) * unit) > g.n * unit / 2
        if g.sides is None or oracle.ewpm_oracle(g, W) is None:
            continue
        screened += 1
        rep = ewpm_relaxed(g, W, f)
        lo, hi = ewpm_band(g, W, f)
        band_bad += not (rep.ok and lo <= rep.weight <= hi)
    ok = len(graphs) >= 100 and screened >= 100 and edge_bad == pm_bad == band_bad == 0
    report(6, ok, f"{len(graphs)} graphs, {screened} ewpm runs, edge/pm/band violations "
                  f"{edge_bad}/{pm_bad}/{band_bad}")
    assert ok


def test_criterion_7_color_coding(report):
    cases = misses = 0
    for g in corpus(60, 7, [6, 8, 10], [BIP, GEN], red_p=0.4):
        m = engines.any_pm(g)
        for L in (4, 6, 8):
            for r, w in targets_within(g, m, L).items():
                out = colorcoded_improve(g, m, L, ExactRedMaxWeight(r), ColorCodingPlan(mode="exhaustive"))
                cases += 1
                misses += out is None or g.red_count(out) != r or g.weight_of(out) < w
    trials = failures = 0
    rng = random.Random(70)
    for g in corpus(1500, 70, [8], [BIP, GEN], red_p=0.4):
        if trials == 1000:
            break
        m = engines.any_pm(g)
        targets = {r: w for r, w in targets_within(g, m, 4).items() if r != g.red_count(m)}
        if not targets:
            continue
        r = rng.choice(sorted(targets))
        plan = ColorCodingPlan(mode="random", delta=0.01, seed=trials)
        out = colorcoded_improve(g, m, 4, ExactRedMaxWeight(r), plan)
        trials += 1
        failures += out is None or g.red_count(out) != r or g.weight_of(out) < targets[r]
    ok = cases > 0 and misses == 0 and trials == 1000 and failures <= 10
    report(7, ok, f"exhaustive {cases} targets {misses} misses; random {trials} trials {failures} failures")
    assert ok


def test_criterion_8_fpt_solvers(report):
    exhaustive = ColorCodingPlan(mode="exhaustive")
    mism = {"circ": 0, "alpha": 0, "beta": 0}
    counts = {"circ": 0, "alpha": 0, "beta": 0}
    for g in corpus(100, 8, [4, 6, 8, 10], [GEN, "complete", BIP, "gadget-stress"], p=0.4, red_p=0.4):
        c = max(3, circumference(g))
        reds = oracle.red_counts(g)
        counts["circ"] += 1
        for k in range(g.n // 2 + 1):
            mism["circ"] += em_fpt_circumference(g, k, c, exhaustive).ok != (k in reds)
    dense = [GEN, "complete", BIP]
    for g in corpus(100, 80, [4, 6, 8, 10, 12], dense, p=0.75):
        alpha = independence_number(g)
        best = topk_optima(g)
        counts["alpha"] += 1
        for k in range(1, g.n // 2 + 1):
            mism["alpha"] += tkpm_fpt_alpha(g, k, alpha, exhaustive).top_k != best[k]
    for g in corpus(100, 81, [4, 6, 8, 10, 12], ["complete-bipartite", BIP, "gadget-stress"], p=0.8):
        beta = bipartite_beta(g)
        best = topk_optima(g)
        counts["beta"] += 1
        for k in range(1, g.n // 2 + 1):
            mism["beta"] += tkpm_fpt_beta(g, k, beta, exhaustive).top_k != best[k]
    ok = min(counts.values()) >= 100 and not any(mism.values())
    report(8, ok, " ".join(f"{s}: {counts[s]} graphs {mism[s]} mismatches" for s in counts))
    assert ok


def test_criterion_9_engine_cross_validation(report):
    graphs = bad = 0
    for fam in FAMILIES:
        for n in range(2, 11, 2):
            for seed in range(12):
                g = generate(GeneratorSpec(fam, n, seed=seed))
                graphs += 1
                rnd = random.Random(seed)
                signed = [rnd.randint(-20, 20) for _ in range(g.m)]
                kinds = [EngineKind.GENERAL_BLOSSOM] + ([EngineKind.BIPARTITE_EXACT] if g.sides else [])
                for ws in (list(g.weights), signed):
                    for fn in (engines.max_weight_pm, engines.min_weight_pm):
                        ref = fn(g, ws, EngineKind.BRUTE_FORCE)
                        for kind in kinds:
                            got = fn(g, ws, kind)
                            if (got is None) != (ref is None):
                                bad += 1
                            elif got is not None:
                                bad += not g.is_perfect_matching(got) or g.weight_of(got, ws) != g.weight_of(ref, ws)
    ok = bad == 0
    report(9, ok, f"{graphs} corpus graphs, {bad} discrepancies")
    assert ok
