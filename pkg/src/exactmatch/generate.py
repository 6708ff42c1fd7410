"""Seeded instance generators. Every instance contains a planted perfect matching."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import InvalidParameter
from .graph import BLUE, RED, ColoredWeightedGraph, Edge

FAMILIES = (
    "random-bipartite-with-planted-pm",
    "random-general-with-planted-pm",
    "complete",
    "complete-bipartite",
    "gadget-stress",
)


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: int
    p: float = 0.5
    w_min: int = 1
    w_max: int = 10
    red_p: float = 0.5
    seed: int = 0


def _check(spec: GeneratorSpec) -> None:
    if spec.family not in FAMILIES:
        raise InvalidParameter(f"unknown family {spec.family!r}")
    if spec.n < 2 or spec.n % 2:
        raise InvalidParameter("n must be even and at least 2")
    if not 1 <= spec.w_min <= spec.w_max:
        raise InvalidParameter("need 1 <= w_min <= w_max")
    if not (0 <= spec.p <= 1 and 0 <= spec.red_p <= 1):
        raise InvalidParameter("probabilities must lie in [0, 1]")


def generate(spec: GeneratorSpec) -> ColoredWeightedGraph:
    _check(spec)
    rng = random.Random(f"{spec.family}:{spec.n}:{spec.seed}")
    n, h = spec.n, spec.n // 2
    part = None
    if spec.family == "random-bipartite-with-planted-pm":
        perm = list(range(h))
        rng.shuffle(perm)
        planted = {(a, h + perm[a]) for a in range(h)}
        pairs = [(a, h + b) for a in range(h) for b in range(h)]
        keep = [pr for pr in pairs if pr in planted or rng.random() < spec.p]
        part = [0] * h + [1] * h
    elif spec.family == "random-general-with-planted-pm":
        verts = list(range(n))
        rng.shuffle(verts)
        planted = {tuple(sorted(verts[i:i + 2])) for i in range(0, n, 2)}
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        keep = [pr for pr in pairs if pr in planted or rng.random() < spec.p]
    elif spec.family == "complete":
        planted = {(i, i + 1) for i in range(0, n, 2)}
        keep = [(a, b) for a in range(n) for b in range(a + 1, n)]
    elif spec.family == "complete-bipartite":
        planted = {(a, h + a) for a in range(h)}
        keep = [(a, h + b) for a in range(h) for b in range(h)]
        part = [0] * h + [1] * h
    else:
        # ladder: two rows of h vertices, rungs plus row edges; many nested
        # alternating cycles of every even length, weights spread wide
        planted = {(a, h + a) for a in range(h)}
        keep = [(a, h + a) for a in range(h)]
        keep += [(a, h + a + 1) for a in range(h - 1)]
        keep += [(a + 1, h + a) for a in range(h - 1)]
        part = [0] * h + [1] * h
    edges = []
    planted_ids = []
    for u, v in keep:
        w = rng.randint(spec.w_min, spec.w_max)
        c = RED if rng.random() < spec.red_p else BLUE
        if (u, v) in planted:
            planted_ids.append(len(edges))
        edges.append(Edge(u, v, w, c))
    meta = {"family": spec.family, "seed": spec.seed, "planted": tuple(planted_ids)}
    return ColoredWeightedGraph(n, tuple(edges), tuple(part) if part else None, meta)
