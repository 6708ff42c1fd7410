"""Line-based instance format.

::

    c any comment
    p <kind> <n> <m>
    e <u> <v> <weight> <r|b>      (1-based vertices, m lines)
    part <bits>                   (optional; one 0/1 per vertex)
    k <int> | W <int> | f <int> | alpha <int> | beta <int> | c <int> | eps <p/q> | seed <int>

Weights must be positive; ``allow_zero=True`` also admits 0, which reduction
outputs use for edges they switch off.

``emit`` writes the canonical form: planted-matching comment, header, edges in file order, bipartition,
then parameters in the order above. Other comments are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError
from .graph import ColoredWeightedGraph, Color, Edge

KINDS = ("graph", "em", "ewpm", "mwem", "tkpm", "min-tkpm")
_INT_PARAMS = ("k", "W", "f", "alpha", "beta", "c", "seed")
PARAM_ORDER = _INT_PARAMS[:6] + ("eps", "seed")


@dataclass
class Problem:
    kind: str = "graph"
    params: dict = field(default_factory=dict)

    def get(self, key, default=None):
        return self.params.get(key, default)


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"{what} must be an integer, got {tok!r}") from None


def parse(text: str, allow_zero: bool = False) -> tuple[ColoredWeightedGraph, Problem]:
    header = None
    edges: list[Edge] = []
    part = None
    planted = None
    problem = Problem()
    seen_edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split()
        if toks[:2] == ["c", "planted"]:
            planted = tuple(_int(t, lineno, "planted edge") - 1 for t in toks[2:])
            continue
        if not toks or toks[0] == "c":
            continue
        tag = toks[0]
        if tag == "p":
            if header is not None:
                raise ParseError(lineno, "duplicate problem line")
            if len(toks) != 4:
                raise ParseError(lineno, "expected 'p <kind> <n> <m>'")
            kind = toks[1]
            if kind not in KINDS:
                raise ParseError(lineno, f"unknown problem kind {kind!r}")
            n, m = _int(toks[2], lineno, "n"), _int(toks[3], lineno, "m")
            if n < 0 or m < 0:
                raise ParseError(lineno, "n and m must be non-negative")
            header = (n, m)
            problem.kind = kind
            continue
        if header is None:
            raise ParseError(lineno, "missing 'p' line before content")
        n, m = header
        if tag == "e":
            if len(toks) < 5:
                missing = ("u", "v", "weight", "color")[len(toks) - 1]
                raise ParseError(lineno, f"edge line missing {missing} field")
            if len(toks) > 5:
                raise ParseError(lineno, "edge line has extra fields")
            u, v = _int(toks[1], lineno, "u"), _int(toks[2], lineno, "v")
            w = _int(toks[3], lineno, "weight")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(lineno, f"vertex out of range 1..{n}")
            if u == v:
                raise ParseError(lineno, "self-loop")
            if w < (0 if allow_zero else 1):
                raise ParseError(lineno, f"weight must be {'non-negative' if allow_zero else 'positive'}, got {w}")
            if toks[4] not in ("r", "b"):
                raise ParseError(lineno, f"unknown color {toks[4]!r} (expected r or b)")
            key = (min(u, v), max(u, v))
            if key in seen_edges:
                raise ParseError(lineno, f"duplicate edge {u} {v}")
            seen_edges.add(key)
            edges.append(Edge(u - 1, v - 1, w, Color(toks[4])))
        elif tag == "part":
            bits = "".join(toks[1:])
            if len(bits) != n or set(bits) - {"0", "1"}:
                raise ParseError(lineno, f"part needs exactly {n} bits of 0/1")
            part = tuple(int(b) for b in bits)
        elif tag in _INT_PARAMS:
            if len(toks) != 2:
                raise ParseError(lineno, f"expected '{tag} <int>'")
            problem.params[tag] = _int(toks[1], lineno, tag)
        elif tag == "eps":
            if len(toks) != 2:
                raise ParseError(lineno, "expected 'eps <p/q>'")
            try:
                problem.params["eps"] = Fraction(toks[1])
            except (ValueError, ZeroDivisionError):
                raise ParseError(lineno, f"bad rational {toks[1]!r}") from None
        else:
            raise ParseError(lineno, f"unknown line type {tag!r}")
    last = len(text.splitlines())
    if header is None:
        raise ParseError(last, "no 'p' line")
    if len(edges) != header[1]:
        raise ParseError(last, f"header announces {header[1]} edges, found {len(edges)}")
    if planted is not None and any(not 0 <= i < len(edges) for i in planted):
        raise ParseError(last, "planted edge index out of range")
    meta = {} if planted is None else {"planted": planted}
    graph = ColoredWeightedGraph(header[0], tuple(edges), part, meta)
    if part is not None:
        for e in edges:
            if part[e.u] == part[e.v]:
                raise ParseError(last, f"edge {e.u + 1} {e.v + 1} lies inside one side of the bipartition")
    return graph, problem


def emit(graph: ColoredWeightedGraph, problem: Problem | None = None) -> str:
    problem = problem or Problem()
    lines = []
    planted = graph.meta.get("planted")
    if planted is not None:
        lines.append("c planted " + " ".join(str(i + 1) for i in sorted(planted)))
    lines.append(f"p {problem.kind} {graph.n} {graph.m}")
    for e in graph.edges:
        lines.append(f"e {e.u + 1} {e.v + 1} {e.weight} {e.color.value}")
    if graph.bipartition is not None:
        lines.append("part " + "".join(str(s) for s in graph.bipartition))
    for key in PARAM_ORDER:
        if key in problem.params:
            lines.append(f"{key} {problem.params[key]}")
    return "\n".join(lines) + "\n"


def normalize(text: str, allow_zero: bool = False) -> str:
    return emit(*parse(text, allow_zero))


def read(path, allow_zero: bool = False) -> tuple[ColoredWeightedGraph, Problem]:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), allow_zero)


def write(path, graph: ColoredWeightedGraph, problem: Problem | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit(graph, problem))
