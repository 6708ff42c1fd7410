"""Solver output bundle and its key/value text serialization."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

from .graph import ColoredWeightedGraph, top_k_weight


class Status(str, enum.Enum):
    OK = "ok"
    INFEASIBLE = "infeasible"
    NO_EVIDENCE = "no-evidence"
    NOT_FOUND = "not-found"


@dataclass
class SolveReport:
    solver: str
    status: Status
    matching: frozenset | None = None
    k: int | None = None
    red_count: int | None = None
    weight: int | None = None
    top_k: int | None = None
    counters: dict[str, Any] = field(default_factory=dict)
    certificate: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status is Status.OK

    @classmethod
    def build(cls, solver, graph: ColoredWeightedGraph, matching, k=None, status=Status.OK, **extra):
        """Fill the objective fields from ``matching`` (evaluated on ``graph``)."""
        rep = cls(solver, status, k=k, **extra)
        if matching is not None:
            matching = frozenset(matching)
            rep.matching = matching
            rep.red_count = graph.red_count(matching)
            rep.weight = graph.weight_of(matching)
            if k is not None and k <= len(matching):
                rep.top_k = top_k_weight(graph, matching, k)
            rep.certificate.setdefault("perfect", graph.is_perfect_matching(matching))
        return rep

    def to_text(self, graph: ColoredWeightedGraph | None = None) -> str:
        """``key value`` lines followed by one ``m u v w c`` line per matched edge."""
        lines = [f"solver {self.solver}", f"status {self.status.value}"]
        for key in ("k", "red_count", "weight", "top_k"):
            val = getattr(self, key)
            if val is not None:
                lines.append(f"{key} {val}")
        for key, val in sorted(self.counters.items()):
            lines.append(f"counter.{key} {_fmt(val)}")
        for key, val in sorted(self.certificate.items()):
            lines.append(f"cert.{key} {_fmt(val)}")
        if self.matching is not None:
            lines.append(f"size {len(self.matching)}")
            for i in sorted(self.matching):
                if graph is None:
                    lines.append(f"m {i}")
                else:
                    e = graph.edges[i]
                    lines.append(f"m {e.u + 1} {e.v + 1} {e.weight} {e.color.value}")
        return "\n".join(lines) + "\n"


def _fmt(val) -> str:
    if isinstance(val, bool):
        return "true" if val else "false"
    if isinstance(val, float):
        return f"{val:.6g}"
    if isinstance(val, (list, tuple)):
        return ",".join(_fmt(v) for v in val)
    return str(val)
