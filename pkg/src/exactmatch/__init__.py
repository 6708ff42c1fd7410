"""Exact matching, exact-weight perfect matching and top-k perfect matching.

The public surface is re-exported here; see the submodules for details.
"""

from .approx import (
    ApproxConfig,
    RelaxedEmResult,
    em_relaxed_bipartite,
    ewpm_relaxed,
    tkpm_08_approx_bipartite,
    tkpm_half_approx,
)
from .cycles import (
    DirectedAuxGraph,
    RedMultiplicity,
    RedUnit,
    ThresholdSigned,
    build_aux_graph,
    dag_exact_constrained_path,
    find_positive_cycle_bounded,
)
from .engines import EngineKind, any_pm, max_weight_pm, min_red_pm, min_weight_pm
from .errors import InvalidParameter, ParseError, Unsupported
from .fpt import (
    ColorCodingPlan,
    ExactRed,
    ExactRedMaxWeight,
    FptParameters,
    colorcoded_improve,
    em_fpt_circumference,
    tkpm_fpt_alpha,
    tkpm_fpt_beta,
    verify_parameters,
)
from .generate import GeneratorSpec, generate
from .graph import BLUE, RED, Color, ColoredWeightedGraph, Cycle, Edge, EdgeOrdering, top_k_weight
from .reductions import (
    ewpm_to_em,
    mwem_to_ewpm,
    solve_min_tkpm,
    threshold,
    tkpm_to_mwem,
    truncate_weights,
)
from .report import SolveReport, Status

__all__ = [name for name in dir() if not name.startswith("_")]
