"""End-to-end approximation pipeline shared by the CLI and the test suite."""

from __future__ import annotations

from dataclasses import dataclass

from .coloring import Coloring, IndependentSelection, greedy_color, heaviest_class
from .conflict_graph import ConflictGraph, build_graph
from .hamiltonian import Hamiltonian
from .states import (
    GaussianSolution,
    MatchingPlan,
    StabilizerSolution,
    build_matching_plan,
    build_stabilizer,
    derandomize,
)

__all__ = ["ApproxResult", "approximate"]


@dataclass(frozen=True, eq=False)
class ApproxResult:
    """Everything one pipeline run produced, graph through Gaussian state."""

    h: Hamiltonian
    regime: str
    graph: ConflictGraph
    coloring: Coloring
    selection: IndependentSelection
    stabilizer: StabilizerSolution
    plan: MatchingPlan
    gaussian: GaussianSolution


def approximate(h: Hamiltonian, regime: str = "auto") -> ApproxResult:
    """Conflict graph -> greedy coloring -> heaviest class -> both states."""
    graph = build_graph(h, regime)
    coloring = greedy_color(graph, h)
    selection = heaviest_class(coloring, h)
    stabilizer = build_stabilizer(selection, h, graph)
    plan = build_matching_plan(selection, h)
    gaussian = derandomize(plan, h)
    return ApproxResult(
        h=h,
        regime=graph.regime,
        graph=graph,
        coloring=coloring,
        selection=selection,
        stabilizer=stabilizer,
        plan=plan,
        gaussian=gaussian,
    )
