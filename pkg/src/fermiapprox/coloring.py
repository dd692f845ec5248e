"""Greedy conflict-graph coloring and heaviest-color-class selection.

Greedy coloring in descending |H_G| order (support-lexicographic tie-break)
uses at most max_degree + 1 colors; the heaviest color class is an
independent set whose weight is at least m / num_colors by pigeonhole.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .conflict_graph import ConflictGraph
from .hamiltonian import Hamiltonian

__all__ = ["Coloring", "IndependentSelection", "greedy_color", "heaviest_class"]


@dataclass(frozen=True)
class Coloring:
    """color_of[v] is the color id of vertex v; colors are 0..num_colors-1."""

    color_of: Tuple[int, ...]
    num_colors: int


@dataclass(frozen=True)
class IndependentSelection:
    """A color class: pairwise non-conflicting term ids plus their weight."""

    term_ids: Tuple[int, ...]
    weight: float
    color: int


def greedy_color(g: ConflictGraph, h: Hamiltonian) -> Coloring:
    """Proper coloring with at most max_degree + 1 colors.

    Vertices are processed in descending |H_G| order, ties broken by the
    support-lexicographic (= vertex id) order; each vertex takes the smallest
    color unused by its already-colored neighbors.
    """
    if g.num_vertices != len(h.terms):
        raise ValueError(
            "graph has %d vertices but Hamiltonian has %d terms"
            % (g.num_vertices, len(h.terms))
        )
    order = sorted(
        range(g.num_vertices),
        key=lambda v: (-abs(h.terms[v].coefficient), v),
    )
    color_of = [-1] * g.num_vertices
    for v in order:
        taken = {color_of[u] for u in g.adjacency[v] if color_of[u] >= 0}
        color = 0
        while color in taken:
            color += 1
        color_of[v] = color
    num_colors = max(color_of) + 1 if color_of else 0
    if num_colors > g.max_degree + 1:
        raise AssertionError(
            "greedy used %d colors > max_degree + 1 = %d"
            % (num_colors, g.max_degree + 1)
        )
    return Coloring(color_of=tuple(color_of), num_colors=num_colors)


def heaviest_class(c: Coloring, h: Hamiltonian) -> IndependentSelection:
    """The color class of largest total |H_G|; ties go to the lowest color id.

    Its weight is at least total_weight / num_colors (pigeonhole).  An empty
    Hamiltonian yields an empty selection of weight 0.
    """
    if len(c.color_of) != len(h.terms):
        raise ValueError(
            "coloring covers %d vertices but Hamiltonian has %d terms"
            % (len(c.color_of), len(h.terms))
        )
    if not h.terms:
        return IndependentSelection(term_ids=(), weight=0.0, color=0)
    weights = [0.0] * c.num_colors
    for v, color in enumerate(c.color_of):
        weights[color] += abs(h.terms[v].coefficient)
    best = max(range(c.num_colors), key=lambda col: (weights[col], -col))
    ids = tuple(v for v, color in enumerate(c.color_of) if color == best)
    return IndependentSelection(term_ids=ids, weight=weights[best], color=best)
