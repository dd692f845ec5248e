"""Conflict graphs whose independent sets admit collision-free product states.

One vertex per Hamiltonian term.  Edges depend on the locality regime:

* ``mixed24`` (supports of size 2 and/or 4): terms conflict when their
  supports overlap, or when they are disjoint but their union is itself a
  support of the instance.  Max degree is at most 4k.
* ``strictq`` (all supports the same size q): overlap edges only; max degree
  at most qk.
* ``general`` (arbitrary even sizes): overlap edges, plus an edge between any
  two terms strictly contained in a common third support.  Max degree at most
  qk + k(qk - 1).

The degree bounds are consequences of k-sparsity; exceeding one indicates a
bug upstream and raises DegreeBoundError rather than warning.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Set, Tuple

from .hamiltonian import GENERAL, MIXED_24, STRICT_LOCAL, Hamiltonian, InstanceError

__all__ = [
    "ConflictGraph",
    "DegreeBoundError",
    "RegimeError",
    "REGIME_MIXED24",
    "REGIME_STRICTQ",
    "REGIME_GENERAL",
    "auto_regime",
    "build_mixed24",
    "build_strict_q",
    "build_general",
    "build_graph",
    "edge_list_text",
]

REGIME_MIXED24 = "mixed24"
REGIME_STRICTQ = "strictq"
REGIME_GENERAL = "general"
_REGIMES = (REGIME_MIXED24, REGIME_STRICTQ, REGIME_GENERAL)


class RegimeError(InstanceError):
    """Instance locality does not match the requested graph regime."""


class DegreeBoundError(RuntimeError):
    """A vertex exceeds the regime's proven degree bound (internal bug)."""


@dataclass(frozen=True)
class ConflictGraph:
    """Undirected conflict graph over term ids 0..len(terms)-1."""

    regime: str
    vertex_terms: Tuple[int, ...]
    adjacency: Tuple[Tuple[int, ...], ...]
    max_degree: int

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_terms)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def are_adjacent(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]


def _overlap_edges(supports: Tuple[FrozenSet[int], ...]) -> Set[Tuple[int, int]]:
    edges = set()
    for i in range(len(supports)):
        for j in range(i + 1, len(supports)):
            if supports[i] & supports[j]:
                edges.add((i, j))
    return edges


def _finish(
    regime: str,
    h: Hamiltonian,
    edges: Set[Tuple[int, int]],
    bound: int,
    bound_label: str,
) -> ConflictGraph:
    nv = len(h.terms)
    neighbors: Dict[int, Set[int]] = {v: set() for v in range(nv)}
    for u, v in edges:
        neighbors[u].add(v)
        neighbors[v].add(u)
    adjacency = tuple(tuple(sorted(neighbors[v])) for v in range(nv))
    max_degree = max((len(a) for a in adjacency), default=0)
    for v in range(nv):
        if len(adjacency[v]) > bound:
            raise DegreeBoundError(
                "vertex %d (support %r) has degree %d > %s = %d"
                % (v, h.terms[v].support, len(adjacency[v]), bound_label, bound)
            )
    return ConflictGraph(
        regime=regime,
        vertex_terms=tuple(range(nv)),
        adjacency=adjacency,
        max_degree=max_degree,
    )


def build_mixed24(h: Hamiltonian) -> ConflictGraph:
    """Conflict graph for supports of sizes in {2, 4}; max degree <= 4k."""
    sizes = {t.locality for t in h.terms}
    if not sizes <= {2, 4}:
        raise RegimeError(
            "mixed24 regime needs supports of size 2 or 4, got sizes %s"
            % sorted(sizes)
        )
    supports = tuple(frozenset(t.support) for t in h.terms)
    support_ids = {s: i for i, s in enumerate(supports)}
    sizes_present = {len(s) for s in supports}
    edges = _overlap_edges(supports)
    for i in range(len(supports)):
        for j in range(i + 1, len(supports)):
            if (i, j) in edges:
                continue
            union_size = len(supports[i]) + len(supports[j])
            if union_size not in sizes_present:
                continue
            if (supports[i] | supports[j]) in support_ids:
                edges.add((i, j))
    return _finish(REGIME_MIXED24, h, edges, 4 * h.sparsity, "4k")


def build_strict_q(h: Hamiltonian) -> ConflictGraph:
    """Conflict graph for uniform locality q; overlap edges only, degree <= qk."""
    sizes = {t.locality for t in h.terms}
    if len(sizes) > 1:
        raise RegimeError(
            "strictq regime needs a single support size, got sizes %s"
            % sorted(sizes)
        )
    supports = tuple(frozenset(t.support) for t in h.terms)
    edges = _overlap_edges(supports)
    return _finish(
        REGIME_STRICTQ, h, edges, h.max_locality * h.sparsity, "qk"
    )


def build_general(h: Hamiltonian) -> ConflictGraph:
    """Conflict graph for arbitrary even sizes (G').

    Overlap edges, plus an edge between every two terms strictly contained in
    a common third support; any independent set then has the property that no
    instance support is a union of two or more selected supports.
    """
    supports = tuple(frozenset(t.support) for t in h.terms)
    edges = _overlap_edges(supports)
    for k_outer, big in enumerate(supports):
        inside = [
            i for i, s in enumerate(supports) if i != k_outer and s < big
        ]
        for a in range(len(inside)):
            for b in range(a + 1, len(inside)):
                u, v = inside[a], inside[b]
                edges.add((u, v) if u < v else (v, u))
    k = h.sparsity
    qk = h.max_locality * k
    bound = qk + k * (qk - 1) if k > 0 else 0
    return _finish(REGIME_GENERAL, h, edges, bound, "qk + k(qk-1)")


def auto_regime(h: Hamiltonian) -> str:
    """Tightest applicable regime for the instance's locality class."""
    if h.locality_class == STRICT_LOCAL:
        return REGIME_STRICTQ
    if h.locality_class == MIXED_24:
        return REGIME_MIXED24
    return REGIME_GENERAL


def build_graph(h: Hamiltonian, regime: str = "auto") -> ConflictGraph:
    """Dispatch on regime name; 'auto' picks the tightest applicable builder."""
    if regime == "auto":
        regime = auto_regime(h)
    if regime == REGIME_MIXED24:
        return build_mixed24(h)
    if regime == REGIME_STRICTQ:
        return build_strict_q(h)
    if regime == REGIME_GENERAL:
        return build_general(h)
    raise ValueError("unknown regime %r (expected one of %s)" % (regime, _REGIMES))


def edge_list_text(g: ConflictGraph) -> str:
    """Plain 'u v' edge list (0-based vertex ids, sorted), for debugging."""
    lines = []
    for u in range(g.num_vertices):
        for v in g.adjacency[u]:
            if u < v:
                lines.append("%d %d" % (u, v))
    return "\n".join(lines) + ("\n" if lines else "")
