"""Conflict graphs of all three regimes against brute-force recomputation."""

import random

import pytest

from fermiapprox.conflict_graph import (
    REGIME_GENERAL,
    REGIME_MIXED24,
    REGIME_STRICTQ,
    RegimeError,
    auto_regime,
    build_general,
    build_graph,
    build_mixed24,
    build_strict_q,
    edge_list_text,
)
from fermiapprox.hamiltonian import analyze
from fermiapprox.instances import (
    KIND_GENERAL,
    KIND_MIXED24,
    KIND_STRICT,
    GeneratorSpec,
    generate,
    optimality_family,
)


def edge_set(graph):
    return {
        (u, v)
        for u in range(graph.num_vertices)
        for v in graph.adjacency[u]
        if u < v
    }


def brute_force_edges(h, regime):
    """Edges recomputed straight from the definitions, no shared code."""
    supports = [set(t.support) for t in h.terms]
    support_set = {frozenset(s) for s in supports}
    edges = set()
    n = len(supports)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = supports[i], supports[j]
            if a & b:
                edges.add((i, j))
            elif regime == REGIME_MIXED24 and frozenset(a | b) in support_set:
                edges.add((i, j))
    if regime == REGIME_GENERAL:
        for i in range(n):
            for j in range(i + 1, n):
                for big in supports:
                    if supports[i] < big and supports[j] < big:
                        edges.add((i, j))
                        break
    return edges


def test_mixed24_overlap_edge():
    h = analyze([((0, 1), 1.0), ((1, 2), 1.0)], 2)
    g = build_mixed24(h)
    assert edge_set(g) == {(0, 1)}


def test_mixed24_union_edge_makes_triangle():
    h = analyze([((0, 1), 1.0), ((2, 3), 1.0), ((0, 1, 2, 3), 1.0)], 2)
    g = build_mixed24(h)
    assert edge_set(g) == {(0, 1), (0, 2), (1, 2)}
    assert g.max_degree == 2


def test_mixed24_tight_family_degrees():
    h = optimality_family(3)
    g = build_mixed24(h)
    assert g.num_vertices == 9
    assert all(g.degree(v) == 4 for v in range(9))
    assert edge_set(g) == brute_force_edges(h, REGIME_MIXED24)


def test_mixed24_rejects_larger_supports():
    h = analyze([((0, 1, 2, 3, 4, 5), 1.0)], 3)
    with pytest.raises(RegimeError):
        build_mixed24(h)


def test_mixed24_two_local_degree_decomposition():
    # a 2-local vertex sees at most 2a + b neighbors, a/b the overlapping
    # 4- and 2-local term counts, and 2a + b <= 4k
    rng = random.Random(31)
    for seed in range(25):
        modes = 3 + seed % 4
        spec = GeneratorSpec(
            KIND_MIXED24, modes, num_terms=(3 * modes) // 2, sparsity=3, seed=rng.randrange(10**6)
        )
        h = generate(spec)
        g = build_mixed24(h)
        for v, term in enumerate(h.terms):
            if term.locality != 2:
                continue
            sup = set(term.support)
            a = sum(
                1
                for w, other in enumerate(h.terms)
                if w != v and other.locality == 4 and sup & set(other.support)
            )
            b = sum(
                1
                for w, other in enumerate(h.terms)
                if w != v and other.locality == 2 and sup & set(other.support)
            )
            assert g.degree(v) <= 2 * a + b
            assert 2 * a + b <= 4 * h.sparsity


def test_strictq_disjoint_terms_no_edge():
    h = analyze([((0, 1, 2, 3), 1.0), ((4, 5, 6, 7), 1.0)], 4)
    g = build_strict_q(h)
    assert edge_set(g) == set()
    assert g.max_degree == 0


def test_strictq_overlap_edge():
    h = analyze([((0, 1, 2, 3), 1.0), ((3, 4, 5, 6), 1.0)], 4)
    g = build_strict_q(h)
    assert edge_set(g) == {(0, 1)}


def test_strictq_rejects_mixed_sizes():
    h = analyze([((0, 1), 1.0), ((0, 1, 2, 3), 1.0)], 2)
    with pytest.raises(RegimeError):
        build_strict_q(h)


def test_strictq_random_degree_audit():
    for seed in range(30):
        modes = 3 + seed % 3
        h = generate(
            GeneratorSpec(KIND_STRICT, modes, num_terms=modes, sparsity=3, locality=4, seed=seed)
        )
        g = build_strict_q(h)
        assert edge_set(g) == brute_force_edges(h, REGIME_STRICTQ)
        assert g.max_degree <= h.max_locality * h.sparsity


def test_general_common_superset_clique():
    h = analyze(
        [((0, 1), 1.0), ((2, 3), 1.0), ((4, 5), 1.0), ((0, 1, 2, 3, 4, 5), 1.0)],
        3,
    )
    g = build_general(h)
    assert {(0, 1), (0, 2), (1, 2)} <= edge_set(g)
    # the 6-local container overlaps each 2-local term as well
    assert edge_set(g) == {(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)}


def test_general_equals_strictq_on_uniform_sizes():
    for seed in range(10):
        h = generate(
            GeneratorSpec(KIND_STRICT, 4, num_terms=4, sparsity=3, locality=4, seed=seed)
        )
        assert edge_set(build_general(h)) == edge_set(build_strict_q(h))


def test_general_random_degree_audit():
    for seed in range(30):
        modes = 4 + seed % 3
        h = generate(
            GeneratorSpec(KIND_GENERAL, modes, num_terms=modes, sparsity=3, seed=seed)
        )
        g = build_general(h)
        assert edge_set(g) == brute_force_edges(h, REGIME_GENERAL)
        qk = h.max_locality * h.sparsity
        assert g.max_degree <= qk + h.sparsity * (qk - 1)


def test_graph_invariant_under_term_order():
    rng = random.Random(17)
    raw = [((0, 1), 0.5), ((2, 3), -1.0), ((0, 1, 2, 3), 0.75), ((4, 5), 0.3)]
    reference = build_graph(analyze(raw, 3), "auto")
    for _ in range(5):
        shuffled = raw[:]
        rng.shuffle(shuffled)
        assert build_graph(analyze(shuffled, 3), "auto") == reference


def test_general_independent_set_blocks_unions():
    # independence in the general graph forbids any term from containing two
    # selected supports, hence from being their union
    for seed in range(20):
        modes = 4 + seed % 3
        h = generate(
            GeneratorSpec(KIND_GENERAL, modes, num_terms=modes, sparsity=3, seed=seed)
        )
        g = build_general(h)
        supports = [set(t.support) for t in h.terms]
        for i in range(len(supports)):
            for j in range(i + 1, len(supports)):
                if g.are_adjacent(i, j):
                    continue
                for big in supports:
                    assert not (supports[i] < big and supports[j] < big)


def test_auto_regime_and_dispatch():
    strict = analyze([((0, 1), 1.0)], 1)
    mixed = analyze([((0, 1), 1.0), ((0, 1, 2, 3), 1.0)], 2)
    general = analyze([((0, 1), 1.0), ((0, 1, 2, 3, 4, 5), 1.0)], 3)
    assert auto_regime(strict) == REGIME_STRICTQ
    assert auto_regime(mixed) == REGIME_MIXED24
    assert auto_regime(general) == REGIME_GENERAL
    assert build_graph(strict).regime == REGIME_STRICTQ
    assert build_graph(mixed, REGIME_GENERAL).regime == REGIME_GENERAL
    with pytest.raises(ValueError):
        build_graph(strict, "bogus")


def test_edge_list_text():
    h = analyze([((0, 1), 1.0), ((2, 3), 1.0), ((0, 1, 2, 3), 1.0)], 2)
    assert edge_list_text(build_mixed24(h)) == "0 1\n0 2\n1 2\n"
    empty = analyze([((0, 1), 1.0)], 1)
    assert edge_list_text(build_graph(empty)) == ""
