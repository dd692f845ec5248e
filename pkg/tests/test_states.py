"""Stabilizer and Gaussian state construction, energies, and the solution file."""

import itertools
import random

import numpy as np
import pytest

from fermiapprox.algebra import multiply_monomials
from fermiapprox.dense import (
    hermitian_eigenvalues,
    jordan_wigner,
    monomial_matrix,
    realize_gaussian,
    realize_hamiltonian,
    realize_stabilizer,
)
from fermiapprox.hamiltonian import InstanceError, analyze
from fermiapprox.instances import KIND_GENERAL, KIND_MIXED24, GeneratorSpec, generate
from fermiapprox.pipeline import approximate
from fermiapprox.states import (
    ConstraintError,
    GaussianSolution,
    SignAssignment,
    build_matching_plan,
    build_stabilizer,
    complete_assignment,
    covariance_of,
    derandomize,
    energy_of_z,
    parse_solution,
    reconstruct_solution,
    serialize_solution,
    validate_assignment,
)


def triangle_instance():
    # the 4-local term is the union of the two 2-local ones, so the conflict
    # graph is a triangle and only the heaviest 2-local term gets selected
    return analyze([((0, 1), 3.0), ((2, 3), 2.9), ((0, 1, 2, 3), 1.0)], 2)


def all_valid_assignments(plan):
    free = plan.free_pairs()
    for values in itertools.product((1, -1), repeat=len(free)):
        yield complete_assignment(plan, dict(zip(free, values)))


def mixed_batch(count, sparsity=3):
    for seed in range(count):
        modes = 3 + seed % 3
        yield generate(
            GeneratorSpec(
                KIND_MIXED24, modes, num_terms=(3 * modes) // 2, sparsity=sparsity, seed=seed
            )
        )


def test_stabilizer_single_positive_term():
    h = analyze([((0, 1), 1.0)], 1)
    s = build_stabilizer([0], h)
    assert s.term_ids == (0,)
    assert s.signs == (1,)
    assert s.certified_energy == 1.0


def test_stabilizer_two_disjoint_terms():
    h = analyze([((0, 1), -2.0), ((2, 3, 4, 5), 3.0)], 3)
    s = build_stabilizer([0, 1], h)
    assert s.signs == (-1, 1)
    assert s.certified_energy == 5.0


def test_stabilizer_rejects_conflicting_selection():
    h = analyze([((0, 1), 1.0), ((1, 2), 1.0)], 2)
    with pytest.raises(ValueError):
        build_stabilizer([0, 1], h)
    with pytest.raises(ValueError):
        build_stabilizer([0, 0], h)
    with pytest.raises(ValueError):
        build_stabilizer([5], h)


def test_stabilizer_dense_trace_identities():
    for seed in range(5):
        h = generate(GeneratorSpec(KIND_MIXED24, 3, num_terms=4, sparsity=3, seed=seed))
        result = approximate(h, "mixed24")
        rho = realize_stabilizer(result.stabilizer, h)
        assert abs(np.trace(rho) - 1.0) <= 1e-12
        assert hermitian_eigenvalues(rho).min() >= -1e-10
        selected = set(result.stabilizer.term_ids)
        for tid, term in enumerate(h.terms):
            value = np.trace(monomial_matrix(term.monomial(), h.modes) @ rho)
            assert abs(value.imag) <= 1e-10
            target = term.sign if tid in selected else 0.0
            assert abs(value.real - target) <= 1e-10


def test_matching_plan_four_local_parity():
    h = analyze([((0, 1, 2, 3), 1.0)], 2)
    plan = build_matching_plan([0], h)
    assert plan.term_pairs == (((0, 1), (2, 3)),)
    assert plan.parities == (-1,)
    assert plan.leftover_pairs == ()
    # consistency of the sign convention: c0c1c2c3 squares to +identity
    mono = h.terms[0].monomial()
    square = multiply_monomials(mono, mono)
    assert square.indices == () and square.phase.sign == 1


def test_matching_plan_two_local_parity():
    h = analyze([((0, 1), -1.0)], 1)
    plan = build_matching_plan([0], h)
    assert plan.term_pairs == (((0, 1),),)
    assert plan.parities == (1,)
    assert plan.signs == (-1,)
    assert plan.target_parity(0) == -1


def test_matching_plan_leftover_pairing():
    h = analyze([((0, 1), 1.0)], 4)
    plan = build_matching_plan([0], h)
    assert plan.leftover_pairs == ((2, 3), (4, 5), (6, 7))
    assert sorted(i for p in plan.all_pairs() for i in p) == list(range(8))


def test_free_and_dependent_pairs():
    h = analyze([((0, 1, 2, 3), 1.0), ((6, 7), 1.0)], 4)
    plan = build_matching_plan([0, 1], h)
    assert plan.dependent_pair(0) == (2, 3)
    assert plan.dependent_pair(1) == (6, 7)
    assert plan.free_pairs() == ((0, 1), (4, 5))


def test_complete_and_validate_assignment():
    h = triangle_instance()
    plan = build_matching_plan([0], h)
    z = complete_assignment(plan, {(2, 3): -1})
    validate_assignment(plan, z)
    assert z[(0, 1)] == plan.target_parity(0)
    with pytest.raises(ValueError):
        complete_assignment(plan, {})
    with pytest.raises(ValueError):
        complete_assignment(plan, {(2, 3): 1, (0, 1): 1})
    flipped = SignAssignment({(0, 1): -z[(0, 1)], (2, 3): z[(2, 3)]})
    with pytest.raises(ConstraintError):
        validate_assignment(plan, flipped)
    with pytest.raises(ValueError):
        validate_assignment(plan, SignAssignment({(0, 1): 1}))


def test_energy_single_selected_term():
    h = analyze([((0, 1, 2, 3), -1.5)], 3)
    plan = build_matching_plan([0], h)
    for z in all_valid_assignments(plan):
        assert energy_of_z(plan, z, h) == pytest.approx(1.5, abs=1e-12)


def test_energy_ignores_non_union_terms():
    # (1,2) straddles the pairs (0,1) and (2,3), so it can never contribute
    h = analyze([((0, 1, 2, 3), 1.5), ((1, 2), 0.7)], 3)
    plan = build_matching_plan([0], h)
    for z in all_valid_assignments(plan):
        assert energy_of_z(plan, z, h) == pytest.approx(1.5, abs=1e-12)


def test_empty_assignment_equals_certified_energy():
    for h in mixed_batch(10):
        result = approximate(h, "mixed24")
        average = energy_of_z(result.plan, None, h)
        assert average == pytest.approx(result.stabilizer.certified_energy, abs=1e-12)


def test_energy_matches_dense_realization():
    rng = random.Random(7)
    checked = 0
    for h in itertools.islice(mixed_batch(8), 8):
        result = approximate(h, "mixed24")
        plan = result.plan
        hd = realize_hamiltonian(h)
        free = plan.free_pairs()
        for _ in range(13):
            z = complete_assignment(
                plan, {p: rng.choice((1, -1)) for p in free}
            )
            closed = energy_of_z(plan, z, h)
            gauss = GaussianSolution(
                plan=plan, z=z, covariance=covariance_of(plan, z), energy=closed
            )
            dense_value = float(np.real(np.trace(hd @ realize_gaussian(gauss))))
            assert abs(closed - dense_value) <= 1e-12
            checked += 1
    assert checked >= 100


def test_energy_rejects_bad_assignments():
    h = triangle_instance()
    plan = build_matching_plan([0], h)
    good = complete_assignment(plan, {(2, 3): 1})
    bad = SignAssignment({(0, 1): -good[(0, 1)], (2, 3): 1})
    with pytest.raises(ConstraintError):
        energy_of_z(plan, bad, h)
    with pytest.raises(ValueError):
        energy_of_z(plan, {(0, 1): 1}, h)  # dependent pair is derived
    with pytest.raises(ValueError):
        energy_of_z(plan, {(2, 3): 0}, h)


def test_derandomize_fully_constrained():
    h = analyze([((0, 1), -1.7)], 1)
    plan = build_matching_plan([0], h)
    assert plan.free_pairs() == ()
    gauss = derandomize(plan, h)
    assert gauss.energy == pytest.approx(1.7, abs=1e-12)
    assert gauss.z[(0, 1)] == plan.target_parity(0) == -1


def test_derandomize_beats_certified_energy():
    h = triangle_instance()
    result = approximate(h, "mixed24")
    assert result.selection.term_ids == (0,)
    certified = result.stabilizer.certified_energy
    assert certified == 3.0
    # both leftover terms are unions of plan pairs, so one z choice collects
    # 2.9 - 1.0 on top of the certified 3.0
    assert result.gaussian.energy == pytest.approx(4.9, abs=1e-12)
    best = max(energy_of_z(result.plan, z, h) for z in all_valid_assignments(result.plan))
    assert result.gaussian.energy == pytest.approx(best, abs=1e-12)
    hd = realize_hamiltonian(h)
    dense_value = float(np.real(np.trace(hd @ realize_gaussian(result.gaussian))))
    assert dense_value == pytest.approx(result.gaussian.energy, abs=1e-12)


def test_exhaustive_average_is_certified_energy():
    for h in itertools.islice(mixed_batch(6), 6):
        result = approximate(h, "mixed24")
        values = [energy_of_z(result.plan, z, h) for z in all_valid_assignments(result.plan)]
        average = sum(values) / len(values)
        assert average == pytest.approx(result.stabilizer.certified_energy, abs=1e-10)
        assert result.gaussian.energy == pytest.approx(max(values), abs=1e-12)


def test_derandomize_walk_is_monotone():
    for h in itertools.islice(mixed_batch(8), 8):
        result = approximate(h, "mixed24")
        plan = result.plan
        walk = {}
        current = energy_of_z(plan, walk, h)
        assert current == pytest.approx(result.stabilizer.certified_energy, abs=1e-12)
        for p in plan.free_pairs():
            walk[p] = 1
            plus = energy_of_z(plan, walk, h)
            walk[p] = -1
            minus = energy_of_z(plan, walk, h)
            walk[p] = 1 if plus >= minus else -1
            best = max(plus, minus)
            assert best >= current - 1e-12
            current = best
        assert result.gaussian.energy == pytest.approx(current, abs=1e-12)
        for p in plan.free_pairs():
            assert result.gaussian.z[p] == walk[p]


def test_selected_products_collide_with_no_term():
    specs = [GeneratorSpec(KIND_MIXED24, 4, num_terms=6, sparsity=3, seed=s) for s in range(8)]
    specs += [GeneratorSpec(KIND_GENERAL, 5, num_terms=5, sparsity=3, seed=s) for s in range(8)]
    for spec in specs:
        h = generate(spec)
        result = approximate(h)
        supports = set(h.supports())
        monos = [h.terms[t].monomial() for t in result.selection.term_ids]
        for a in range(len(monos)):
            for b in range(a + 1, len(monos)):
                prod = multiply_monomials(monos[a], monos[b])
                assert prod.indices not in supports


def test_covariance_single_mode():
    h = analyze([((0, 1), 1.0)], 1)
    plan = build_matching_plan([0], h)
    gauss = derandomize(plan, h)
    assert gauss.z[(0, 1)] == 1
    assert np.array_equal(gauss.covariance, np.array([[0, 1], [-1, 0]]))


def test_covariance_structure_exact():
    for h in itertools.islice(mixed_batch(6), 6):
        result = approximate(h, "mixed24")
        cov = result.gaussian.covariance
        dim = 2 * h.modes
        assert cov.dtype == np.int64
        assert np.array_equal(cov.T, -cov)
        assert np.array_equal(cov @ cov, -np.eye(dim, dtype=np.int64))
    plan = build_matching_plan([0], analyze([((0, 1), 1.0)], 2))
    with pytest.raises(ValueError):
        covariance_of(plan, SignAssignment({(0, 1): 1}))  # partial assignment


def test_covariance_matches_dense_commutators():
    for seed in range(3):
        h = generate(GeneratorSpec(KIND_MIXED24, 4, num_terms=6, sparsity=3, seed=seed))
        result = approximate(h, "mixed24")
        rho = realize_gaussian(result.gaussian)
        cov = result.gaussian.covariance
        dim = 2 * h.modes
        mats = [jordan_wigner(i, h.modes) for i in range(dim)]
        for g in range(dim):
            for hh in range(g + 1, dim):
                value = 0.5j * np.trace(rho @ (mats[g] @ mats[hh] - mats[hh] @ mats[g]))
                assert abs(value.imag) <= 1e-10
                assert abs(value.real - cov[g, hh]) <= 1e-10


def test_solution_round_trip():
    for h in [triangle_instance()] + list(itertools.islice(mixed_batch(4), 4)):
        result = approximate(h)
        text = serialize_solution(
            h, result.regime, result.coloring.num_colors, result.stabilizer, result.gaussian
        )
        sol = parse_solution(text)
        regime, colors, stab, gauss = reconstruct_solution(h, sol)
        assert regime == result.regime
        assert colors == result.coloring.num_colors
        assert stab == result.stabilizer
        assert gauss.z == result.gaussian.z
        assert gauss.energy == pytest.approx(result.gaussian.energy, abs=1e-12)
        assert np.array_equal(gauss.covariance, result.gaussian.covariance)


def test_solution_detects_tampering():
    h = triangle_instance()
    result = approximate(h)
    text = serialize_solution(
        h, result.regime, result.coloring.num_colors, result.stabilizer, result.gaussian
    )

    other = analyze([((0, 1), 3.5), ((2, 3), 2.9), ((0, 1, 2, 3), 1.0)], 2)
    with pytest.raises(InstanceError):
        reconstruct_solution(other, parse_solution(text))

    dep = result.plan.dependent_pair(0)
    dep_line = "pair term %d %d %+d" % (dep[0] + 1, dep[1] + 1, result.gaussian.z[dep])
    flipped_line = "pair term %d %d %+d" % (dep[0] + 1, dep[1] + 1, -result.gaussian.z[dep])
    with pytest.raises(ConstraintError):
        reconstruct_solution(h, parse_solution(text.replace(dep_line, flipped_line)))

    left = result.plan.leftover_pairs[0]
    left_line = "pair leftover %d %d %+d" % (left[0] + 1, left[1] + 1, result.gaussian.z[left])
    flipped_left = "pair leftover %d %d %+d" % (left[0] + 1, left[1] + 1, -result.gaussian.z[left])
    with pytest.raises(InstanceError):
        reconstruct_solution(h, parse_solution(text.replace(left_line, flipped_left)))

    with pytest.raises(InstanceError):
        bumped = text.replace(
            "certified-energy %s" % repr(result.stabilizer.certified_energy),
            "certified-energy 99.0",
        )
        reconstruct_solution(h, parse_solution(bumped))

    with pytest.raises(InstanceError):
        # point the selected line at a support the instance does not contain
        reconstruct_solution(h, parse_solution(text.replace("selected +1 1 2", "selected +1 1 4")))
