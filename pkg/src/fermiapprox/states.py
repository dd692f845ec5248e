"""Certified stabilizer and Gaussian states for an independent term selection.

Given a selection S of pairwise non-conflicting terms, the stabilizer-type
state is

    rho = 2^-n  prod_{G in S} (I + sign(H_G) c^G),

whose energy Tr(H rho) = sum_{G in S} |H_G| follows from the trace
identities (each selected monomial has expectation sign(H_G); every other
term of the instance has expectation 0 thanks to the conflict graph).

rho is also the average of pure Gaussian states rho'(z): pair the indices of
each selected support consecutively (matching M_G), pair the remaining
indices consecutively (leftover matching M), and draw z in {+-1} per pair
uniformly subject to one parity constraint per selected term,

    prod_{(g,h) in M_G} z_gh = s_G sign(H_G),

where the parity s_G is fixed by (prod_{(g,h) in M_G} i c_g c_h) c^G =
s_G I and is computed exactly in the monomial algebra.  Derandomizing by
conditional expectations over the free pair variables yields a single
Gaussian state whose energy is at least the certified average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import IDENTITY, PLUS_I, MajoranaMonomial, multiply_monomials
from .coloring import IndependentSelection
from .conflict_graph import ConflictGraph, build_graph
from .hamiltonian import Hamiltonian, InstanceError, ParseError, instance_digest

__all__ = [
    "Pair",
    "ConstraintError",
    "StabilizerSolution",
    "MatchingPlan",
    "SignAssignment",
    "GaussianSolution",
    "build_stabilizer",
    "build_matching_plan",
    "complete_assignment",
    "validate_assignment",
    "energy_of_z",
    "derandomize",
    "covariance_of",
    "SolutionFile",
    "serialize_solution",
    "parse_solution",
    "reconstruct_solution",
]

Pair = Tuple[int, int]


class ConstraintError(ValueError):
    """A z assignment violates a selected term's parity constraint."""


@dataclass(frozen=True)
class StabilizerSolution:
    """Selected term ids with their signs and the certified closed-form energy."""

    modes: int
    term_ids: Tuple[int, ...]
    signs: Tuple[int, ...]
    certified_energy: float


@dataclass(frozen=True)
class MatchingPlan:
    """Pairings and parities underlying the Gaussian mixture.

    term_pairs[s] lists the consecutive index pairs of selected term s (in
    support order, which is lexicographic pair order); the last pair of each
    term is the dependent variable of its parity constraint.  leftover_pairs
    pair up the indices untouched by the selection.  parities[s] is s_G and
    signs[s] is sign(H_G).
    """

    modes: int
    term_ids: Tuple[int, ...]
    term_pairs: Tuple[Tuple[Pair, ...], ...]
    leftover_pairs: Tuple[Pair, ...]
    parities: Tuple[int, ...]
    signs: Tuple[int, ...]

    def all_pairs(self) -> Tuple[Pair, ...]:
        """Every pair of the plan, term groups first, then the leftovers."""
        out: List[Pair] = []
        for pairs in self.term_pairs:
            out.extend(pairs)
        out.extend(self.leftover_pairs)
        return tuple(out)

    def free_pairs(self) -> Tuple[Pair, ...]:
        """Unconstrained pairs in lexicographic order."""
        free: List[Pair] = list(self.leftover_pairs)
        for pairs in self.term_pairs:
            free.extend(pairs[:-1])
        return tuple(sorted(free))

    def dependent_pair(self, slot: int) -> Pair:
        return self.term_pairs[slot][-1]

    def target_parity(self, slot: int) -> int:
        """Required product of z over the slot's pairs: s_G sign(H_G)."""
        return self.parities[slot] * self.signs[slot]


class SignAssignment(Mapping[Pair, int]):
    """An immutable full map pair -> +-1 over all pairs of a plan."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[Pair, int]) -> None:
        vals: Dict[Pair, int] = {}
        for pair, z in values.items():
            g, h = pair
            if not (0 <= g < h):
                raise ValueError("pair %r is not ordered" % (pair,))
            if z not in (1, -1):
                raise ValueError("z value for pair %r must be +-1, got %r" % (pair, z))
            vals[(int(g), int(h))] = int(z)
        self._values = vals

    def __getitem__(self, pair: Pair) -> int:
        return self._values[pair]

    def __iter__(self):
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SignAssignment):
            return self._values == other._values
        return NotImplemented

    def __repr__(self) -> str:
        items = ", ".join(
            "(%d,%d):%+d" % (g, h, z) for (g, h), z in sorted(self._values.items())
        )
        return "SignAssignment({%s})" % items


def _selection_ids(selection: Union[IndependentSelection, Sequence[int]]) -> Tuple[int, ...]:
    if isinstance(selection, IndependentSelection):
        ids = selection.term_ids
    else:
        ids = tuple(selection)
    out = tuple(sorted(int(i) for i in ids))
    if len(set(out)) != len(out):
        raise ValueError("selection repeats a term id: %r" % (out,))
    return out


def _check_ids(ids: Tuple[int, ...], h: Hamiltonian) -> None:
    for t in ids:
        if t < 0 or t >= len(h.terms):
            raise ValueError("term id %d out of range (instance has %d terms)" % (t, len(h.terms)))


def build_stabilizer(
    selection: Union[IndependentSelection, Sequence[int]],
    h: Hamiltonian,
    graph: Optional[ConflictGraph] = None,
) -> StabilizerSolution:
    """Stabilizer-type solution for an independent selection.

    Defensively re-checks independence in the conflict graph (auto regime if
    none is supplied) and verifies that all selected generators commute in
    the exact monomial algebra.
    """
    ids = _selection_ids(selection)
    _check_ids(ids, h)
    if graph is None:
        graph = build_graph(h, "auto")
    for a in range(len(ids)):
        for b in range(a + 1, len(ids)):
            if graph.are_adjacent(ids[a], ids[b]):
                raise ValueError(
                    "terms %d and %d conflict; selection is not independent"
                    % (ids[a], ids[b])
                )
    monomials = [h.terms[t].monomial() for t in ids]
    for a in range(len(monomials)):
        for b in range(a + 1, len(monomials)):
            ab = multiply_monomials(monomials[a], monomials[b])
            ba = multiply_monomials(monomials[b], monomials[a])
            if ab != ba:
                raise AssertionError(
                    "selected generators %d and %d do not commute" % (ids[a], ids[b])
                )
    signs = tuple(h.terms[t].sign for t in ids)
    certified = float(sum(abs(h.terms[t].coefficient) for t in ids))
    return StabilizerSolution(
        modes=h.modes, term_ids=ids, signs=signs, certified_energy=certified
    )


def build_matching_plan(
    selection: Union[IndependentSelection, Sequence[int]], h: Hamiltonian
) -> MatchingPlan:
    """Consecutive pairings of each selected support and of the leftovers.

    The parity s_G of each selected term is computed exactly from
    (prod i c_g c_h) c^G = s_G I in the monomial algebra.
    """
    ids = _selection_ids(selection)
    _check_ids(ids, h)
    used: set = set()
    term_pairs: List[Tuple[Pair, ...]] = []
    parities: List[int] = []
    signs: List[int] = []
    for t in ids:
        term = h.terms[t]
        if used & set(term.support):
            raise ValueError("selected supports overlap; selection is invalid")
        used.update(term.support)
        sup = term.support
        pairs = tuple((sup[i], sup[i + 1]) for i in range(0, len(sup), 2))
        acc = IDENTITY
        for g, hh in pairs:
            acc = multiply_monomials(acc, MajoranaMonomial((g, hh), PLUS_I))
        acc = multiply_monomials(acc, term.monomial())
        if acc.indices != () or not acc.phase.is_real:
            raise AssertionError("matching parity of term %d is not +-identity" % t)
        term_pairs.append(pairs)
        parities.append(acc.phase.sign)
        signs.append(term.sign)
    leftover = sorted(set(range(2 * h.modes)) - used)
    leftover_pairs = tuple(
        (leftover[i], leftover[i + 1]) for i in range(0, len(leftover), 2)
    )
    return MatchingPlan(
        modes=h.modes,
        term_ids=ids,
        term_pairs=tuple(term_pairs),
        leftover_pairs=leftover_pairs,
        parities=tuple(parities),
        signs=tuple(signs),
    )


def complete_assignment(plan: MatchingPlan, free: Mapping[Pair, int]) -> SignAssignment:
    """Extend values for every free pair to a full constraint-satisfying map."""
    free_set = set(plan.free_pairs())
    extra = set(free) - free_set
    if extra:
        raise ValueError("not free pairs of this plan: %r" % sorted(extra))
    missing = free_set - set(free)
    if missing:
        raise ValueError("free pairs left unassigned: %r" % sorted(missing))
    values: Dict[Pair, int] = {p: int(free[p]) for p in free_set}
    for slot in range(len(plan.term_ids)):
        pairs = plan.term_pairs[slot]
        z_dep = plan.target_parity(slot)
        for p in pairs[:-1]:
            z_dep *= values[p]
        values[pairs[-1]] = z_dep
    return SignAssignment(values)


def validate_assignment(plan: MatchingPlan, z: SignAssignment) -> None:
    """Check completeness and every selected term's parity constraint."""
    expected = set(plan.all_pairs())
    got = set(z)
    if got != expected:
        raise ValueError(
            "assignment pairs do not match plan (missing %r, extra %r)"
            % (sorted(expected - got), sorted(got - expected))
        )
    for slot, tid in enumerate(plan.term_ids):
        prod = 1
        for p in plan.term_pairs[slot]:
            prod *= z[p]
        if prod != plan.target_parity(slot):
            raise ConstraintError(
                "term %d parity violated: prod z = %+d, required %+d"
                % (tid, prod, plan.target_parity(slot))
            )


@dataclass(frozen=True)
class _Contribution:
    term_id: int
    base: float
    free_set: FrozenSet[Pair]


def _contributions(plan: MatchingPlan, h: Hamiltonian) -> List[_Contribution]:
    """Closed-form expansion of Tr(H rho'(z)) over the plan's pairs.

    A term contributes iff its support is a union of plan pairs.  Its pair
    product is rewritten over free variables only: the dependent variable of
    each selected term is substituted by its constraint, absorbing the target
    parity into the scalar and toggling the group's free pairs (z^2 = 1).
    """
    pair_of: Dict[int, Pair] = {}
    for p in plan.all_pairs():
        pair_of[p[0]] = p
        pair_of[p[1]] = p
    owner: Dict[Pair, int] = {}
    for slot in range(len(plan.term_ids)):
        owner[plan.dependent_pair(slot)] = slot
    out: List[_Contribution] = []
    for tid, term in enumerate(h.terms):
        pairs = []
        ok = True
        seen: set = set()
        for idx in term.support:
            p = pair_of[idx]
            if p[0] not in term.support or p[1] not in term.support:
                ok = False
                break
            if p not in seen:
                seen.add(p)
                pairs.append(p)
        if not ok:
            continue
        acc = IDENTITY
        for p in sorted(pairs):
            acc = multiply_monomials(acc, MajoranaMonomial(p, PLUS_I))
        acc = multiply_monomials(acc, term.monomial())
        if acc.indices != () or not acc.phase.is_real:
            raise AssertionError("pair product of term %d is not +-identity" % tid)
        base = term.coefficient * acc.phase.sign
        free_set: set = set()
        for p in pairs:
            slot = owner.get(p)
            if slot is None:
                free_set.symmetric_difference_update({p})
            else:
                base *= plan.target_parity(slot)
                free_set.symmetric_difference_update(plan.term_pairs[slot][:-1])
        out.append(_Contribution(tid, base, frozenset(free_set)))
    return out


def _expectation(table: Sequence[_Contribution], assigned: Mapping[Pair, int]) -> float:
    total = 0.0
    for contrib in table:
        value = contrib.base
        settled = True
        for p in contrib.free_set:
            z = assigned.get(p)
            if z is None:
                settled = False
                break
            value *= z
        if settled:
            total += value
    return total


def energy_of_z(
    plan: MatchingPlan,
    z: Union[SignAssignment, Mapping[Pair, int], None],
    h: Hamiltonian,
) -> float:
    """Closed-form Tr(H rho'(z)), exact over expressible terms.

    ``z`` may be a full SignAssignment (validated against the parity
    constraints), a partial map over free pairs (unset variables contribute
    their mean 0, the dependent variable of a fully assigned group is
    substituted), or None/empty for the full average, which equals the
    certified stabilizer energy.
    """
    table = _contributions(plan, h)
    if z is None:
        assigned: Mapping[Pair, int] = {}
    elif isinstance(z, SignAssignment):
        validate_assignment(plan, z)
        assigned = {p: z[p] for p in plan.free_pairs()}
    else:
        free_set = set(plan.free_pairs())
        assigned = {}
        for pair, value in z.items():
            p = (int(pair[0]), int(pair[1]))
            if p not in free_set:
                raise ValueError(
                    "pair %r is not a free pair of this plan (dependent "
                    "variables are derived, not assigned)" % (p,)
                )
            if value not in (1, -1):
                raise ValueError("z value for %r must be +-1, got %r" % (p, value))
            assigned[p] = int(value)
    return _expectation(table, assigned)


@dataclass(frozen=True, eq=False)
class GaussianSolution:
    """A single Gaussian state: full z assignment, covariance, exact energy."""

    plan: MatchingPlan
    z: SignAssignment
    covariance: np.ndarray
    energy: float


def derandomize(plan: MatchingPlan, h: Hamiltonian) -> GaussianSolution:
    """Fix free pairs by conditional expectations; the energy never decreases.

    Free variables are processed in lexicographic pair order; each is set to
    the value of larger conditional expectation, ties to +1.  Since the
    expectation is the average of the two branches, the final energy is at
    least the initial average, i.e. the certified stabilizer energy.
    """
    table = _contributions(plan, h)
    assigned: Dict[Pair, int] = {}
    current = _expectation(table, assigned)
    for p in plan.free_pairs():
        assigned[p] = 1
        plus = _expectation(table, assigned)
        assigned[p] = -1
        minus = _expectation(table, assigned)
        choice = 1 if plus >= minus else -1
        assigned[p] = choice
        best = plus if choice == 1 else minus
        if best < current - 1e-9:
            raise AssertionError("conditional expectation decreased")
        current = best
    z = complete_assignment(plan, assigned)
    energy = _expectation(table, assigned)
    return GaussianSolution(
        plan=plan, z=z, covariance=covariance_of(plan, z), energy=float(energy)
    )


def covariance_of(plan: MatchingPlan, z: SignAssignment) -> np.ndarray:
    """Integer covariance matrix M with M[g,h] = z_gh on matched pairs.

    Antisymmetric with exactly one +-1 per row, so M @ M = -I in exact
    integer arithmetic.
    """
    validate_assignment(plan, z)
    dim = 2 * plan.modes
    cov = np.zeros((dim, dim), dtype=np.int64)
    for g, hh in plan.all_pairs():
        cov[g, hh] = z[(g, hh)]
        cov[hh, g] = -z[(g, hh)]
    return cov


# ---------------------------------------------------------------------------
# solution file format


@dataclass(frozen=True, eq=False)
class SolutionFile:
    """Raw fields of a parsed solution file (0-based indices)."""

    digest: str
    modes: int
    regime: str
    colors: int
    certified_energy: float
    gaussian_energy: float
    selected: Tuple[Tuple[int, Tuple[int, ...]], ...]
    term_pair_lines: Tuple[Tuple[int, int, int], ...]
    leftover_pair_lines: Tuple[Tuple[int, int, int], ...]
    covariance: np.ndarray


def serialize_solution(
    h: Hamiltonian,
    regime: str,
    num_colors: int,
    stabilizer: StabilizerSolution,
    gaussian: GaussianSolution,
) -> str:
    """Self-describing solution text: selection, plan, z, covariance, hash."""
    plan = gaussian.plan
    lines = [
        "solution-format 1",
        "instance-sha256 %s" % instance_digest(h),
        "modes %d" % h.modes,
        "regime %s" % regime,
        "colors %d" % num_colors,
        "certified-energy %s" % repr(stabilizer.certified_energy),
        "gaussian-energy %s" % repr(gaussian.energy),
    ]
    for tid, sign in zip(stabilizer.term_ids, stabilizer.signs):
        sup = " ".join(str(i + 1) for i in h.terms[tid].support)
        lines.append("selected %+d %s" % (sign, sup))
    for pairs in plan.term_pairs:
        for g, hh in pairs:
            lines.append("pair term %d %d %+d" % (g + 1, hh + 1, gaussian.z[(g, hh)]))
    for g, hh in plan.leftover_pairs:
        lines.append("pair leftover %d %d %+d" % (g + 1, hh + 1, gaussian.z[(g, hh)]))
    for row in gaussian.covariance:
        lines.append("cov %s" % " ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> SolutionFile:
    """Parse a solution file; errors carry 1-based line numbers."""
    header: Dict[str, str] = {}
    selected: List[Tuple[int, Tuple[int, ...]]] = []
    term_pair_lines: List[Tuple[int, int, int]] = []
    leftover_pair_lines: List[Tuple[int, int, int]] = []
    cov_rows: List[List[int]] = []

    def want_int(lineno: int, text_value: str, what: str) -> int:
        try:
            return int(text_value)
        except ValueError:
            raise ParseError(lineno, "%s %r is not an integer" % (what, text_value))

    def want_float(lineno: int, text_value: str, what: str) -> float:
        try:
            return float(text_value)
        except ValueError:
            raise ParseError(lineno, "%s %r is not a number" % (what, text_value))

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        keyword = fields[0]
        if keyword in (
            "solution-format",
            "instance-sha256",
            "modes",
            "regime",
            "colors",
            "certified-energy",
            "gaussian-energy",
        ):
            if len(fields) != 2:
                raise ParseError(lineno, "expected '%s <value>'" % keyword)
            if keyword in header:
                raise ParseError(lineno, "duplicate %s line" % keyword)
            header[keyword] = fields[1]
        elif keyword == "selected":
            if len(fields) < 4:
                raise ParseError(lineno, "expected 'selected <sign> <i1> ... <iq>'")
            sign = want_int(lineno, fields[1], "sign")
            if sign not in (1, -1):
                raise ParseError(lineno, "sign must be +1 or -1, got %d" % sign)
            idx = tuple(
                sorted(want_int(lineno, f, "index") - 1 for f in fields[2:])
            )
            if any(i < 0 for i in idx):
                raise ParseError(lineno, "index must be >= 1")
            selected.append((sign, idx))
        elif keyword == "pair":
            if len(fields) != 5 or fields[1] not in ("term", "leftover"):
                raise ParseError(
                    lineno, "expected 'pair term|leftover <g> <h> <z>'"
                )
            g = want_int(lineno, fields[2], "index") - 1
            hh = want_int(lineno, fields[3], "index") - 1
            zval = want_int(lineno, fields[4], "z")
            if zval not in (1, -1):
                raise ParseError(lineno, "z must be +1 or -1, got %d" % zval)
            if not 0 <= g < hh:
                raise ParseError(lineno, "pair indices must satisfy 1 <= g < h")
            entry = (g, hh, zval)
            if fields[1] == "term":
                term_pair_lines.append(entry)
            else:
                leftover_pair_lines.append(entry)
        elif keyword == "cov":
            cov_rows.append([want_int(lineno, f, "entry") for f in fields[1:]])
        else:
            raise ParseError(lineno, "unknown directive %r" % keyword)

    for required in (
        "solution-format",
        "instance-sha256",
        "modes",
        "regime",
        "colors",
        "certified-energy",
        "gaussian-energy",
    ):
        if required not in header:
            raise ParseError(1, "missing %s line" % required)
    if header["solution-format"] != "1":
        raise ParseError(1, "unsupported solution format %r" % header["solution-format"])
    modes = want_int(1, header["modes"], "modes")
    dim = 2 * modes
    if len(cov_rows) != dim or any(len(r) != dim for r in cov_rows):
        raise ParseError(1, "covariance must be %d rows of %d entries" % (dim, dim))
    return SolutionFile(
        digest=header["instance-sha256"],
        modes=modes,
        regime=header["regime"],
        colors=want_int(1, header["colors"], "colors"),
        certified_energy=want_float(1, header["certified-energy"], "certified-energy"),
        gaussian_energy=want_float(1, header["gaussian-energy"], "gaussian-energy"),
        selected=tuple(selected),
        term_pair_lines=tuple(term_pair_lines),
        leftover_pair_lines=tuple(leftover_pair_lines),
        covariance=np.array(cov_rows, dtype=np.int64),
    )


def reconstruct_solution(
    h: Hamiltonian, sol: SolutionFile
) -> Tuple[str, int, StabilizerSolution, GaussianSolution]:
    """Rebuild and cross-check the solution objects against the instance.

    The instance hash, term signs, matching plan, parity constraints, stated
    energies, and covariance entries must all agree with what the instance
    dictates; any mismatch raises InstanceError.
    """
    if sol.digest != instance_digest(h):
        raise InstanceError(
            "solution was computed for a different instance "
            "(hash %s... != %s...)" % (sol.digest[:12], instance_digest(h)[:12])
        )
    if sol.modes != h.modes:
        raise InstanceError("solution modes %d != instance modes %d" % (sol.modes, h.modes))
    support_ids = {t.support: i for i, t in enumerate(h.terms)}
    ids = []
    for sign, sup in sol.selected:
        tid = support_ids.get(sup)
        if tid is None:
            raise InstanceError("selected support %r is not an instance term" % (sup,))
        if sign != h.terms[tid].sign:
            raise InstanceError(
                "stored sign %+d of support %r contradicts coefficient %r"
                % (sign, sup, h.terms[tid].coefficient)
            )
        ids.append(tid)
    graph = build_graph(h, sol.regime)
    stab = build_stabilizer(ids, h, graph)
    if not math.isclose(stab.certified_energy, sol.certified_energy, abs_tol=1e-9):
        raise InstanceError(
            "stored certified energy %r != recomputed %r"
            % (sol.certified_energy, stab.certified_energy)
        )
    plan = build_matching_plan(ids, h)
    expected_term_pairs = [p for pairs in plan.term_pairs for p in pairs]
    if [(g, hh) for g, hh, _ in sol.term_pair_lines] != expected_term_pairs:
        raise InstanceError("stored term pairs do not match the matching plan")
    if [(g, hh) for g, hh, _ in sol.leftover_pair_lines] != list(plan.leftover_pairs):
        raise InstanceError("stored leftover pairs do not match the matching plan")
    values = {(g, hh): z for g, hh, z in sol.term_pair_lines}
    values.update({(g, hh): z for g, hh, z in sol.leftover_pair_lines})
    z = SignAssignment(values)
    validate_assignment(plan, z)
    energy = energy_of_z(plan, z, h)
    if not math.isclose(energy, sol.gaussian_energy, abs_tol=1e-9):
        raise InstanceError(
            "stored gaussian energy %r != recomputed %r" % (sol.gaussian_energy, energy)
        )
    cov = covariance_of(plan, z)
    if not np.array_equal(cov, sol.covariance):
        raise InstanceError("stored covariance does not match the z assignment")
    gauss = GaussianSolution(plan=plan, z=z, covariance=cov, energy=float(energy))
    return sol.regime, sol.colors, stab, gauss
