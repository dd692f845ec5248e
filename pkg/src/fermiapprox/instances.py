"""Instance generators: the optimality family and seeded random instances.

The optimality family H_n couples two banks of n Majorana indices,

    H_n = sum_{a in A, b in B} i c_a c_b,   A = {0..n-1}, B = {n..2n-1}
    (1-based: A = {1..n}, B = {n+1..2n}),

on n modes: n^2 unit-coefficient 2-local terms with sparsity k = n, weight
m = n^2, and extreme eigenvalues exactly +-n, which pins the certified
energy within a factor Theta(k) of the optimum.

Random instances draw supports by rejection under a per-index occupancy
counter, so the requested sparsity bound k is enforced exactly; coefficient
magnitudes are uniform in [coeff_low, coeff_high] with random sign.  All
draws come from a seeded stdlib generator, so serialization is byte
identical across runs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .hamiltonian import Hamiltonian, analyze

__all__ = [
    "GeneratorError",
    "GeneratorSpec",
    "KIND_OPTIMALITY",
    "KIND_STRICT",
    "KIND_MIXED24",
    "KIND_GENERAL",
    "optimality_family",
    "random_instance",
    "generate",
]

KIND_OPTIMALITY = "optimality"
KIND_STRICT = "strictq"
KIND_MIXED24 = "mixed24"
KIND_GENERAL = "general"
_KINDS = (KIND_OPTIMALITY, KIND_STRICT, KIND_MIXED24, KIND_GENERAL)

_SIZE_POOLS = {
    KIND_STRICT: None,  # every term has size spec.locality
    KIND_MIXED24: (2, 4),
    KIND_GENERAL: (2, 4, 6),
}


class GeneratorError(ValueError):
    """The generator spec is malformed or infeasible."""


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one reproducible instance draw."""

    kind: str
    modes: int
    num_terms: int = 0
    sparsity: int = 2
    locality: int = 2
    coeff_low: float = 0.1
    coeff_high: float = 1.0
    seed: int = 0


def optimality_family(n: int) -> Hamiltonian:
    """H_n: all n^2 couplings between index banks {0..n-1} and {n..2n-1}."""
    if n < 1:
        raise GeneratorError("family parameter n must be >= 1, got %d" % n)
    terms = []
    for a in range(n):
        for b in range(n, 2 * n):
            terms.append(((a, b), 1.0))
    return analyze(terms, modes=n)


def random_instance(spec: GeneratorSpec) -> Hamiltonian:
    """Draw a k-sparse instance for a GeneratorSpec; deterministic in the seed."""
    if spec.kind == KIND_OPTIMALITY:
        return optimality_family(spec.modes)
    if spec.kind not in _SIZE_POOLS:
        raise GeneratorError("unknown generator kind %r (expected one of %s)" % (spec.kind, _KINDS))
    if spec.modes < 1:
        raise GeneratorError("modes must be >= 1, got %d" % spec.modes)
    if spec.num_terms < 1:
        raise GeneratorError("num_terms must be >= 1, got %d" % spec.num_terms)
    if spec.sparsity < 1:
        raise GeneratorError("sparsity must be >= 1, got %d" % spec.sparsity)
    if not 0 < spec.coeff_low <= spec.coeff_high:
        raise GeneratorError(
            "coefficient range must satisfy 0 < low <= high, got [%r, %r]"
            % (spec.coeff_low, spec.coeff_high)
        )
    sizes = _SIZE_POOLS[spec.kind]
    if sizes is None:
        if spec.locality < 2 or spec.locality % 2 != 0:
            raise GeneratorError(
                "strict locality must be an even integer >= 2, got %d" % spec.locality
            )
        sizes = (spec.locality,)
    num_indices = 2 * spec.modes
    if min(sizes) > num_indices:
        raise GeneratorError(
            "smallest support size %d exceeds the %d available indices"
            % (min(sizes), num_indices)
        )
    capacity = num_indices * spec.sparsity // min(sizes)
    if spec.num_terms > capacity:
        raise GeneratorError(
            "%d terms cannot fit: %d indices at sparsity %d hold at most %d "
            "terms of size %d"
            % (spec.num_terms, num_indices, spec.sparsity, capacity, min(sizes))
        )
    distinct = sum(math.comb(num_indices, s) for s in sizes)
    if spec.num_terms > distinct:
        raise GeneratorError(
            "%d terms requested but only %d distinct supports of sizes %s "
            "exist on %d indices"
            % (spec.num_terms, distinct, list(sizes), num_indices)
        )
    rng = random.Random(spec.seed)
    occupancy = [0] * num_indices
    supports: set = set()
    raw: List[Tuple[Tuple[int, ...], float]] = []
    for _ in range(spec.num_terms):
        placed = False
        for _attempt in range(500):
            size = rng.choice(sizes)
            available = [i for i in range(num_indices) if occupancy[i] < spec.sparsity]
            if len(available) < size:
                continue
            support = tuple(sorted(rng.sample(available, size)))
            if support in supports:
                continue
            supports.add(support)
            for idx in support:
                occupancy[idx] += 1
            magnitude = rng.uniform(spec.coeff_low, spec.coeff_high)
            sign = rng.choice((-1.0, 1.0))
            raw.append((support, sign * magnitude))
            placed = True
            break
        if not placed:
            raise GeneratorError(
                "could not place term %d/%d under sparsity %d (spec infeasible "
                "or too tight)" % (len(raw) + 1, spec.num_terms, spec.sparsity)
            )
    return analyze(raw, spec.modes)


def generate(spec: GeneratorSpec) -> Hamiltonian:
    """Dispatch: the optimality family ignores every field except modes."""
    return random_instance(spec)
