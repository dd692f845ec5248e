"""Fermionic Hamiltonian model, sparsity analysis, and the instance text format.

A Hamiltonian is a real linear combination H = sum_G H_G c^G over distinct
even-sized Majorana supports G, where c^G is the hermitized monomial
(hermitize_phase(|G|) times the ordered product of the generators in G).
Sparsity k is the largest number of terms any single Majorana index touches,
locality q the largest support size, and the weight m = sum_G |H_G|.

Instance files are plain text, 1-based::

    modes 3
    term 1 2 1.0
    term 1 2 3 4 -0.5

Blank lines and lines starting with '#' are ignored.  The serialized form is
canonical (terms sorted by support, coefficients via repr) so parse/serialize
round-trips are byte identical.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

from .algebra import MajoranaMonomial, hermitize_phase

__all__ = [
    "InstanceError",
    "ParseError",
    "Term",
    "Hamiltonian",
    "STRICT_LOCAL",
    "MIXED_24",
    "GENERAL",
    "analyze",
    "parse_instance",
    "serialize_instance",
    "instance_digest",
]

STRICT_LOCAL = "strict-q"
MIXED_24 = "mixed-2-4"
GENERAL = "general"


class InstanceError(ValueError):
    """A structurally invalid Hamiltonian instance."""


class ParseError(InstanceError):
    """Malformed instance or solution text; carries the 1-based line number."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__("line %d: %s" % (line, message))
        self.line = line


@dataclass(frozen=True)
class Term:
    """One Hamiltonian term: real coefficient times the hermitized monomial c^G."""

    support: Tuple[int, ...]
    coefficient: float

    @property
    def locality(self) -> int:
        return len(self.support)

    @property
    def sign(self) -> int:
        return 1 if self.coefficient > 0 else -1

    def monomial(self) -> MajoranaMonomial:
        """The Hermitian monomial c^G this term multiplies (coefficient excluded)."""
        return MajoranaMonomial(self.support, hermitize_phase(len(self.support)))


@dataclass(frozen=True)
class Hamiltonian:
    """An analyzed instance: canonical term order plus derived statistics."""

    modes: int
    terms: Tuple[Term, ...]
    sparsity: int
    max_locality: int
    total_weight: float
    locality_class: str

    @property
    def num_indices(self) -> int:
        return 2 * self.modes

    def supports(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(t.support for t in self.terms)


def _validate_support(support: Sequence[int], modes: int) -> Tuple[int, ...]:
    sup = tuple(support)
    if len(sup) == 0 or len(sup) % 2 != 0:
        raise InstanceError("support size must be even and positive, got %r" % (sup,))
    if len(set(sup)) != len(sup):
        raise InstanceError("duplicate Majorana index in support %r" % (sup,))
    sup = tuple(sorted(sup))
    if sup[0] < 0 or sup[-1] >= 2 * modes:
        raise InstanceError(
            "support %r out of range for %d modes (indices 0..%d)"
            % (sup, modes, 2 * modes - 1)
        )
    return sup


def analyze(raw_terms: Iterable[Tuple[Sequence[int], float]], modes: int) -> Hamiltonian:
    """Validate raw (support, coefficient) pairs and compute instance statistics.

    Supports are sorted, terms are put into canonical support-lexicographic
    order, and k / q / m / locality class are derived.  Duplicate supports,
    odd sizes, out-of-range indices, and zero or non-finite coefficients are
    rejected.
    """
    if modes < 1:
        raise InstanceError("modes must be >= 1, got %d" % modes)
    seen = {}
    cleaned = []
    for support, coeff in raw_terms:
        sup = _validate_support(support, modes)
        if sup in seen:
            raise InstanceError("duplicate term support %r" % (sup,))
        seen[sup] = True
        val = float(coeff)
        if val == 0.0:
            raise InstanceError("zero coefficient on support %r" % (sup,))
        if val != val or val in (float("inf"), float("-inf")):
            raise InstanceError("non-finite coefficient on support %r" % (sup,))
        cleaned.append(Term(sup, val))
    cleaned.sort(key=lambda t: t.support)

    counts = [0] * (2 * modes)
    for term in cleaned:
        for idx in term.support:
            counts[idx] += 1
    sparsity = max(counts) if cleaned else 0
    sizes = sorted({t.locality for t in cleaned})
    max_locality = sizes[-1] if sizes else 0
    weight = float(sum(abs(t.coefficient) for t in cleaned))
    if len(sizes) <= 1:
        locality_class = STRICT_LOCAL
    elif set(sizes) <= {2, 4}:
        locality_class = MIXED_24
    else:
        locality_class = GENERAL
    return Hamiltonian(
        modes=modes,
        terms=tuple(cleaned),
        sparsity=sparsity,
        max_locality=max_locality,
        total_weight=weight,
        locality_class=locality_class,
    )


def parse_instance(text: str) -> Hamiltonian:
    """Parse the instance text format; errors carry 1-based line numbers."""
    modes = None
    raw = []
    support_lines = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        keyword = fields[0]
        if keyword == "modes":
            if modes is not None:
                raise ParseError(lineno, "duplicate modes line")
            if len(fields) != 2:
                raise ParseError(lineno, "expected 'modes <n>'")
            try:
                modes = int(fields[1])
            except ValueError:
                raise ParseError(lineno, "modes count %r is not an integer" % fields[1])
            if modes < 1:
                raise ParseError(lineno, "modes must be >= 1, got %d" % modes)
        elif keyword == "term":
            if modes is None:
                raise ParseError(lineno, "term line before modes line")
            if len(fields) < 4:
                raise ParseError(
                    lineno, "expected 'term <i1> ... <iq> <coeff>' with q >= 2"
                )
            try:
                indices = [int(f) for f in fields[1:-1]]
            except ValueError:
                raise ParseError(lineno, "non-integer Majorana index")
            try:
                coeff = float(fields[-1])
            except ValueError:
                raise ParseError(lineno, "coefficient %r is not a number" % fields[-1])
            if len(indices) % 2 != 0:
                raise ParseError(
                    lineno, "odd support size %d (must be even)" % len(indices)
                )
            if len(set(indices)) != len(indices):
                raise ParseError(lineno, "duplicate Majorana index in term")
            for idx in indices:
                if idx < 1 or idx > 2 * modes:
                    raise ParseError(
                        lineno,
                        "index %d out of range 1..%d" % (idx, 2 * modes),
                    )
            if coeff == 0.0:
                raise ParseError(lineno, "zero coefficient")
            sup = tuple(sorted(i - 1 for i in indices))
            if sup in support_lines:
                raise ParseError(
                    lineno,
                    "duplicate term support (first seen at line %d)"
                    % support_lines[sup],
                )
            support_lines[sup] = lineno
            raw.append((sup, coeff))
        else:
            raise ParseError(lineno, "unknown directive %r" % keyword)
    if modes is None:
        raise ParseError(1, "missing modes line")
    return analyze(raw, modes)


def serialize_instance(h: Hamiltonian) -> str:
    """Canonical text form: sorted terms, 1-based indices, repr coefficients."""
    lines = ["modes %d" % h.modes]
    for term in h.terms:
        idx = " ".join(str(i + 1) for i in term.support)
        lines.append("term %s %s" % (idx, repr(term.coefficient)))
    return "\n".join(lines) + "\n"


def instance_digest(h: Hamiltonian) -> str:
    """SHA-256 of the canonical serialization; embedded in solution files."""
    return hashlib.sha256(serialize_instance(h).encode("ascii")).hexdigest()
