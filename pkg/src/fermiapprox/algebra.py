"""Exact Majorana monomial algebra.

The algebra works over 2n Majorana generators c_0, ..., c_{2n-1} obeying

    c_i c_j + c_j c_i = 2 delta_ij I .

Indices are 0-based everywhere in memory; the instance file format is 1-based
and converted at the parse boundary only.  A monomial is a phase from
{+1, +i, -1, -i} times a product of distinct generators written in strictly
increasing index order (normal form).  Phases and reordering signs are exact
integer arithmetic throughout; no floating point enters any sign computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Tuple

__all__ = [
    "Phase",
    "PLUS_ONE",
    "PLUS_I",
    "MINUS_ONE",
    "MINUS_I",
    "MajoranaMonomial",
    "IDENTITY",
    "multiply_monomials",
    "hermitize_phase",
]

_PHASE_LABELS = ("+1", "+i", "-1", "-i")
_PHASE_VALUES = (1 + 0j, 1j, -1 + 0j, -1j)


class Phase:
    """A fourth root of unity i**k, stored exactly as the exponent k mod 4.

    Closed under multiplication; the fourth power of any phase is +1.
    """

    __slots__ = ("exponent",)

    def __init__(self, exponent: int = 0) -> None:
        self.exponent = exponent % 4

    def __mul__(self, other: "Phase") -> "Phase":
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self.exponent + other.exponent)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Phase) and self.exponent == other.exponent

    def __hash__(self) -> int:
        return hash(("Phase", self.exponent))

    @property
    def is_real(self) -> bool:
        return self.exponent % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for a real phase; raises for +i / -i."""
        if not self.is_real:
            raise ValueError("phase %s is imaginary, has no sign" % self)
        return 1 if self.exponent == 0 else -1

    def to_complex(self) -> complex:
        return _PHASE_VALUES[self.exponent]

    def __str__(self) -> str:
        return _PHASE_LABELS[self.exponent]

    def __repr__(self) -> str:
        return "Phase(%d)" % self.exponent


PLUS_ONE = Phase(0)
PLUS_I = Phase(1)
MINUS_ONE = Phase(2)
MINUS_I = Phase(3)


@dataclass(frozen=True)
class MajoranaMonomial:
    """A normal-form Majorana monomial: phase * c_{i1} ... c_{ip}, i1 < ... < ip.

    The empty index tuple with phase +1 is the identity operator.
    """

    indices: Tuple[int, ...]
    phase: Phase = field(default_factory=lambda: PLUS_ONE)

    def __post_init__(self) -> None:
        idx = tuple(self.indices)
        object.__setattr__(self, "indices", idx)
        for a, b in zip(idx, idx[1:]):
            if a >= b:
                raise ValueError(
                    "monomial indices must be strictly increasing, got %r" % (idx,)
                )
        if idx and idx[0] < 0:
            raise ValueError("negative Majorana index in %r" % (idx,))

    @property
    def degree(self) -> int:
        return len(self.indices)

    def __mul__(self, other: "MajoranaMonomial") -> "MajoranaMonomial":
        if not isinstance(other, MajoranaMonomial):
            return NotImplemented
        return multiply_monomials(self, other)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __str__(self) -> str:
        if not self.indices:
            return "%s I" % self.phase
        return "%s %s" % (self.phase, " ".join("c%d" % i for i in self.indices))


IDENTITY = MajoranaMonomial(())


def multiply_monomials(a: MajoranaMonomial, b: MajoranaMonomial) -> MajoranaMonomial:
    """Product of two normal-form monomials, again in normal form.

    The index lists are merged; each transposition needed to sort the
    concatenation contributes a factor -1, and equal adjacent pairs cancel
    through c_i^2 = I.  The reordering sign is counted exactly (merge walk,
    integer arithmetic only).
    """
    left = a.indices
    right = b.indices
    merged = []
    transpositions = 0
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] < right[j]:
            merged.append(left[i])
            i += 1
        elif left[i] > right[j]:
            # right[j] crosses every remaining left factor
            transpositions += len(left) - i
            merged.append(right[j])
            j += 1
        else:
            # equal indices annihilate; right[j] crosses the factors after left[i]
            transpositions += len(left) - i - 1
            i += 1
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    phase = a.phase * b.phase
    if transpositions % 2:
        phase = phase * MINUS_ONE
    return MajoranaMonomial(tuple(merged), phase)


def hermitize_phase(q: int) -> Phase:
    """Phase making the ordered product of q distinct generators Hermitian.

    Reversing a q-factor product costs q(q-1)/2 transpositions, so the plain
    product is Hermitian iff q(q-1)/2 is even.  For even q this gives +i when
    q = 2 (mod 4) and +1 when q = 0 (mod 4); the same rule covers q = 2, 4
    and every larger even locality.
    """
    if q < 2 or q % 2 != 0:
        raise ValueError("locality must be an even integer >= 2, got %d" % q)
    return PLUS_I if q % 4 == 2 else PLUS_ONE
