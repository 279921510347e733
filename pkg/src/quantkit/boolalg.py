"""Finite powerset Boolean algebras, filters, ultrafilters, and quotients.

Elements are bitmasks over atom indices: atom i is the mask 1 << i, bottom is
0, top is the all-ones mask. Every finite Boolean algebra is of this form, and
these algebras are complete, which the functional semantics relies on.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .formulas import Forall, Formula, Not, Or, Variable
from .terms import Term, single_subst
from .formulas import subst_formula


class InconsistentError(ValueError):
    """Raised when an operation requires a proper filter but got an improper one."""


@dataclass(frozen=True)
class FiniteBooleanAlgebra:
    atom_count: int

    def __post_init__(self):
        if self.atom_count < 1:
            raise ValueError("algebra needs at least one atom (0 = 1 otherwise)")

    @property
    def top(self) -> int:
        return (1 << self.atom_count) - 1

    @property
    def bot(self) -> int:
        return 0

    def elements(self) -> range:
        return range(1 << self.atom_count)

    def atoms(self) -> list[int]:
        return [1 << i for i in range(self.atom_count)]

    def is_element(self, p: int) -> bool:
        return 0 <= p <= self.top

    def meet(self, p: int, q: int) -> int:
        return p & q

    def join(self, p: int, q: int) -> int:
        return p | q

    def complement(self, p: int) -> int:
        return self.top & ~p

    def le(self, p: int, q: int) -> bool:
        return p & ~q == 0

    def meet_all(self, ps: Iterable[int]) -> int:
        out = self.top
        for p in ps:
            out &= p
        return out

    def join_all(self, ps: Iterable[int]) -> int:
        out = 0
        for p in ps:
            out |= p
        return out

    def element_to_atoms(self, p: int) -> list[int]:
        return [i for i in range(self.atom_count) if p >> i & 1]

    def atoms_to_element(self, idxs: Iterable[int]) -> int:
        out = 0
        for i in idxs:
            if not 0 <= i < self.atom_count:
                raise ValueError(f"atom index {i} out of range")
            out |= 1 << i
        return out


@dataclass(frozen=True)
class Filter:
    """Meet-closed, upward-closed subset; proper iff it avoids bottom."""

    algebra: FiniteBooleanAlgebra
    members: frozenset[int]

    def __post_init__(self):
        # in a finite algebra a meet-closed upward-closed set is exactly the
        # up-set of its total meet, so one comparison validates both closures
        B = self.algebra
        g = B.meet_all(self.members)
        if self.members != upset(B, g):
            raise ValueError("not a filter: must be meet-closed and upward closed")

    @property
    def is_proper(self) -> bool:
        return self.algebra.bot not in self.members

    def generator(self) -> int:
        return self.algebra.meet_all(self.members)

    def __contains__(self, p: int) -> bool:
        return p in self.members


@dataclass(frozen=True)
class Ultrafilter(Filter):
    """A filter deciding every element exactly one way."""

    def __post_init__(self):
        super().__post_init__()
        B = self.algebra
        for p in B.elements():
            if (p in self.members) == (B.complement(p) in self.members):
                raise ValueError("not an ultrafilter: dichotomy fails")

    def principal_atom_index(self) -> int:
        g = self.generator()
        assert g.bit_count() == 1
        return g.bit_length() - 1


def upset(B: FiniteBooleanAlgebra, g: int) -> frozenset[int]:
    return frozenset(p for p in B.elements() if B.le(g, p))


def generated_filter(B: FiniteBooleanAlgebra, J: Iterable[int]) -> Filter:
    """Smallest filter containing J: the up-set of meet(J), with meet({}) = 1.

    The result may be improper (contain 0); callers check.
    """
    return Filter(B, upset(B, B.meet_all(J)))


def is_consistent(B: FiniteBooleanAlgebra, J: Iterable[int]) -> bool:
    """Finite meet property: the meet of J (empty meet = 1) is nonzero."""
    return B.meet_all(J) != B.bot


def extend_to_ultrafilter(F: Filter) -> Ultrafilter:
    """Extend a proper filter to the ultrafilter at its least generator atom."""
    if not F.is_proper:
        raise InconsistentError("inconsistent: improper filter has no ultrafilter extension")
    g = F.generator()
    least_atom = g & -g
    return Ultrafilter(F.algebra, upset(F.algebra, least_atom))


def all_ultrafilters(B: FiniteBooleanAlgebra) -> list[Ultrafilter]:
    return [Ultrafilter(B, upset(B, a)) for a in B.atoms()]


@dataclass(frozen=True)
class Quotient:
    algebra: FiniteBooleanAlgebra
    project: Callable[[int], int] = field(compare=False)


def quotient(B: FiniteBooleanAlgebra, I: Filter) -> Quotient:
    """Quotient by a proper filter: p ~ q iff (p <-> q) is in I.

    For I generated by g this identifies p with p & g, so the quotient is the
    powerset algebra on the atoms below g; the projection is a surjective
    homomorphism sending members of I to top.
    """
    if not I.is_proper:
        raise InconsistentError("inconsistent: cannot quotient by an improper filter")
    g = I.generator()
    kept = [i for i in range(B.atom_count) if g >> i & 1]
    Q = FiniteBooleanAlgebra(len(kept))

    def project(p: int) -> int:
        out = 0
        for new_i, old_i in enumerate(kept):
            if p >> old_i & 1:
                out |= 1 << new_i
        return out

    return Quotient(Q, project)


def is_perfect_on_fragment(
    I: Ultrafilter,
    frag: list[tuple[Variable, Formula, list[Term]]],
    embed: Callable[[Formula], int],
) -> bool:
    """Witness property of an ultrafilter on a finite formula fragment.

    For every (z, q, candidates) some candidate d must make the witness
    formula forall z. q | ~(q[d/z]) land inside I under the embedding.
    """
    for z, q, candidates in frag:
        found = False
        for d in candidates:
            witnessed = Or(Forall(z, q), Not(subst_formula(q, single_subst(z, d))))
            if embed(witnessed) in I:
                found = True
                break
        if not found:
            return False
    return True
