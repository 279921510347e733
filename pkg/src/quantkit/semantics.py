"""Finite Boolean-valued functional models and evaluation.

A model pairs a finite domain M with a finite powerset algebra B. Terms denote
domain elements, formulas denote algebra elements, the universal quantifier is
a meet over the whole domain, and equality is the diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable

from .boolalg import FiniteBooleanAlgebra
from .formulas import (
    And,
    Atom,
    Bot,
    Eq,
    Forall,
    Formula,
    Not,
    Or,
    Top,
    free_vars_formula,
    subst_formula,
)
from .terms import App, Signature, Substitution, Term, Var, Variable

Elem = Hashable  # domain elements: strings for file models, tuples for products


@dataclass
class FunctionalModel:
    """Finite model: domain, value algebra, and total symbol tables.

    fun_tables[f] maps every argument tuple to a domain element;
    rel_tables[R] maps every argument tuple to an algebra element.
    """

    signature: Signature
    domain: tuple[Elem, ...]
    algebra: FiniteBooleanAlgebra
    fun_tables: dict[str, dict[tuple, Elem]] = field(default_factory=dict)
    rel_tables: dict[str, dict[tuple, int]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.domain:
            raise ValueError("model domain must be nonempty")
        if len(set(self.domain)) != len(self.domain):
            raise ValueError("duplicate domain elements")
        self.validate()

    def validate(self) -> None:
        import itertools

        dom = set(self.domain)
        for f, arity in self.signature.functions.items():
            table = self.fun_tables.get(f)
            if table is None:
                raise ValueError(f"missing table for function {f!r}")
            for args in itertools.product(self.domain, repeat=arity):
                if args not in table:
                    raise ValueError(f"table for {f!r} not total: missing {args}")
                if table[args] not in dom:
                    raise ValueError(f"table for {f!r} maps {args} outside the domain")
        for r, arity in self.signature.relations.items():
            table = self.rel_tables.get(r)
            if table is None:
                raise ValueError(f"missing table for relation {r!r}")
            for args in itertools.product(self.domain, repeat=arity):
                if args not in table:
                    raise ValueError(f"table for {r!r} not total: missing {args}")
                if not self.algebra.is_element(table[args]):
                    raise ValueError(f"table for {r!r} maps {args} outside the algebra")

    @property
    def is_two_valued(self) -> bool:
        return self.algebra.atom_count == 1


@dataclass
class Valuation:
    """Total map from variables to domain elements, finitely represented."""

    mapping: dict[Variable, Elem] = field(default_factory=dict)
    default: Elem = None

    def get(self, v: Variable) -> Elem:
        return self.mapping.get(v, self.default)

    def with_value(self, v: Variable, a: Elem) -> "Valuation":
        return Valuation({**self.mapping, v: a}, self.default)


def eval_term(t: Term, xi: Valuation, m: FunctionalModel) -> Elem:
    if isinstance(t, Var):
        return xi.get(t.var)
    if isinstance(t, App):
        if t.fn not in m.fun_tables:
            raise ValueError(f"undeclared function symbol {t.fn!r}")
        args = tuple(eval_term(a, xi, m) for a in t.args)
        return m.fun_tables[t.fn][args]
    raise TypeError(f"not a term: {t!r}")


def eval_formula(p: Formula, xi: Valuation, m: FunctionalModel) -> int:
    """Evaluate p to an element of the model's algebra."""
    B = m.algebra
    if isinstance(p, Atom):
        if p.rel not in m.rel_tables:
            raise ValueError(f"undeclared relation symbol {p.rel!r}")
        args = tuple(eval_term(t, xi, m) for t in p.args)
        return m.rel_tables[p.rel][args]
    if isinstance(p, Eq):
        if not m.signature.with_equality:
            raise ValueError("equality atom in a signature without equality")
        return B.top if eval_term(p.lhs, xi, m) == eval_term(p.rhs, xi, m) else B.bot
    if isinstance(p, Top):
        return B.top
    if isinstance(p, Bot):
        return B.bot
    if isinstance(p, Not):
        return B.complement(eval_formula(p.body, xi, m))
    if isinstance(p, And):
        return B.meet(eval_formula(p.lhs, xi, m), eval_formula(p.rhs, xi, m))
    if isinstance(p, Or):
        return B.join(eval_formula(p.lhs, xi, m), eval_formula(p.rhs, xi, m))
    if isinstance(p, Forall):
        return B.meet_all(
            eval_formula(p.body, xi.with_value(p.var, a), m) for a in m.domain)
    raise TypeError(f"not a formula: {p!r}")


def compose_valuation(s: Substitution, xi: Valuation, m: FunctionalModel,
                      vars_needed: set[Variable]) -> Valuation:
    """The valuation sending x to the value of s(x) under xi."""
    mapping = {}
    for v in sorted(vars_needed | set(s.domain()), key=Variable.sort_key):
        mapping[v] = eval_term(s.apply(v), xi, m)
    return Valuation(mapping, xi.default)


def semantic_subst_identity(p: Formula, s: Substitution, xi: Valuation,
                            m: FunctionalModel) -> bool:
    """Substitution then evaluation equals evaluation at the composed valuation.

    This is the bridge between syntactic substitution and the functional
    semantics; it must hold for every input.
    """
    lhs = eval_formula(subst_formula(p, s), xi, m)
    rhs = eval_formula(p, compose_valuation(s, xi, m, free_vars_formula(p)), m)
    return lhs == rhs


def all_valuations(m: FunctionalModel, vars: set[Variable]):
    """Every assignment of the given variables, default fixed at domain[0]."""
    import itertools

    ordered = sorted(vars, key=Variable.sort_key)
    for values in itertools.product(m.domain, repeat=len(ordered)):
        yield Valuation(dict(zip(ordered, values)), m.domain[0])


def check_support_retraction(p: Formula, U: set[Variable], m: FunctionalModel) -> bool:
    """Semantic support test via an idempotent retraction onto U.

    Variables outside U are collapsed to the least element of U; p has U as a
    support in m exactly when this collapse never changes its value.
    """
    if not U:
        raise ValueError("support retraction needs a nonempty variable set")
    least = min(U, key=Variable.sort_key)
    gamma = Substitution({v: Var(least) for v in free_vars_formula(p) if v not in U})
    collapsed = subst_formula(p, gamma)
    relevant = free_vars_formula(p) | free_vars_formula(collapsed) | {least}
    for xi in all_valuations(m, relevant):
        if eval_formula(p, xi, m) != eval_formula(collapsed, xi, m):
            return False
    return True
