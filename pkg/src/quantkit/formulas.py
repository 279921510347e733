"""Formulas with Boolean connectives, a universal binder, and equality atoms.

Substitution on formulas is capture-avoiding: at every binder the bound
variable is renamed to a deterministically chosen fresh reserved variable, so
identical inputs always produce bit-identical outputs.
"""
from __future__ import annotations

from dataclasses import dataclass

from .terms import (
    Substitution,
    Term,
    Var,
    Variable,
    free_vars_term,
    fresh_reserved,
    subst_term,
    update_subst,
)


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return formula_to_str(self)


@dataclass(frozen=True)
class Atom(Formula):
    rel: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Eq(Formula):
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Or(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: Variable
    body: Formula


def exists(x: Variable, p: Formula) -> Formula:
    """Derived existential: exists x. p is ~forall x. ~p."""
    return Not(Forall(x, Not(p)))


def free_vars_formula(p: Formula) -> set[Variable]:
    if isinstance(p, Atom):
        out: set[Variable] = set()
        for t in p.args:
            out |= free_vars_term(t)
        return out
    if isinstance(p, Eq):
        return free_vars_term(p.lhs) | free_vars_term(p.rhs)
    if isinstance(p, (Top, Bot)):
        return set()
    if isinstance(p, Not):
        return free_vars_formula(p.body)
    if isinstance(p, (And, Or)):
        return free_vars_formula(p.lhs) | free_vars_formula(p.rhs)
    if isinstance(p, Forall):
        return free_vars_formula(p.body) - {p.var}
    raise TypeError(f"not a formula: {p!r}")


def subst_formula(p: Formula, s: Substitution) -> Formula:
    """Capture-avoiding simultaneous substitution.

    Connectives commute with substitution. At Forall(x, body) the binder is
    renamed to y, the smallest reserved variable that is not free in body and
    not free in s(z) for any z free in the whole quantified formula; the body
    is then substituted with s updated by x -> y.
    """
    if isinstance(p, Atom):
        return Atom(p.rel, tuple(subst_term(t, s) for t in p.args))
    if isinstance(p, Eq):
        return Eq(subst_term(p.lhs, s), subst_term(p.rhs, s))
    if isinstance(p, (Top, Bot)):
        return p
    if isinstance(p, Not):
        return Not(subst_formula(p.body, s))
    if isinstance(p, And):
        return And(subst_formula(p.lhs, s), subst_formula(p.rhs, s))
    if isinstance(p, Or):
        return Or(subst_formula(p.lhs, s), subst_formula(p.rhs, s))
    if isinstance(p, Forall):
        avoid = set(free_vars_formula(p.body))
        for z in free_vars_formula(p):
            avoid |= free_vars_term(s.apply(z))
        y = fresh_reserved(avoid)
        return Forall(y, subst_formula(p.body, update_subst(s, p.var, Var(y))))
    raise TypeError(f"not a formula: {p!r}")


def alpha_normal(p: Formula) -> Formula:
    """Canonical renaming of bound variables.

    Binders are renamed left-to-right (pre-order) from the reserved namespace,
    skipping reserved names that occur free in p. Two formulas are
    alpha-equivalent iff their normal forms are structurally identical.
    """
    free = free_vars_formula(p)
    counter = [0]

    def next_var() -> Variable:
        while True:
            v = Variable(f"_h{counter[0]}")
            counter[0] += 1
            if v not in free:
                return v

    def walk_term(t: Term, env: dict[Variable, Variable]) -> Term:
        if isinstance(t, Var):
            return Var(env.get(t.var, t.var))
        return type(t)(t.fn, tuple(walk_term(a, env) for a in t.args))

    def walk(q: Formula, env: dict[Variable, Variable]) -> Formula:
        if isinstance(q, Atom):
            return Atom(q.rel, tuple(walk_term(t, env) for t in q.args))
        if isinstance(q, Eq):
            return Eq(walk_term(q.lhs, env), walk_term(q.rhs, env))
        if isinstance(q, (Top, Bot)):
            return q
        if isinstance(q, Not):
            return Not(walk(q.body, env))
        if isinstance(q, And):
            return And(walk(q.lhs, env), walk(q.rhs, env))
        if isinstance(q, Or):
            return Or(walk(q.lhs, env), walk(q.rhs, env))
        if isinstance(q, Forall):
            y = next_var()
            return Forall(y, walk(q.body, {**env, q.var: y}))
        raise TypeError(f"not a formula: {q!r}")

    return walk(p, {})


def alpha_eq(p: Formula, q: Formula) -> bool:
    return alpha_normal(p) == alpha_normal(q)


# precedence levels for printing: forall < or < and < not < atomic
_PREC_FORALL, _PREC_OR, _PREC_AND, _PREC_NOT, _PREC_ATOM = 0, 1, 2, 3, 4


def formula_to_str(p: Formula) -> str:
    text, _ = _render(p)
    return text


def _render(p: Formula) -> tuple[str, int]:
    if isinstance(p, Atom):
        if not p.args:
            return p.rel, _PREC_ATOM
        return f"{p.rel}({', '.join(str(t) for t in p.args)})", _PREC_ATOM
    if isinstance(p, Eq):
        return f"{p.lhs} = {p.rhs}", _PREC_ATOM
    if isinstance(p, Top):
        return "true", _PREC_ATOM
    if isinstance(p, Bot):
        return "false", _PREC_ATOM
    if isinstance(p, Not):
        inner, prec = _render(p.body)
        if prec < _PREC_NOT:
            inner = f"({inner})"
        return f"~{inner}", _PREC_NOT
    if isinstance(p, And):
        return _render_binary(p.lhs, p.rhs, "&", _PREC_AND)
    if isinstance(p, Or):
        return _render_binary(p.lhs, p.rhs, "|", _PREC_OR)
    if isinstance(p, Forall):
        body, _ = _render(p.body)
        return f"forall {p.var}. {body}", _PREC_FORALL
    raise TypeError(f"not a formula: {p!r}")


def _render_binary(lhs: Formula, rhs: Formula, op: str, prec: int) -> tuple[str, int]:
    left, lp = _render(lhs)
    right, rp = _render(rhs)
    # left-associative: the right operand needs parens at equal precedence
    if lp < prec:
        left = f"({left})"
    if rp <= prec:
        right = f"({right})"
    return f"{left} {op} {right}", prec
