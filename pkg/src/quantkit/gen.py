"""Seeded random generation of terms, formulas, substitutions, and models.

Everything is driven by an explicit random.Random so that identical seeds
reproduce identical objects, which the determinism contract requires.
"""
from __future__ import annotations

import itertools
import random

from .boolalg import FiniteBooleanAlgebra
from .formulas import And, Atom, Bot, Eq, Forall, Formula, Not, Or, Top
from .semantics import FunctionalModel, Valuation
from .terms import App, Signature, Substitution, Term, Var, Variable

DEFAULT_VARS = [Variable(n) for n in ("x", "y", "z", "u", "w")]


class Gen:
    def __init__(self, sig: Signature, seed: int = 0,
                 vars: list[Variable] | None = None):
        self.sig = sig
        self.rng = random.Random(seed)
        self.vars = list(vars) if vars else list(DEFAULT_VARS)

    def variable(self) -> Variable:
        return self.rng.choice(self.vars)

    def term(self, depth: int = 2) -> Term:
        fns = sorted(self.sig.functions)
        if depth <= 0 or not fns or self.rng.random() < 0.4:
            constants = sorted(f for f in fns if self.sig.functions[f] == 0)
            if constants and self.rng.random() < 0.3:
                return App(self.rng.choice(constants), ())
            return Var(self.variable())
        f = self.rng.choice(fns)
        return App(f, tuple(self.term(depth - 1) for _ in range(self.sig.functions[f])))

    def atom(self) -> Formula:
        rels = sorted(self.sig.relations)
        if self.sig.with_equality and (not rels or self.rng.random() < 0.25):
            return Eq(self.term(1), self.term(1))
        if not rels:
            return Top() if self.rng.random() < 0.5 else Bot()
        r = self.rng.choice(rels)
        return Atom(r, tuple(self.term(1) for _ in range(self.sig.relations[r])))

    def formula(self, depth: int = 3, binders: int = 2) -> Formula:
        if depth <= 0:
            return self.atom()
        kinds = ["atom", "not", "and", "or"]
        if binders > 0:
            kinds += ["forall", "forall"]
        kind = self.rng.choice(kinds)
        if kind == "atom":
            return self.atom()
        if kind == "not":
            return Not(self.formula(depth - 1, binders))
        if kind == "and":
            return And(self.formula(depth - 1, binders), self.formula(depth - 1, binders))
        if kind == "or":
            return Or(self.formula(depth - 1, binders), self.formula(depth - 1, binders))
        return Forall(self.variable(), self.formula(depth - 1, binders - 1))

    def substitution(self, depth: int = 2) -> Substitution:
        mapping = {}
        for v in self.vars:
            if self.rng.random() < 0.5:
                mapping[v] = self.term(depth)
        return Substitution(mapping)

    def valuation(self, m: FunctionalModel) -> Valuation:
        mapping = {v: self.rng.choice(m.domain) for v in self.vars}
        return Valuation(mapping, m.domain[0])


def random_model(sig: Signature, domain_size: int, atom_count: int,
                 rng: random.Random) -> FunctionalModel:
    domain = tuple(f"m{i}" for i in range(domain_size))
    B = FiniteBooleanAlgebra(atom_count)
    fun_tables = {}
    for f, arity in sig.functions.items():
        fun_tables[f] = {
            args: rng.choice(domain)
            for args in itertools.product(domain, repeat=arity)
        }
    rel_tables = {}
    for r, arity in sig.relations.items():
        rel_tables[r] = {
            args: rng.randrange(1 << atom_count)
            for args in itertools.product(domain, repeat=arity)
        }
    return FunctionalModel(sig, domain, B, fun_tables, rel_tables)


def all_two_valued_models(sig: Signature, domain_size: int):
    """Every 2-valued model of the signature on a domain of the given size.

    Tables are enumerated in lexicographic order; this is the exhaustive base
    used by the law suites and by the brute-force model search.
    """
    domain = tuple(f"m{i}" for i in range(domain_size))
    B = FiniteBooleanAlgebra(1)
    fun_names = list(sig.functions)
    rel_names = list(sig.relations)
    fun_inputs = {
        f: list(itertools.product(domain, repeat=sig.functions[f])) for f in fun_names}
    rel_inputs = {
        r: list(itertools.product(domain, repeat=sig.relations[r])) for r in rel_names}
    fun_choices = [
        itertools.product(domain, repeat=len(fun_inputs[f])) for f in fun_names]
    rel_choices = [
        itertools.product((0, 1), repeat=len(rel_inputs[r])) for r in rel_names]
    for table_row in itertools.product(*fun_choices, *rel_choices):
        fun_tables = {
            f: dict(zip(fun_inputs[f], table_row[i]))
            for i, f in enumerate(fun_names)
        }
        rel_tables = {
            r: dict(zip(rel_inputs[r], table_row[len(fun_names) + j]))
            for j, r in enumerate(rel_names)
        }
        yield FunctionalModel(sig, domain, B, fun_tables, rel_tables)
