"""Products of two-valued models over a finite index set and their quotients.

The product's value algebra has one atom per factor, so a formula's value is
the set of coordinates at which it holds. Finite index sets only admit
principal ultrafilters, so quotienting along an ultrafilter projects onto one
factor; the coordinatewise-truth characterization is still checked as stated.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .boolalg import FiniteBooleanAlgebra, Ultrafilter
from .formulas import Formula
from .semantics import Elem, FunctionalModel, Valuation, eval_formula


@dataclass
class ProductModel:
    """Factor list plus the functional view with tuple elements."""

    factors: list[FunctionalModel]
    model: FunctionalModel

    @property
    def algebra(self) -> FiniteBooleanAlgebra:
        return self.model.algebra


def product_model(factors: list[FunctionalModel], max_domain: int = 256) -> ProductModel:
    """Coordinatewise product: functions act per coordinate, a relation's
    value is the atom set of coordinates where it holds."""
    if not factors:
        raise ValueError("product needs at least one factor")
    sig = factors[0].signature
    for f in factors[1:]:
        if (f.signature.functions != sig.functions
                or f.signature.relations != sig.relations
                or f.signature.with_equality != sig.with_equality):
            raise ValueError("factors must share one signature")
    for f in factors:
        if not f.is_two_valued:
            raise ValueError("factors must be two-valued models")

    domain = tuple(itertools.product(*(f.domain for f in factors)))
    if len(domain) > max_domain:
        raise ValueError(
            f"product domain has {len(domain)} elements, over the cap {max_domain}")
    B = FiniteBooleanAlgebra(len(factors))

    fun_tables: dict[str, dict[tuple, Elem]] = {}
    for fn, arity in sig.functions.items():
        table: dict[tuple, Elem] = {}
        for args in itertools.product(domain, repeat=arity):
            table[args] = tuple(
                f.fun_tables[fn][tuple(arg[i] for arg in args)]
                for i, f in enumerate(factors))
        fun_tables[fn] = table

    rel_tables: dict[str, dict[tuple, int]] = {}
    for rel, arity in sig.relations.items():
        table_r: dict[tuple, int] = {}
        for args in itertools.product(domain, repeat=arity):
            mask = 0
            for i, f in enumerate(factors):
                if f.rel_tables[rel][tuple(arg[i] for arg in args)] != 0:
                    mask |= 1 << i
            table_r[args] = mask
        rel_tables[rel] = table_r

    return ProductModel(
        list(factors),
        FunctionalModel(sig, domain, B, fun_tables, rel_tables))


@dataclass
class QuotientModel:
    """Two-valued quotient of a product along an ultrafilter."""

    model: FunctionalModel
    at_index: int
    element_name: dict[tuple, str]  # product tuple -> quotient element

    def project_valuation(self, sigma: Valuation) -> Valuation:
        mapping = {v: self.element_name[e] for v, e in sigma.mapping.items()}
        default = self.element_name[sigma.default] if sigma.default is not None else None
        return Valuation(mapping, default)


def quotient_to_2model(pm: ProductModel, I: Ultrafilter) -> QuotientModel:
    """Quotient along a (principal) ultrafilter of the index algebra.

    Formula values project through membership in I. With equality, tuples
    agreeing at the principal coordinate collapse to one element, which makes
    the result a normal two-valued model.
    """
    if I.algebra != pm.algebra:
        raise ValueError("ultrafilter must live on the product's index algebra")
    i0 = I.principal_atom_index()
    sig = pm.model.signature
    domain = pm.model.domain

    if sig.with_equality:
        rep_for_coord: dict = {}
        for t in domain:
            rep_for_coord.setdefault(t[i0], t)
        reps = list(rep_for_coord.values())
        classify = lambda t: rep_for_coord[t[i0]]
    else:
        reps = list(domain)
        classify = lambda t: t

    names = {rep: f"q{k}" for k, rep in enumerate(reps)}
    element_name = {t: names[classify(t)] for t in domain}
    new_domain = tuple(names[rep] for rep in reps)

    fun_tables: dict[str, dict[tuple, str]] = {}
    for fn, arity in sig.functions.items():
        table: dict[tuple, str] = {}
        for args in itertools.product(reps, repeat=arity):
            out = pm.model.fun_tables[fn][args]
            table[tuple(names[a] for a in args)] = element_name[out]
        fun_tables[fn] = table

    rel_tables: dict[str, dict[tuple, int]] = {}
    for rel, arity in sig.relations.items():
        table_r: dict[tuple, int] = {}
        for args in itertools.product(reps, repeat=arity):
            value = pm.model.rel_tables[rel][args]
            table_r[tuple(names[a] for a in args)] = 1 if value in I else 0
        rel_tables[rel] = table_r

    model = FunctionalModel(
        sig, new_domain, FiniteBooleanAlgebra(1), fun_tables, rel_tables)
    return QuotientModel(model, i0, element_name)


def los_check(pm: ProductModel, I: Ultrafilter, p: Formula, sigma: Valuation) -> bool:
    """Truth in the quotient must coincide with ultrafilter-large
    coordinatewise truth; both sides are computed independently."""
    quotient = quotient_to_2model(pm, I)
    left = eval_formula(p, quotient.project_valuation(sigma), quotient.model) != 0

    mask = 0
    for i, factor in enumerate(pm.factors):
        mapping = {v: e[i] for v, e in sigma.mapping.items()}
        default = sigma.default[i] if sigma.default is not None else None
        if eval_formula(p, Valuation(mapping, default), factor) != 0:
            mask |= 1 << i
    right = mask in I
    return left == right
