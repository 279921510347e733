"""Set-indexed universal quantification and its exchange with single binders.

forall_set binds a whole variable set at once; because iterated binders
commute, binding in the canonical variable order loses nothing and keeps the
output deterministic.
"""
from __future__ import annotations

import itertools

from .formulas import And, Forall, Formula, free_vars_formula, subst_formula
from .gen import Gen
from .laws import LawReport
from .semantics import FunctionalModel, eval_formula
from .terms import Var, Variable, free_vars_term, reserved_var, update_subst


def forall_set(U: set[Variable], p: Formula) -> Formula:
    """Bind every variable of U that is free in p, outermost-first in
    canonical variable order; the empty set binds nothing."""
    out = p
    for x in sorted(U & free_vars_formula(p), key=Variable.sort_key, reverse=True):
        out = Forall(x, out)
    return out


def check_polyadic_axioms(m: FunctionalModel, samples: int = 50,
                          seed: int = 0) -> list[LawReport]:
    """Evaluate the set-quantifier laws on seeded random instances."""
    gen = Gen(m.signature, seed)
    B = m.algebra
    reports = {name: LawReport(name) for name in (
        "set-forall-empty",
        "set-forall-union",
        "set-forall-subst-rename",
        "set-forall-meet-distribution",
        "set-forall-lower-bound",
        "set-forall-independent",
        "set-forall-single-binder",
        "set-forall-order-independence",
        "set-forall-revaluation-meet",
    )}

    for i in range(samples):
        p = gen.formula(3, 1)
        q = gen.formula(2, 1)
        U = {gen.variable() for _ in range(gen.rng.randint(0, 3))}
        V = {gen.variable() for _ in range(gen.rng.randint(0, 2))}
        fv = free_vars_formula(p) | free_vars_formula(q) | U | V
        points = [gen.valuation(m) for _ in range(3)]

        reports["set-forall-empty"].count(
            forall_set(set(), p) != p, lambda: f"p={p}")

        order = sorted(U & free_vars_formula(p), key=Variable.sort_key)
        iterated = p
        for x in reversed(order):
            iterated = Forall(x, iterated)
        reverse_bound = p
        for x in order:
            reverse_bound = Forall(x, reverse_bound)

        # injective rename of U onto fresh reserved targets, substitution kept
        # away from the targets so the side condition holds
        renamed = sorted(U, key=Variable.sort_key)
        pi = {x: reserved_var(100 + j) for j, x in enumerate(renamed)}
        sigma = gen.substitution(1)
        sigma_pi = sigma
        for x, v in pi.items():
            sigma_pi = update_subst(sigma_pi, x, Var(v))
        lhs_rename = subst_formula(forall_set(U, p), sigma)
        rhs_rename = forall_set(set(pi.values()), subst_formula(p, sigma_pi))
        for z in sigma.domain():
            fv |= free_vars_term(sigma.apply(z))

        for xi in points:
            vU = eval_formula(forall_set(U, p), xi, m)

            reports["set-forall-union"].count(
                eval_formula(forall_set(U | V, p), xi, m)
                != eval_formula(forall_set(U, forall_set(V, p)), xi, m),
                lambda: f"p={p}, U={sorted(map(str, U))}, V={sorted(map(str, V))}")

            reports["set-forall-subst-rename"].count(
                eval_formula(lhs_rename, xi, m) != eval_formula(rhs_rename, xi, m),
                lambda: f"p={p}, U={sorted(map(str, U))}, sigma={sigma}")

            reports["set-forall-meet-distribution"].count(
                eval_formula(forall_set(U, And(p, q)), xi, m)
                != B.meet(vU, eval_formula(forall_set(U, q), xi, m)),
                lambda: f"p={p}, q={q}, U={sorted(map(str, U))}")

            reports["set-forall-lower-bound"].count(
                not B.le(vU, eval_formula(p, xi, m)),
                lambda: f"p={p}, U={sorted(map(str, U))}")

            outside = {v for v in U if v not in free_vars_formula(p)}
            reports["set-forall-independent"].count(
                eval_formula(forall_set(outside, p), xi, m)
                != eval_formula(p, xi, m),
                lambda: f"p={p}, U={sorted(map(str, outside))}")

            x = gen.variable()
            reports["set-forall-single-binder"].count(
                eval_formula(forall_set({x}, p), xi, m)
                != eval_formula(Forall(x, p), xi, m),
                lambda: f"p={p}, x={x}")

            reports["set-forall-order-independence"].count(
                eval_formula(iterated, xi, m) != eval_formula(reverse_bound, xi, m),
                lambda: f"p={p}, U={sorted(map(str, U))}")

            bound = sorted(U & free_vars_formula(p), key=Variable.sort_key)
            meet = B.top
            for values in itertools.product(m.domain, repeat=len(bound)):
                re_xi = xi
                for v, a in zip(bound, values):
                    re_xi = re_xi.with_value(v, a)
                meet = B.meet(meet, eval_formula(p, re_xi, m))
            reports["set-forall-revaluation-meet"].count(
                vU != meet, lambda: f"p={p}, U={sorted(map(str, U))}")

    return list(reports.values())
