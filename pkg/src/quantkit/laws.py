"""Law suites: quantifier and equality axioms checked against finite models.

Each suite evaluates its laws on a deterministic battery plus seeded random
instances and reports violations; the laws are theorems of the semantics, so
every report must come back empty.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .formulas import (
    And,
    Atom,
    Eq,
    Forall,
    Formula,
    Not,
    Or,
    Top,
    free_vars_formula,
    subst_formula,
)
from .gen import Gen
from .semantics import (
    FunctionalModel,
    Valuation,
    all_valuations,
    compose_valuation,
    eval_formula,
)
from .terms import (
    Var,
    Variable,
    free_vars_term,
    fresh_reserved,
    single_subst,
    update_subst,
)


@dataclass
class LawReport:
    law: str
    checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def count(self, bad: bool, describe) -> None:
        self.checked += 1
        if bad:
            self.violations.append(describe())


def _battery(sig) -> list[Formula]:
    """Deterministic formulas over the signature's first relation symbols."""
    x, y = Variable("x"), Variable("y")
    rels = sorted(sig.relations.items())
    out: list[Formula] = [Top(), Not(Top())]
    for name, arity in rels[:2]:
        args_x = tuple(Var(x) for _ in range(arity))
        args_xy = tuple(Var(x) if i % 2 == 0 else Var(y) for i in range(arity))
        out.append(Atom(name, args_x))
        out.append(Atom(name, args_xy))
        out.append(Or(Atom(name, args_x), Not(Atom(name, args_xy))))
        out.append(Forall(y, Atom(name, args_xy)))
    if sig.with_equality:
        out.append(Eq(Var(x), Var(y)))
        out.append(And(Eq(Var(x), Var(y)), out[2] if len(out) > 2 else Top()))
    return out


def _instances(m: FunctionalModel, samples: int, gen: Gen):
    battery = _battery(m.signature)
    pairs = list(zip(battery, battery[1:] + battery[:1]))
    for p, q in pairs:
        yield p, q, Variable("x"), Variable("y"), False
    for _ in range(samples):
        yield (gen.formula(3, 2), gen.formula(2, 1),
               gen.variable(), gen.variable(), True)


def _valuation_points(m: FunctionalModel, vars: set[Variable], sampled: bool,
                      gen: Gen, per_instance: int = 4):
    if sampled:
        return [gen.valuation(m) for _ in range(per_instance)]
    return list(all_valuations(m, vars))


def check_clone_laws(m: FunctionalModel, samples: int = 50,
                     seed: int = 0) -> list[LawReport]:
    """Substitution laws: identity, composition, variable action, the binder
    renaming law, and agreement with evaluation at composed valuations."""
    from .formulas import alpha_eq
    from .semantics import semantic_subst_identity
    from .terms import Substitution, compose_subst, subst_term

    gen = Gen(m.signature, seed)
    reports = {name: LawReport(name) for name in (
        "subst-identity",
        "subst-composition",
        "subst-variable-action",
        "subst-binder-rename",
        "subst-evaluation",
    )}
    for i in range(max(samples, 1)):
        p = gen.formula(3, 2)
        s = gen.substitution(2)
        u = gen.substitution(2)
        x = gen.variable()
        xi = gen.valuation(m)

        reports["subst-identity"].count(
            not alpha_eq(subst_formula(p, Substitution()), p), lambda: f"p={p}")

        reports["subst-composition"].count(
            not alpha_eq(subst_formula(subst_formula(p, s), u),
                         subst_formula(p, compose_subst(s, u))),
            lambda: f"p={p}, s={s}, u={u}")

        t = gen.term(2)
        reports["subst-variable-action"].count(
            subst_term(Var(x), update_subst(s, x, t)) != t,
            lambda: f"x={x}, t={t}")

        # renaming the binder to any fresh variable gives the same alpha class
        fv = free_vars_formula(p) | {x}
        for z in s.domain():
            fv |= free_vars_term(s.apply(z))
        y1 = fresh_reserved(fv)
        y2 = fresh_reserved(fv | {y1})
        reports["subst-binder-rename"].count(
            not alpha_eq(
                subst_formula(Forall(x, p), s),
                Forall(y2, subst_formula(p, update_subst(s, x, Var(y2))))),
            lambda: f"p={p}, x={x}, s={s}")

        reports["subst-evaluation"].count(
            not semantic_subst_identity(p, s, xi, m), lambda: f"p={p}, s={s}")
    return list(reports.values())


def check_quantifier_axioms(m: FunctionalModel, samples: int = 50,
                            seed: int = 0) -> list[LawReport]:
    """Evaluate the quantifier laws on battery plus random instances.

    Battery instances are checked at every valuation of their variables;
    random instances at sampled valuations.
    """
    gen = Gen(m.signature, seed)
    B = m.algebra
    reports = {name: LawReport(name) for name in (
        "forall-meet-distribution",
        "forall-lower-bound",
        "forall-vacuous",
        "forall-subst-binder",
        "forall-monotone",
        "forall-instance-bound",
        "forall-largest-lower-bound",
        "forall-binder-independence",
        "forall-commute",
        "forall-witness-bound",
        "forall-subst-meet",
    )}

    for p, q, x, y, sampled in _instances(m, samples, gen):
        fv = free_vars_formula(p) | free_vars_formula(q) | {x, y}
        sigma = gen.substitution(2) if sampled else single_subst(y, Var(x))
        for z in sigma.domain():
            fv |= free_vars_term(sigma.apply(z))
        t = gen.term(2)
        fv |= free_vars_term(t)
        points = _valuation_points(m, fv, sampled, gen)

        fresh = fresh_reserved(fv)
        lhs_sb = subst_formula(Forall(x, p), sigma)
        rhs_sb = Forall(fresh, subst_formula(p, update_subst(sigma, x, Var(fresh))))

        # witness-bound setup: r & forall w. q[w/x] is below q[y'/x] for fresh
        # y' and independent of y', so it must lie below forall x. q
        w = fresh_reserved(fv | {fresh})
        below = And(q, Forall(w, subst_formula(q, single_subst(x, Var(w)))))

        for xi in points:
            vp = eval_formula(Forall(x, p), xi, m)
            vq = eval_formula(Forall(x, q), xi, m)

            got = eval_formula(Forall(x, And(p, q)), xi, m)
            reports["forall-meet-distribution"].count(
                got != B.meet(vp, vq), lambda: f"p={p}, q={q}, x={x}")

            reports["forall-lower-bound"].count(
                not B.le(vp, eval_formula(p, xi, m)), lambda: f"p={p}, x={x}")

            closed = Forall(x, p)  # independent of x by construction
            reports["forall-vacuous"].count(
                eval_formula(Forall(x, closed), xi, m) != eval_formula(closed, xi, m),
                lambda: f"p={p}, x={x}")
            if x not in free_vars_formula(p):
                reports["forall-vacuous"].count(
                    vp != eval_formula(p, xi, m), lambda: f"p={p}, x={x}")

            reports["forall-subst-binder"].count(
                eval_formula(lhs_sb, xi, m) != eval_formula(rhs_sb, xi, m),
                lambda: f"p={p}, x={x}, sigma={sigma}")

            reports["forall-monotone"].count(
                not B.le(eval_formula(Forall(x, And(p, q)), xi, m), vq),
                lambda: f"p={p}, q={q}, x={x}")

            inst = subst_formula(p, single_subst(x, t))
            reports["forall-instance-bound"].count(
                not B.le(vp, eval_formula(inst, xi, m)),
                lambda: f"p={p}, x={x}, t={t}")

            column = [eval_formula(p, xi.with_value(x, a), m) for a in m.domain]
            bad = any(not B.le(vp, va) for va in column) or any(
                all(B.le(b, va) for va in column) and not B.le(b, vp)
                for b in B.elements())
            reports["forall-largest-lower-bound"].count(
                bad, lambda: f"p={p}, x={x}")

            per_elem = {eval_formula(Forall(x, p), xi.with_value(x, a), m)
                        for a in m.domain}
            reports["forall-binder-independence"].count(
                len(per_elem) != 1, lambda: f"p={p}, x={x}")

            reports["forall-commute"].count(
                eval_formula(Forall(x, Forall(y, p)), xi, m)
                != eval_formula(Forall(y, Forall(x, p)), xi, m),
                lambda: f"p={p}, x={x}, y={y}")

            reports["forall-witness-bound"].count(
                not B.le(eval_formula(below, xi, m), vq),
                lambda: f"q={q}, x={x}")

            composed = compose_valuation(sigma, xi, m, free_vars_formula(p))
            meet = B.meet_all(
                eval_formula(p, composed.with_value(x, a), m) for a in m.domain)
            reports["forall-subst-meet"].count(
                eval_formula(subst_formula(Forall(x, p), sigma), xi, m) != meet,
                lambda: f"p={p}, x={x}, sigma={sigma}")

    return list(reports.values())


def check_equality_axioms(m: FunctionalModel, samples: int = 50,
                          seed: int = 0) -> list[LawReport]:
    """Equality laws: substitution compatibility, reflexivity, replacement,
    the least-reflexive characterization, and diagonal normality."""
    if not m.signature.with_equality:
        raise ValueError("equality suite needs a signature with equality")
    gen = Gen(m.signature, seed)
    B = m.algebra
    x, y = Variable("x"), Variable("y")
    ex_y = Eq(Var(x), Var(y))
    reports = {name: LawReport(name) for name in (
        "equality-subst-commute",
        "equality-reflexive",
        "equality-replacement-bound",
        "equality-replacement-equal",
        "equality-least-reflexive",
        "equality-diagonal",
    )}

    for p, q, _, _, sampled in _instances(m, samples, gen):
        fv = free_vars_formula(p) | free_vars_formula(q) | {x, y}
        sigma = gen.substitution(1)
        t1, t2 = gen.term(1), gen.term(1)
        for z in sigma.domain():
            fv |= free_vars_term(sigma.apply(z))
        fv |= free_vars_term(t1) | free_vars_term(t2)
        points = _valuation_points(m, fv, sampled, gen)

        swap = subst_formula(p, single_subst(y, Var(x)))  # p[x/y]
        to_y = Or(ex_y, q)  # becomes 1 under [y/x], so e(x,y) must sit below it
        to_y_sub = subst_formula(to_y, single_subst(x, Var(y)))

        for xi in points:
            reports["equality-subst-commute"].count(
                eval_formula(subst_formula(Eq(t1, t2), sigma), xi, m)
                != eval_formula(Eq(t1, t2),
                                compose_valuation(sigma, xi, m,
                                                  free_vars_term(t1) | free_vars_term(t2)),
                                m),
                lambda: f"t1={t1}, t2={t2}, sigma={sigma}")

            reports["equality-reflexive"].count(
                eval_formula(Eq(t1, t1), xi, m) != B.top, lambda: f"t={t1}")

            e_val = eval_formula(ex_y, xi, m)
            reports["equality-replacement-bound"].count(
                not B.le(B.meet(eval_formula(p, xi, m), e_val),
                         eval_formula(swap, xi, m)),
                lambda: f"p={p}")

            reports["equality-replacement-equal"].count(
                B.meet(eval_formula(p, xi, m), e_val)
                != B.meet(eval_formula(swap, xi, m), e_val),
                lambda: f"p={p}")

            premise_ok = eval_formula(to_y_sub, xi, m) == B.top
            reports["equality-least-reflexive"].count(
                premise_ok and not B.le(e_val, eval_formula(to_y, xi, m)),
                lambda: f"p={to_y}")

        for a in m.domain:
            for b in m.domain:
                xi = Valuation({x: a, y: b}, m.domain[0])
                want = B.top if a == b else B.bot
                reports["equality-diagonal"].count(
                    eval_formula(ex_y, xi, m) != want, lambda: f"a={a}, b={b}")

    return list(reports.values())
