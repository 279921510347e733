import random

from quantkit.formulas import Atom, Forall, alpha_eq, free_vars_formula
from quantkit.gen import Gen, random_model
from quantkit.polyadic import check_polyadic_axioms, forall_set
from quantkit.semantics import all_valuations, eval_formula
from quantkit.terms import Signature, Var, Variable

x, y, z = Variable("x"), Variable("y"), Variable("z")
SIG = Signature({"f": 1, "c": 0}, {"P": 1, "R": 2}, with_equality=True)


def test_empty_set_is_identity():
    p = Atom("P", (Var(x),))
    assert forall_set(set(), p) is p


def test_binds_in_canonical_order():
    p = Atom("R", (Var(x), Var(y)))
    assert forall_set({y, x}, p) == Forall(x, Forall(y, p))


def test_drops_variables_not_free():
    p = Atom("P", (Var(x),))
    assert forall_set({x, z}, p) == Forall(x, p)
    assert forall_set({z}, p) is p


def test_binding_order_is_semantically_irrelevant(two_model):
    gen = Gen(two_model.signature, seed=3)
    for _ in range(40):
        p = gen.formula(3, 1)
        U = {gen.variable(), gen.variable()}
        bound = sorted(U & free_vars_formula(p), key=Variable.sort_key)
        fwd = p
        for v in reversed(bound):
            fwd = Forall(v, fwd)
        rev = p
        for v in bound:
            rev = Forall(v, rev)
        for xi in all_valuations(two_model, free_vars_formula(p) | U):
            assert eval_formula(fwd, xi, two_model) == eval_formula(rev, xi, two_model)


def test_single_binder_roundtrip(two_model):
    gen = Gen(two_model.signature, seed=8)
    for _ in range(40):
        p = gen.formula(3, 1)
        v = gen.variable()
        single = forall_set({v}, p)
        plain = Forall(v, p)
        if v in free_vars_formula(p):
            assert alpha_eq(single, plain)
        for xi in all_valuations(two_model, free_vars_formula(p) | {v}):
            assert eval_formula(single, xi, two_model) == eval_formula(plain, xi, two_model)


def test_polyadic_suite_is_green():
    m = random_model(SIG, 2, 2, random.Random(12))
    for report in check_polyadic_axioms(m, samples=40, seed=12):
        assert report.checked > 0
        assert report.ok, (report.law, report.violations[:3])
