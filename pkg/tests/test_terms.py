from quantkit.gen import Gen
from quantkit.terms import (
    App,
    Signature,
    Substitution,
    Var,
    Variable,
    compose_subst,
    free_vars_term,
    subst_term,
    update_subst,
)

x, y, z = Variable("x"), Variable("y"), Variable("z")


def test_subst_variable():
    s = Substitution({x: App("f", (Var(y),))})
    assert subst_term(Var(x), s) == App("f", (Var(y),))


def test_subst_identity():
    t = App("f", (Var(x), App("g", (Var(y),))))
    assert subst_term(t, Substitution()) == t


def test_subst_is_simultaneous():
    s = Substitution({x: Var(y), y: Var(x)})
    assert subst_term(App("f", (Var(x), Var(y))), s) == App("f", (Var(y), Var(x)))


def test_compose_pointwise():
    s = Substitution({x: Var(y)})
    u = Substitution({y: Var(z)})
    assert compose_subst(s, u) == Substitution({x: Var(z), y: Var(z)})


def test_compose_left_identity():
    u = Substitution({y: App("c", ())})
    assert compose_subst(Substitution(), u) == u


def test_compose_matches_sequential_application():
    # expected value computed by expanding (t s) u directly on t = g(x, y)
    s = Substitution({x: App("f", (Var(y),))})
    u = Substitution({y: Var(x)})
    t = App("g", (Var(x), Var(y)))
    sequential = subst_term(subst_term(t, s), u)
    assert sequential == App("g", (App("f", (Var(x),)), Var(x)))
    assert compose_subst(s, u) == Substitution({x: App("f", (Var(x),)), y: Var(x)})
    assert subst_term(t, compose_subst(s, u)) == sequential


def test_free_vars():
    assert free_vars_term(Var(x)) == {x}
    assert free_vars_term(App("f", (Var(x), App("g", (Var(x), Var(y)))))) == {x, y}
    assert free_vars_term(App("c", ())) == set()


def test_update():
    assert update_subst(Substitution(), x, Var(y)) == Substitution({x: Var(y)})
    assert update_subst(Substitution({x: Var(z)}), x, Var(y)) == Substitution({x: Var(y)})
    # binding a variable to itself normalizes away
    assert update_subst(Substitution({y: Var(z)}), x, Var(x)) == Substitution({y: Var(z)})


def test_clone_laws_on_random_terms():
    sig = Signature({"f": 1, "g": 2, "c": 0}, {}, False)
    gen = Gen(sig, seed=1)
    for _ in range(300):
        t = gen.term(4)
        s = gen.substitution(2)
        u = gen.substitution(2)
        assert subst_term(t, Substitution()) == t
        assert subst_term(subst_term(t, s), u) == subst_term(t, compose_subst(s, u))


def test_support_of_terms():
    # substitutions agreeing on the free variables act identically
    sig = Signature({"f": 1, "g": 2, "c": 0}, {}, False)
    gen = Gen(sig, seed=2)
    for _ in range(200):
        t = gen.term(3)
        s = gen.substitution(2)
        u = Substitution({v: s.apply(v) for v in free_vars_term(t)})
        assert subst_term(t, s) == subst_term(t, u)


def test_variable_order_is_strict_and_deterministic():
    names = [Variable(n) for n in ("x", "a", "_h2", "_h10", "zz")]
    ordered = sorted(names, key=Variable.sort_key)
    assert [v.name for v in ordered] == ["a", "x", "zz", "_h2", "_h10"]
