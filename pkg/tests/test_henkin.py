import itertools

import pytest

from quantkit.formulas import Atom
from quantkit.henkin import (
    ExtractionError,
    HenkinState,
    build_term_model,
    finite_model_search,
    fragment_is_perfect,
    henkin_expand,
    herbrand_universe,
    run_pipeline,
    sat_solve,
)
from quantkit.parser import infer_signature, parse_formulas
from quantkit.semantics import eval_formula
from quantkit.terms import Signature, Var, Variable

x = Variable("x")


def term(text):
    from quantkit.parser import parse_term

    return parse_term(text)


def test_herbrand_examples():
    sig = Signature({"f": 1, "c": 0}, {}, False)
    assert herbrand_universe(sig, [], 1) == [term("c()"), term("f(c())")]

    sig2 = Signature({"f": 1}, {}, False)
    z0 = Variable("z0")
    assert herbrand_universe(sig2, [z0], 2) == [
        term("z0"), term("f(z0)"), term("f(f(z0))")]

    sig3 = Signature({"g": 2, "c": 0}, {}, False)
    assert herbrand_universe(sig3, [], 1) == [term("c()"), term("g(c(),c())")]


def test_herbrand_empty_universe_rejected():
    with pytest.raises(ValueError, match="no closed terms"):
        herbrand_universe(Signature({"f": 1}, {}, False), [], 2)


def test_expand_negated_forall_hand_unfolded():
    J = parse_formulas("~forall x. P(x)")
    state = henkin_expand(J, rounds=2, depth=2)
    assert [str(w) for w in state.witnesses] == ["_h0"]
    assert [str(t) for t in state.theta_set] == ["(forall x. P(x)) | ~P(_h0)"]
    assert [str(t) for t in state.term_universe] == ["_h0"]

    valuation = sat_solve(state)
    assert valuation is not None
    # the universal must come out false and its witness instance false
    a_var = state.prop_vars[("forall", next(
        key for kind, key in state.prop_vars if kind == "forall"))]
    atom_var = state.prop_vars[("atom", Atom("P", (Var(Variable("_h0")),)))]
    assert valuation[a_var] is False
    assert valuation[atom_var] is False


def test_expand_instantiation_conflict_is_unsat():
    J = parse_formulas("forall x. P(x); ~P(f(c()))")
    state = henkin_expand(J, rounds=2, depth=2)
    assert sat_solve(state) is None

    # propositional oracle: brute-force every assignment over the clause vars
    n = state.n_vars
    assert n <= 12
    satisfiable = False
    for bits in itertools.product((False, True), repeat=n):
        assignment = {i + 1: bits[i] for i in range(n)}
        if all(any((lit > 0) == assignment[abs(lit)] for lit in clause)
               for clause in state.clauses):
            satisfiable = True
            break
    assert not satisfiable


def test_expand_empty_input():
    state = henkin_expand([], rounds=1, depth=1,
                          sig=Signature({"c": 0}, {"P": 1}, False))
    assert state.theta_set == []
    assert sat_solve(state) is not None
    tm = build_term_model(state)
    assert len(tm.model.domain) == 1


def test_sat_solve_trivial_and_conflict():
    sig = Signature({}, {"P": 0}, False)
    state = HenkinState(sig, [], 1, 1)
    assert sat_solve(state) == {}

    state2 = HenkinState(sig, [], 1, 1, n_vars=1, clauses=[(1,), (-1,)])
    assert sat_solve(state2) is None


def test_build_term_model_requires_valuation():
    state = henkin_expand(parse_formulas("P(c())"), 1, 1)
    with pytest.raises(ExtractionError):
        build_term_model(state)


def test_build_term_model_negated_forall():
    J = parse_formulas("~forall x. P(x)")
    state = henkin_expand(J, 2, 2)
    sat_solve(state)
    tm = build_term_model(state)
    assert tm.model.domain == ("e0",)
    assert tm.model.rel_tables["P"][("e0",)] == 0
    assert eval_formula(J[0], tm.identity_valuation, tm.model) == 1


def test_build_term_model_equality_collapse():
    J = parse_formulas("c() = d()")
    state = henkin_expand(J, 1, 1)
    sat_solve(state)
    tm = build_term_model(state)
    assert len(tm.model.domain) == 1
    assert tm.element_of_term[term("c()")] == tm.element_of_term[term("d()")]


def test_build_term_model_incoherent_equality():
    # f(c) = f(d) is forced false propositionally, but c = d collapses both
    J = parse_formulas("c() = d(); ~(f(c()) = f(d()))")
    state = henkin_expand(J, 1, 1)
    assert sat_solve(state) is not None
    with pytest.raises(ExtractionError, match="incoherent"):
        build_term_model(state)
    assert run_pipeline(J).verdict == "unknown"


def test_pipeline_on_nested_quantifiers():
    result = run_pipeline(parse_formulas("exists x. forall y. R(x, y)"))
    assert result.verdict == "sat"
    m = result.term_model.model
    assert len(m.domain) == 2
    for p in result.state.inputs:
        assert eval_formula(p, result.term_model.identity_valuation, m) == 1


def test_pipeline_budget_exhaustion_is_unknown():
    # satisfiable, but the free-term universe never closes under f
    result = run_pipeline(parse_formulas("forall x. P(f(x))"))
    assert result.verdict == "unknown"
    assert "increase" in result.reason


def test_fragment_perfectness_after_sat():
    for text in ("~forall x. P(x)", "forall x. P(x)",
                 "exists x. forall y. R(x, y)"):
        result = run_pipeline(parse_formulas(text))
        assert result.verdict == "sat"
        assert fragment_is_perfect(result.state)


def test_finite_model_search_examples():
    sig = Signature({}, {"P": 1}, False)
    found = finite_model_search(parse_formulas("exists x. P(x)", sig), sig, 2)
    assert found is not None
    assert found.model.domain == ("m0",)
    assert found.model.rel_tables["P"][("m0",)] == 1

    sig_c = Signature({"c": 0}, {"P": 1}, False)
    assert finite_model_search(
        parse_formulas("P(c()); ~P(c())", sig_c), sig_c, 3) is None

    found2 = finite_model_search(parse_formulas("forall x. P(x)", sig), sig, 2)
    assert found2 is not None
    assert found2.model.rel_tables["P"] == {("m0",): 1}


def test_search_deterministic_first_hit():
    sig = Signature({}, {"P": 1}, False)
    a = finite_model_search(parse_formulas("P(x)", sig), sig, 2)
    b = finite_model_search(parse_formulas("P(x)", sig), sig, 2)
    assert a.model.rel_tables == b.model.rel_tables
    assert a.valuation.mapping == b.valuation.mapping


def test_refutation_soundness_on_random_problems():
    # whenever the pipeline says unsat, brute force must find nothing
    problems = [
        "forall x. P(x); ~P(c())",
        "P(x) & ~P(x)",
        "forall x. (P(x) -> Q(x)); P(c()); ~Q(c())",
        "exists x. P(x)",
        "forall x. R(x, x); ~R(c(), c())",
        "~forall x. P(x); forall y. P(y)",
    ]
    for text in problems:
        J = parse_formulas(text)
        sig = infer_signature(J)
        result = run_pipeline(J)
        if result.verdict == "unsat":
            assert finite_model_search(J, sig, 3) is None, text
        if result.verdict == "sat":
            assert finite_model_search(J, sig, 3) is not None, text


def test_determinism_of_expand():
    J = parse_formulas("forall x. exists y. R(x, y); P(c())")
    a = henkin_expand(J, 2, 2)
    b = henkin_expand(J, 2, 2)
    assert a.clauses == b.clauses
    assert a.term_universe == b.term_universe
    assert [c.theta for c in a.classes] == [c.theta for c in b.classes]
    assert sat_solve(a) == sat_solve(b)
