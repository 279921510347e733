import pytest

from quantkit.formulas import (
    And,
    Atom,
    Bot,
    Eq,
    Forall,
    Not,
    Or,
    Top,
    alpha_eq,
    alpha_normal,
)
from quantkit.parser import (
    ParseError,
    infer_signature,
    model_to_text,
    parse_formula,
    parse_formulas,
    parse_model_text,
    parse_signature_text,
    parse_subst,
    parse_valuation,
    signature_to_text,
)
from quantkit.terms import App, Substitution, Var, Variable

x, y = Variable("x"), Variable("y")


def test_parse_basic_formulas():
    assert parse_formula("true") == Top()
    assert parse_formula("false") == Bot()
    assert parse_formula("P(x) & Q(y)") == And(Atom("P", (Var(x),)), Atom("Q", (Var(y),)))
    assert parse_formula("~P(x)") == Not(Atom("P", (Var(x),)))
    assert parse_formula("forall x. P(x)") == Forall(x, Atom("P", (Var(x),)))
    assert parse_formula("exists x. P(x)") == Not(Forall(x, Not(Atom("P", (Var(x),)))))
    assert parse_formula("x = y") == Eq(Var(x), Var(y))
    assert parse_formula("f(x) = y") == Eq(App("f", (Var(x),)), Var(y))
    assert parse_formula("P") == Atom("P", ())


def test_precedence():
    # ~ binds over &, & over |, | over ->; quantifiers weakest
    got = parse_formula("~P(x) & Q(x) | S(x)")
    assert got == Or(And(Not(Atom("P", (Var(x),))), Atom("Q", (Var(x),))),
                     Atom("S", (Var(x),)))
    assert parse_formula("P(x) -> Q(x)") == Or(Not(Atom("P", (Var(x),))),
                                               Atom("Q", (Var(x),)))
    assert parse_formula("forall x. P(x) & Q(x)") == Forall(
        x, And(Atom("P", (Var(x),)), Atom("Q", (Var(x),))))


def test_polyadic_binder_sugar():
    assert parse_formula("forall {y,x}. R(x,y)") == Forall(
        x, Forall(y, Atom("R", (Var(x), Var(y)))))
    # variables not free in the body drop out
    assert parse_formula("forall {x,z}. P(x)") == Forall(x, Atom("P", (Var(x),)))


def test_parse_error_positions():
    with pytest.raises(ParseError) as err:
        parse_formula("P(x) &")
    assert err.value.line == 1
    assert err.value.col == 7

    with pytest.raises(ParseError) as err:
        parse_formula("forall x.\n  P(x) @")
    assert err.value.line == 2


def test_reserved_names_rejected_when_free():
    with pytest.raises(ParseError, match="reserved"):
        parse_formula("P(_h0)")
    with pytest.raises(ParseError, match="reserved"):
        parse_formula("_h1 = _h1")
    # bound occurrences are fine: printed normal forms re-parse
    p = parse_formula("forall _h0. P(_h0)")
    assert p == Forall(Variable("_h0"), Atom("P", (Var(Variable("_h0")),)))


def test_roundtrip_through_printer():
    texts = [
        "forall x. P(x) & Q(y)",
        "exists x. (P(x) | ~Q(x))",
        "forall x. forall y. (R(x,y) -> R(y,x))",
        "f(x) = g(y, c())",
        "~(P(x) & (Q(x) | S(x)))",
        "forall {x,y}. R(x,y)",
    ]
    for text in texts:
        p = parse_formula(text)
        assert alpha_eq(parse_formula(str(p)), p)
        assert alpha_eq(parse_formula(str(alpha_normal(p))), p)


def test_parse_with_signature_resolves_constants():
    sig = parse_signature_text("fun c/0\nfun f/1\nrel P/1\nequality on")
    p = parse_formula("P(c)", sig)
    assert p == Atom("P", (App("c", ()),))
    with pytest.raises(ParseError, match="arguments"):
        parse_formula("P(f)", sig)
    with pytest.raises(ParseError, match="undeclared"):
        parse_formula("Q(x)", sig)
    with pytest.raises(ParseError, match="expects"):
        parse_formula("P(x, y)", sig)


def test_equality_needs_flag():
    sig = parse_signature_text("rel P/1\nequality off")
    with pytest.raises(ParseError, match="equality"):
        parse_formula("x = y", sig)


def test_signature_file_roundtrip():
    sig = parse_signature_text("# arithmetic-ish\nfun f/2\nfun c/0\nrel Less/2\nequality on\n")
    assert sig.functions == {"f": 2, "c": 0}
    assert sig.relations == {"Less": 2}
    assert sig.with_equality
    again = parse_signature_text(signature_to_text(sig))
    assert again == sig


def test_signature_file_errors():
    with pytest.raises(ParseError):
        parse_signature_text("fun f")
    with pytest.raises(ParseError):
        parse_signature_text("fun _hx/1")
    with pytest.raises(ParseError):
        parse_signature_text("fun f/1\nrel f/2")


def test_infer_signature():
    fs = parse_formulas("P(f(x), c()); x = y")
    sig = infer_signature(fs)
    assert sig.functions == {"f": 1, "c": 0}
    assert sig.relations == {"P": 2}
    assert sig.with_equality

    with pytest.raises(ParseError, match="arities"):
        infer_signature(parse_formulas("P(x); P(x, y)"))
    with pytest.raises(ParseError, match="both"):
        infer_signature(parse_formulas("P(P(x))"))
    with pytest.raises(ParseError, match="variable and a symbol"):
        infer_signature(parse_formulas("P(c); Q(c())"))


def test_subst_map_parsing():
    s = parse_subst("x := f(y), y := c()")
    assert s == Substitution({x: App("f", (Var(y),)), y: App("c", ())})
    assert parse_subst("  ") == Substitution()
    with pytest.raises(ParseError, match="duplicate"):
        parse_subst("x := y, x := c()")
    with pytest.raises(ParseError, match="reserved"):
        parse_subst("_h0 := x")


def test_model_file_roundtrip(two_model):
    text = model_to_text(two_model)
    again = parse_model_text(text)
    assert again.domain == two_model.domain
    assert again.fun_tables == two_model.fun_tables
    assert again.rel_tables == two_model.rel_tables
    assert again.signature.with_equality
    assert model_to_text(again) == text


def test_model_file_parsing_details():
    text = """
# comment
domain a b
algebra atoms=2
fun g: a,a -> b, a,b -> a, b,a -> a, b,b -> b
rel R: a,a=[0,1], a,b=[], b,a=[1], b,b=[0]
"""
    m = parse_model_text(text)
    assert m.signature.functions == {"g": 2}
    assert m.fun_tables["g"][("a", "b")] == "a"
    assert m.rel_tables["R"][("a", "a")] == 0b11
    assert m.rel_tables["R"][("b", "a")] == 0b10


def test_model_file_errors():
    with pytest.raises(ParseError, match="domain"):
        parse_model_text("algebra atoms=1")
    with pytest.raises(ParseError, match="algebra"):
        parse_model_text("domain a")
    with pytest.raises(ParseError, match="atom list"):
        parse_model_text("domain a\nalgebra atoms=1\nrel P: a=1")
    with pytest.raises(ParseError, match="not total"):
        parse_model_text("domain a b\nalgebra atoms=1\nrel P: a=[0]")


def test_valuation_parsing(two_model):
    xi = parse_valuation("x := a, y := b", two_model)
    assert xi.mapping == {x: "a", y: "b"}
    assert xi.default == "a"
    assert parse_valuation("", two_model).mapping == {}
    with pytest.raises(ParseError, match="domain element"):
        parse_valuation("x := zzz", two_model)
