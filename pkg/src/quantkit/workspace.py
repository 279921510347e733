"""Operations layer: assemble parsed inputs and run one workbench command.

Each op takes raw text inputs, type-checks them against the signature in
play, and returns a JSON-ready dict. The FastAPI service and the CLI are both
thin layers over these functions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .boolalg import Ultrafilter, upset
from .formulas import Formula, alpha_normal, free_vars_formula
from .henkin import finite_model_search, fragment_is_perfect, run_pipeline
from .laws import check_clone_laws, check_equality_axioms, check_quantifier_axioms
from .parser import (
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
from .polyadic import check_polyadic_axioms
from .semantics import (
    FunctionalModel,
    Valuation,
    check_support_retraction,
    eval_formula,
)
from .terms import Signature, Variable
from .ultraproduct import los_check, product_model, quotient_to_2model


@dataclass
class Workspace:
    """Named, signature-checked inputs for one run."""

    signature: Signature | None = None
    formulas: dict[str, Formula] = field(default_factory=dict)
    models: dict[str, FunctionalModel] = field(default_factory=dict)
    options: dict = field(default_factory=dict)

    @classmethod
    def assemble(cls, signature_text: str | None = None,
                 formulas_text: str | None = None,
                 model_texts: list[str] | None = None,
                 **options) -> "Workspace":
        """Parse everything against the signature; inferred when absent."""
        sig = _load_signature(signature_text)
        ws = cls(signature=sig, options=options)
        formulas = parse_formulas(formulas_text, sig) if formulas_text else []
        if sig is None and formulas:
            ws.signature = infer_signature(formulas)
        for i, p in enumerate(formulas):
            ws.formulas[f"f{i}"] = p
        for i, text in enumerate(model_texts or []):
            ws.models[f"m{i}"] = parse_model_text(text)
        return ws

    @property
    def formula_list(self) -> list[Formula]:
        return list(self.formulas.values())

    @property
    def model_list(self) -> list[FunctionalModel]:
        return list(self.models.values())


def _load_signature(signature_text: str | None) -> Signature | None:
    if signature_text is None or not signature_text.strip():
        return None
    return parse_signature_text(signature_text)


def op_parse(formula: str, signature_text: str | None = None) -> dict:
    sig = _load_signature(signature_text)
    p = parse_formula(formula, sig)
    if sig is None:
        sig = infer_signature([p])
    normal = alpha_normal(p)
    return {
        "formula": str(normal),
        "free_vars": sorted(str(v) for v in free_vars_formula(p)),
        "signature": signature_to_text(sig),
    }


def op_subst(formula: str, map_text: str, signature_text: str | None = None) -> dict:
    sig = _load_signature(signature_text)
    p = parse_formula(formula, sig)
    s = parse_subst(map_text, sig)
    if sig is None:
        infer_signature([p])  # consistency check only
    from .formulas import subst_formula

    return {"input": str(p), "map": repr(s), "result": str(subst_formula(p, s))}


def op_eval(formula: str, model_text: str, valuation_text: str = "",
            signature_text: str | None = None) -> dict:
    m = parse_model_text(model_text)
    sig = _load_signature(signature_text)
    if sig is not None:
        if sig.functions != m.signature.functions or sig.relations != m.signature.relations:
            raise ParseError("signature does not match the model's symbols", 1, 1)
        if sig.with_equality:
            m.signature.with_equality = True
    p = parse_formula(formula, m.signature)
    xi = parse_valuation(valuation_text, m)
    value = eval_formula(p, xi, m)
    return {
        "formula": str(p),
        "value_atoms": m.algebra.element_to_atoms(value),
        "is_top": value == m.algebra.top,
        "algebra_atoms": m.algebra.atom_count,
    }


SUITES = ("clone", "quantifier", "equality", "polyadic")


def op_axioms(model_text: str, samples: int = 50, seed: int = 0,
              suites: list[str] | None = None) -> dict:
    m = parse_model_text(model_text)
    chosen = list(suites) if suites else ["all"]
    if chosen == ["all"]:
        chosen = [s for s in SUITES if s != "equality" or m.signature.with_equality]
    reports = []
    for suite in chosen:
        if suite == "clone":
            results = check_clone_laws(m, samples, seed)
        elif suite == "quantifier":
            results = check_quantifier_axioms(m, samples, seed)
        elif suite == "equality":
            results = check_equality_axioms(m, samples, seed)
        elif suite == "polyadic":
            results = check_polyadic_axioms(m, samples, seed)
        else:
            raise ParseError(f"unknown suite {suite!r}; choose from {SUITES}", 1, 1)
        for r in results:
            reports.append({
                "suite": suite,
                "law": r.law,
                "checked": r.checked,
                "violations": r.violations[:5],
                "violation_count": len(r.violations),
            })
    total = sum(r["violation_count"] for r in reports)
    return {"suites": chosen, "violations": total, "reports": reports}


def op_henkin(formulas_text: str, rounds: int = 2, depth: int = 2,
              signature_text: str | None = None,
              cross_check_size: int | None = None) -> dict:
    ws = Workspace.assemble(signature_text, formulas_text,
                            rounds=rounds, depth=depth)
    J, sig = ws.formula_list, ws.signature
    result = run_pipeline(J, sig, rounds, depth)
    state = result.state
    out = {
        "verdict": result.verdict,
        "reason": result.reason,
        "inputs": [str(p) for p in J],
        "witnesses": [str(w) for w in state.witnesses],
        "theta": [str(t) for t in state.theta_set],
        "universe": [str(t) for t in state.term_universe],
        "stats": {
            "prop_vars": len(state.prop_vars),
            "total_vars": state.n_vars,
            "clauses": len(state.clauses),
        },
        "model": None,
        "element_terms": None,
        "identity_valuation": None,
        "fragment_perfect": None,
    }
    if result.verdict == "sat":
        tm = result.term_model
        header = "\n".join(
            f"{name} = {term}" for term, name in tm.element_of_term.items())
        out["model"] = model_to_text(tm.model, header=header)
        out["element_terms"] = {name: str(term)
                                for term, name in tm.element_of_term.items()}
        out["identity_valuation"] = {
            str(v): str(e) for v, e in sorted(
                tm.identity_valuation.mapping.items(),
                key=lambda kv: kv[0].sort_key())}
        out["fragment_perfect"] = fragment_is_perfect(state)
    if cross_check_size is not None:
        found = finite_model_search(J, sig, cross_check_size)
        agrees = True
        if result.verdict == "sat" and found is None:
            agrees = False
        if result.verdict == "unsat" and found is not None:
            agrees = False
        out["cross_check"] = {
            "max_size": cross_check_size,
            "found": found is not None,
            "size": len(found.model.domain) if found else None,
            "agrees": agrees,
        }
    else:
        out["cross_check"] = None
    return out


def op_search(formulas_text: str, max_size: int = 3,
              signature_text: str | None = None) -> dict:
    ws = Workspace.assemble(signature_text, formulas_text, max_size=max_size)
    J, sig = ws.formula_list, ws.signature
    found = finite_model_search(J, sig, max_size)
    out = {"found": found is not None, "max_size": max_size,
           "model": None, "valuation": None}
    if found:
        out["model"] = model_to_text(found.model)
        out["valuation"] = {
            str(v): str(e) for v, e in sorted(
                found.valuation.mapping.items(), key=lambda kv: kv[0].sort_key())}
    return out


def op_ultraproduct(model_texts: list[str], at_index: int,
                    formulas_text: str) -> dict:
    ws = Workspace.assemble(model_texts=model_texts, at_index=at_index)
    models = ws.model_list
    if not models:
        raise ParseError("ultraproduct needs at least one model", 1, 1)
    pm = product_model(models)
    B = pm.algebra
    if not 0 <= at_index < B.atom_count:
        raise ParseError(
            f"index {at_index} out of range for {B.atom_count} factors", 1, 1)
    I = Ultrafilter(B, upset(B, 1 << at_index))
    formulas = parse_formulas(formulas_text, models[0].signature)
    quotient = quotient_to_2model(pm, I)
    factor = pm.factors[at_index]

    results = []
    all_ok = True
    for p in formulas:
        free = sorted(free_vars_formula(p), key=Variable.sort_key)
        points = len(pm.model.domain) ** len(free)
        if points > 256:
            raise ParseError(
                f"too many valuations for {p} ({points}); close the formula", 1, 1)
        los_ok = True
        agree_ok = True
        for values in itertools.product(pm.model.domain, repeat=len(free)):
            sigma = Valuation(dict(zip(free, values)), pm.model.domain[0])
            if not los_check(pm, I, p, sigma):
                los_ok = False
            v_q = eval_formula(p, quotient.project_valuation(sigma), quotient.model)
            factor_val = Valuation(
                {v: e[at_index] for v, e in sigma.mapping.items()}, factor.domain[0])
            v_f = eval_formula(p, factor_val, factor)
            if (v_q != 0) != (v_f != 0):
                agree_ok = False
        results.append({
            "formula": str(p),
            "los_ok": los_ok,
            "quotient_equals_factor": agree_ok,
        })
        all_ok = all_ok and los_ok and agree_ok
    return {
        "at_index": at_index,
        "factors": len(models),
        "ok": all_ok,
        "results": results,
        "quotient_model": model_to_text(quotient.model),
    }


def op_support(formula: str, vars_text: str, model_text: str,
               signature_text: str | None = None) -> dict:
    m = parse_model_text(model_text)
    p = parse_formula(formula, m.signature)
    names = [part.strip() for part in vars_text.split(",") if part.strip()]
    if not names:
        raise ParseError("need at least one variable, e.g. --vars x,y", 1, 1)
    U = {Variable(n) for n in names}
    for v in U:
        if v.is_reserved:
            raise ParseError(f"reserved variable {v.name!r} in support set", 1, 1)
    return {
        "formula": str(p),
        "vars": sorted(str(v) for v in U),
        "is_support": check_support_retraction(p, U, m),
    }
