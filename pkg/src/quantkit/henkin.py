"""Bounded witness-based model construction plus a brute-force model search.

The pipeline grounds a formula set in stages: every universally quantified
subformula gets a fresh witness variable and a witness formula, the problem is
abstracted to propositional clauses over ground atoms and quantified
subformulas, a deterministic DPLL finds a valuation, and a finite term model
is read back and re-verified by evaluation.

The construction is complete only up to its budgets (rounds of quantifier
unfolding, term nesting depth): a run can end "unknown" when the budgets were
too small, and that outcome is distinct from "unsat".
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .boolalg import FiniteBooleanAlgebra, Ultrafilter, is_perfect_on_fragment, upset
from .formulas import (
    And,
    Atom,
    Bot,
    Eq,
    Forall,
    Formula,
    Not,
    Or,
    Top,
    alpha_normal,
    free_vars_formula,
    subst_formula,
)
from .gen import all_two_valued_models
from .semantics import FunctionalModel, Valuation, all_valuations, eval_formula
from .terms import (
    App,
    Signature,
    Term,
    Var,
    Variable,
    free_vars_term,
    fresh_reserved,
    single_subst,
)


class ExtractionError(ValueError):
    """Model extraction failed; usually a sign that the budgets were too small."""


def herbrand_universe(sig: Signature, seeds: list[Variable], depth: int) -> list[Term]:
    """All terms over the seed variables and the signature's functions up to
    the given nesting depth, ordered by depth then construction order."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    level: list[Term] = [Var(v) for v in seeds]
    level += [App(c, ()) for c in sig.constants()]
    if not level:
        raise ValueError("no closed terms: no seed variables and no constants")
    terms = list(level)
    depths = {t: 0 for t in terms}
    for d in range(1, depth + 1):
        new: list[Term] = []
        for f, arity in sig.functions.items():
            if arity == 0:
                continue
            for args in itertools.product(terms, repeat=arity):
                if max(depths[a] for a in args) == d - 1:
                    new.append(App(f, args))
        for t in new:
            depths[t] = d
        terms.extend(new)
    return terms


@dataclass
class WitnessClass:
    """A registered quantified formula with its fresh witness variable.

    theta is the witness formula: the quantified formula or the negated
    witness instance; adding it is always jointly consistent because the
    witness variable is fresh.
    """

    quantified: Forall
    key: Formula
    witness: Variable
    theta: Formula


@dataclass
class HenkinState:
    signature: Signature
    inputs: list[Formula]
    rounds: int
    depth: int
    witnesses: list[Variable] = field(default_factory=list)
    classes: list[WitnessClass] = field(default_factory=list)
    term_universe: list[Term] = field(default_factory=list)
    prop_vars: dict = field(default_factory=dict)
    clauses: list[tuple[int, ...]] = field(default_factory=list)
    n_vars: int = 0
    valuation: dict[int, bool] | None = None

    @property
    def theta_set(self) -> list[Formula]:
        return [c.theta for c in self.classes]


def _outermost_quantified(p: Formula, out: list[Forall]) -> None:
    if isinstance(p, Forall):
        out.append(p)
    elif isinstance(p, Not):
        _outermost_quantified(p.body, out)
    elif isinstance(p, (And, Or)):
        _outermost_quantified(p.lhs, out)
        _outermost_quantified(p.rhs, out)


def _all_variable_names(p: Formula) -> set[Variable]:
    """Free and bound variables alike; used to keep witnesses fresh."""
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
        return _all_variable_names(p.body)
    if isinstance(p, (And, Or)):
        return _all_variable_names(p.lhs) | _all_variable_names(p.rhs)
    if isinstance(p, Forall):
        return _all_variable_names(p.body) | {p.var}
    raise TypeError(f"not a formula: {p!r}")


def henkin_expand(J: list[Formula], rounds: int = 2, depth: int = 2,
                  sig: Signature | None = None) -> HenkinState:
    """Collect quantified subformulas, allocate witnesses, ground, and clause.

    Round one scans the inputs; each later round scans the witness instances
    and universe instances generated by the previous round, so nested
    quantifiers unfold one level per round.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if sig is None:
        from .parser import infer_signature

        sig = infer_signature(J)
    state = HenkinState(sig, list(J), rounds, depth)

    seeds = sorted({v for p in J for v in free_vars_formula(p)}, key=Variable.sort_key)
    avoid: set[Variable] = set(seeds)
    for p in J:
        avoid |= _all_variable_names(p)

    seen: dict[Formula, WitnessClass] = {}
    scan_pool: list[Formula] = list(J)
    for r in range(rounds):
        new_classes: list[WitnessClass] = []
        for f in scan_pool:
            found: list[Forall] = []
            _outermost_quantified(f, found)
            for q in found:
                key = alpha_normal(q)
                if key in seen:
                    continue
                avoid |= _all_variable_names(q)
                w = fresh_reserved(avoid)
                avoid.add(w)
                instance = subst_formula(q.body, single_subst(q.var, Var(w)))
                theta = Or(q, Not(instance))
                cls = WitnessClass(q, key, w, theta)
                seen[key] = cls
                state.classes.append(cls)
                state.witnesses.append(w)
                new_classes.append(cls)
        if not new_classes:
            break
        if r + 1 < rounds:
            pool_seeds = seeds + state.witnesses
            scan_pool = []
            for cls in new_classes:
                witness_instance = subst_formula(
                    cls.quantified.body, single_subst(cls.quantified.var, Var(cls.witness)))
                scan_pool.append(witness_instance)
                if pool_seeds or sig.constants():
                    for t in herbrand_universe(sig, pool_seeds, depth):
                        scan_pool.append(subst_formula(
                            cls.quantified.body, single_subst(cls.quantified.var, t)))

    universe_seeds = seeds + state.witnesses
    if not universe_seeds and not sig.constants():
        # constant-free closed problem: introduce one default element so the
        # term model has a nonempty domain
        w = fresh_reserved(avoid)
        state.witnesses.append(w)
        universe_seeds = [w]
    state.term_universe = herbrand_universe(sig, universe_seeds, depth)

    _build_clauses(state)
    return state


# propositional trees: ("lit", n) | ("const", b) | ("not", t) | ("and", a, b) | ("or", a, b)

def _build_clauses(state: HenkinState) -> None:
    cache: dict = {}

    def var_of(key) -> int:
        if key not in state.prop_vars:
            state.n_vars += 1
            state.prop_vars[key] = state.n_vars
        return state.prop_vars[key]

    def skeleton(p: Formula):
        if isinstance(p, (Atom, Eq)):
            return ("lit", var_of(("atom", p)))
        if isinstance(p, Forall):
            return ("lit", var_of(("forall", alpha_normal(p))))
        if isinstance(p, Top):
            return ("const", True)
        if isinstance(p, Bot):
            return ("const", False)
        if isinstance(p, Not):
            return _neg(skeleton(p.body))
        if isinstance(p, And):
            return _fold("and", skeleton(p.lhs), skeleton(p.rhs))
        if isinstance(p, Or):
            return _fold("or", skeleton(p.lhs), skeleton(p.rhs))
        raise TypeError(f"not a formula: {p!r}")

    def encode(tree) -> int:
        """Literal equivalent to the tree, adding definition clauses as needed."""
        kind = tree[0]
        if kind == "lit":
            return tree[1]
        if kind == "not":
            return -encode(tree[1])
        a, b = encode(tree[1]), encode(tree[2])
        key = (kind, a, b)
        if key in cache:
            return cache[key]
        state.n_vars += 1
        x = state.n_vars
        if kind == "and":
            state.clauses.extend([(-x, a), (-x, b), (x, -a, -b)])
        else:
            state.clauses.extend([(-x, a, b), (x, -a), (x, -b)])
        cache[key] = x
        return x

    def assert_true(tree) -> None:
        kind = tree[0]
        if kind == "const":
            if not tree[1]:
                state.clauses.append(())
            return
        if kind == "and":
            assert_true(tree[1])
            assert_true(tree[2])
            return
        if kind == "or":
            # flatten a disjunction into a single clause, left to right
            lits = []
            stack = [tree]
            while stack:
                node = stack.pop()
                if node[0] == "or":
                    stack.append(node[2])
                    stack.append(node[1])
                else:
                    lits.append(node)
            state.clauses.append(tuple(encode(l) for l in lits))
            return
        state.clauses.append((encode(tree),))

    for f in state.inputs:
        assert_true(skeleton(f))
    for cls in state.classes:
        assert_true(skeleton(cls.theta))
    for cls in state.classes:
        head = var_of(("forall", cls.key))
        for t in state.term_universe:
            inst = subst_formula(
                cls.quantified.body, single_subst(cls.quantified.var, t))
            assert_true(_fold("or", ("not", ("lit", head)), skeleton(inst)))


def _neg(tree):
    if tree[0] == "const":
        return ("const", not tree[1])
    if tree[0] == "not":
        return tree[1]
    return ("not", tree)


def _fold(kind, a, b):
    unit = kind == "and"
    for side, other in ((a, b), (b, a)):
        if side[0] == "const":
            return other if side[1] == unit else side
    return (kind, a, b)


def sat_solve(state: HenkinState) -> dict[int, bool] | None:
    """Deterministic DPLL: unit propagation, branch on the smallest
    unassigned variable, true first. Stores and returns a total valuation
    (unconstrained variables default to false), or None when unsatisfiable."""
    result = _dpll(state.clauses, {})
    if result is None:
        state.valuation = None
        return None
    full = {v: result.get(v, False) for v in range(1, state.n_vars + 1)}
    state.valuation = full
    return full


def _clause_state(clause, assignment):
    unassigned = []
    for lit in clause:
        val = assignment.get(abs(lit))
        if val is None:
            unassigned.append(lit)
        elif (lit > 0) == val:
            return "sat", None
    return ("conflict", None) if not unassigned else ("open", unassigned)


def _dpll(clauses, assignment):
    assignment = dict(assignment)
    while True:
        changed = False
        all_sat = True
        for clause in clauses:
            status, unassigned = _clause_state(clause, assignment)
            if status == "sat":
                continue
            if status == "conflict":
                return None
            all_sat = False
            if len(unassigned) == 1:
                lit = unassigned[0]
                assignment[abs(lit)] = lit > 0
                changed = True
        if all_sat:
            return assignment
        if not changed:
            break
    branch = min(
        abs(lit)
        for clause in clauses
        for lit in clause
        if abs(lit) not in assignment
        and _clause_state(clause, assignment)[0] == "open")
    for val in (True, False):
        result = _dpll(clauses, {**assignment, branch: val})
        if result is not None:
            return result
    return None


@dataclass
class TermModel:
    """A two-valued model whose elements are ground-term classes."""

    model: FunctionalModel
    element_of_term: dict[Term, str]
    identity_valuation: Valuation


def _subterms(t: Term, out: list[Term]) -> None:
    out.append(t)
    if isinstance(t, App):
        for a in t.args:
            _subterms(a, out)


def build_term_model(state: HenkinState) -> TermModel:
    """Read a model off the valuation: universe terms modulo the equality
    congruence, relation tables from the decided atoms, everything else false.

    Raises ExtractionError when the valuation cannot be made coherent (a sign
    of insufficient budgets) or the extracted model fails to satisfy an input.
    """
    if state.valuation is None:
        raise ExtractionError("no valuation: run the solver first")
    sig = state.signature

    terms: list[Term] = []
    positions: dict[Term, int] = {}

    def intern(t: Term) -> int:
        if t not in positions:
            positions[t] = len(terms)
            terms.append(t)
        return positions[t]

    for t in state.term_universe:
        intern(t)
    universe_size = len(terms)
    atom_keys = [key for key in state.prop_vars if key[0] == "atom"]
    for _, atom in atom_keys:
        parts: list[Term] = []
        if isinstance(atom, Atom):
            for a in atom.args:
                _subterms(a, parts)
        else:
            _subterms(atom.lhs, parts)
            _subterms(atom.rhs, parts)
        for t in parts:
            intern(t)

    parent = list(range(len(terms)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> bool:
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        # keep the smallest index as the root so universe terms win
        parent[max(ri, rj)] = min(ri, rj)
        return True

    if sig.with_equality:
        for key, atom in atom_keys:
            if isinstance(atom, Eq) and state.valuation[state.prop_vars[("atom", atom)]]:
                union(positions[atom.lhs], positions[atom.rhs])
        # congruence propagation: equal arguments force equal applications
        apps = [(i, t) for i, t in enumerate(terms) if isinstance(t, App) and t.args]
        changed = True
        while changed:
            changed = False
            for (i, s), (j, t) in itertools.combinations(apps, 2):
                if s.fn == t.fn and find(i) != find(j) and all(
                        find(positions[a]) == find(positions[b])
                        for a, b in zip(s.args, t.args)):
                    union(i, j)
                    changed = True
        for key, atom in atom_keys:
            if isinstance(atom, Eq) and not state.valuation[state.prop_vars[("atom", atom)]]:
                if find(positions[atom.lhs]) == find(positions[atom.rhs]):
                    raise ExtractionError(
                        f"incoherent valuation: {atom} is false but both sides "
                        "collapse to one element (increase --rounds/--depth)")

    rep_ids = sorted({find(i) for i in range(universe_size)})
    elem_name = {rid: f"e{k}" for k, rid in enumerate(rep_ids)}
    domain = tuple(elem_name[rid] for rid in rep_ids)

    def element_of(t: Term) -> str | None:
        i = positions.get(t)
        if i is None:
            return None
        rid = find(i)
        return elem_name.get(rid)

    element_of_term = {t: element_of(t) for t in state.term_universe}

    fun_tables: dict[str, dict[tuple, str]] = {}
    rep_terms = {elem_name[rid]: terms[rid] for rid in rep_ids}
    for f, arity in sig.functions.items():
        table: dict[tuple, str] = {}
        for args in itertools.product(domain, repeat=arity):
            applied = App(f, tuple(rep_terms[a] for a in args))
            target = element_of(applied)
            # applications past the depth budget fall back to the first element
            table[args] = target if target is not None else domain[0]
        fun_tables[f] = table

    rel_tables: dict[str, dict[tuple, int]] = {
        r: {args: 0 for args in itertools.product(domain, repeat=arity)}
        for r, arity in sig.relations.items()
    }
    decided: dict[tuple, bool] = {}
    for key, atom in atom_keys:
        if not isinstance(atom, Atom):
            continue
        value = state.valuation[state.prop_vars[("atom", atom)]]
        elems = tuple(element_of(t) for t in atom.args)
        if any(e is None for e in elems):
            continue  # mentions terms outside the bounded universe
        slot = (atom.rel, elems)
        if slot in decided and decided[slot] != value:
            raise ExtractionError(
                f"incoherent valuation: congruent copies of {atom.rel}{elems} "
                "disagree (increase --rounds/--depth)")
        decided[slot] = value
        rel_tables[atom.rel][elems] = 1 if value else 0

    model = FunctionalModel(sig, domain, FiniteBooleanAlgebra(1), fun_tables, rel_tables)

    free = sorted({v for p in state.inputs for v in free_vars_formula(p)},
                  key=Variable.sort_key)
    identity = Valuation({v: element_of(Var(v)) for v in free}, domain[0])

    for p in state.inputs:
        if eval_formula(p, identity, model) != model.algebra.top:
            raise ExtractionError(
                f"extracted model does not satisfy {p} (increase --rounds/--depth)")
    return TermModel(model, element_of_term, identity)


def skeleton_value(state: HenkinState, p: Formula) -> bool:
    """Truth value of a formula's propositional abstraction under the stored
    valuation; abstractions the grounding never saw default to false."""
    if state.valuation is None:
        raise ExtractionError("no valuation: run the solver first")
    if isinstance(p, (Atom, Eq)):
        idx = state.prop_vars.get(("atom", p))
        return False if idx is None else state.valuation[idx]
    if isinstance(p, Forall):
        idx = state.prop_vars.get(("forall", alpha_normal(p)))
        return False if idx is None else state.valuation[idx]
    if isinstance(p, Top):
        return True
    if isinstance(p, Bot):
        return False
    if isinstance(p, Not):
        return not skeleton_value(state, p.body)
    if isinstance(p, And):
        return skeleton_value(state, p.lhs) and skeleton_value(state, p.rhs)
    if isinstance(p, Or):
        return skeleton_value(state, p.lhs) or skeleton_value(state, p.rhs)
    raise TypeError(f"not a formula: {p!r}")


def fragment_is_perfect(state: HenkinState) -> bool:
    """Check the witness property of the valuation-induced ultrafilter on the
    grounded fragment: every registered quantified formula is witnessed by its
    own witness variable."""
    B = FiniteBooleanAlgebra(1)
    I = Ultrafilter(B, upset(B, B.top))
    frag = [(c.quantified.var, c.quantified.body, [Var(c.witness)])
            for c in state.classes]
    return is_perfect_on_fragment(
        I, frag, lambda f: B.top if skeleton_value(state, f) else B.bot)


@dataclass
class SearchResult:
    model: FunctionalModel
    valuation: Valuation


def finite_model_search(J: list[Formula], sig: Signature,
                        max_size: int = 3) -> SearchResult | None:
    """Brute-force search over all two-valued models up to max_size, equality
    fixed as the diagonal; first hit in enumeration order, else None.

    None means "no model up to max_size", not unsatisfiability.
    """
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    for name, arity in list(sig.functions.items()) + list(sig.relations.items()):
        if arity > 4:
            raise ValueError(
                f"{name!r} has arity {arity}; table enumeration stops at arity 4")
    free = {v for p in J for v in free_vars_formula(p)}
    for size in range(1, max_size + 1):
        for m in all_two_valued_models(sig, size):
            for xi in all_valuations(m, free):
                if all(eval_formula(p, xi, m) == m.algebra.top for p in J):
                    return SearchResult(m, xi)
    return None


@dataclass
class HenkinResult:
    verdict: str  # "sat" | "unsat" | "unknown"
    state: HenkinState
    term_model: TermModel | None = None
    reason: str = ""


def run_pipeline(J: list[Formula], sig: Signature | None = None,
                 rounds: int = 2, depth: int = 2) -> HenkinResult:
    """Expand, solve, extract, verify. "unknown" marks a budget failure."""
    state = henkin_expand(J, rounds, depth, sig)
    if sat_solve(state) is None:
        return HenkinResult("unsat", state, reason="propositional core is unsatisfiable")
    try:
        tm = build_term_model(state)
    except ExtractionError as exc:
        return HenkinResult("unknown", state, reason=str(exc))
    return HenkinResult("sat", state, term_model=tm)
