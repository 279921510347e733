"""Terms, variables, signatures, and simultaneous substitution.

Substitution is simultaneous (all bindings applied at once) and acts as the
identity outside its finite explicit domain.
"""
from __future__ import annotations

from dataclasses import dataclass, field

RESERVED_PREFIX = "_h"


@dataclass(frozen=True, order=False)
class Variable:
    """A named variable from a totally ordered namespace.

    Names starting with "_h" are reserved for machine-generated variables
    (bound-variable renaming, Henkin witnesses); user input may not introduce
    them as free variables or as symbol names.
    """

    name: str

    @property
    def is_reserved(self) -> bool:
        return self.name.startswith(RESERVED_PREFIX)

    def sort_key(self):
        # user names sort lexicographically before all reserved names;
        # reserved names sort numerically by index
        if self.is_reserved:
            suffix = self.name[len(RESERVED_PREFIX):]
            if suffix.isdigit():
                return (1, int(suffix), self.name)
            return (1, -1, self.name)
        return (0, 0, self.name)

    def __lt__(self, other: "Variable") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return self.name


def reserved_var(index: int) -> Variable:
    return Variable(f"{RESERVED_PREFIX}{index}")


def fresh_reserved(avoid: set[Variable]) -> Variable:
    """First reserved variable not in `avoid`."""
    k = 0
    while True:
        v = reserved_var(k)
        if v not in avoid:
            return v
        k += 1


class Term:
    """Base class; a term is either a Var or an App."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    var: Variable

    def __str__(self) -> str:
        return self.var.name


@dataclass(frozen=True)
class App(Term):
    fn: str
    args: tuple[Term, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return f"{self.fn}()"
        return f"{self.fn}({', '.join(str(a) for a in self.args)})"


@dataclass
class Signature:
    """Function and relation symbols with arities, plus an equality flag."""

    functions: dict[str, int] = field(default_factory=dict)
    relations: dict[str, int] = field(default_factory=dict)
    with_equality: bool = False

    def __post_init__(self):
        overlap = set(self.functions) & set(self.relations)
        if overlap:
            raise ValueError(f"symbols declared as both function and relation: {sorted(overlap)}")
        for name, arity in list(self.functions.items()) + list(self.relations.items()):
            if arity < 0:
                raise ValueError(f"negative arity for {name}")
            if name.startswith(RESERVED_PREFIX):
                raise ValueError(f"symbol name {name!r} uses the reserved prefix {RESERVED_PREFIX!r}")

    def constants(self) -> list[str]:
        return [f for f, a in self.functions.items() if a == 0]

    def validate_term(self, t: Term) -> None:
        if isinstance(t, Var):
            return
        if isinstance(t, App):
            if t.fn not in self.functions:
                raise ValueError(f"undeclared function symbol {t.fn!r}")
            if len(t.args) != self.functions[t.fn]:
                raise ValueError(
                    f"{t.fn!r} expects {self.functions[t.fn]} arguments, got {len(t.args)}")
            for a in t.args:
                self.validate_term(a)
            return
        raise TypeError(f"not a term: {t!r}")


class Substitution:
    """Finite-support map from variables to terms; identity elsewhere.

    Bindings x -> x are never stored, so two substitutions are equal exactly
    when they act identically.
    """

    __slots__ = ("_map",)

    def __init__(self, mapping: dict[Variable, Term] | None = None):
        self._map: dict[Variable, Term] = {}
        if mapping:
            for v, t in mapping.items():
                if not (isinstance(t, Var) and t.var == v):
                    self._map[v] = t

    @classmethod
    def identity(cls) -> "Substitution":
        return cls()

    def apply(self, v: Variable) -> Term:
        return self._map.get(v, Var(v))

    def domain(self) -> list[Variable]:
        return sorted(self._map, key=Variable.sort_key)

    def items(self):
        return [(v, self._map[v]) for v in self.domain()]

    def __eq__(self, other) -> bool:
        return isinstance(other, Substitution) and self._map == other._map

    def __repr__(self) -> str:
        inner = ", ".join(f"{v} := {t}" for v, t in self.items())
        return f"[{inner}]"


def subst_term(t: Term, s: Substitution) -> Term:
    """Apply s simultaneously to every variable of t."""
    if isinstance(t, Var):
        return s.apply(t.var)
    if isinstance(t, App):
        return App(t.fn, tuple(subst_term(a, s) for a in t.args))
    raise TypeError(f"not a term: {t!r}")


def compose_subst(s: Substitution, u: Substitution) -> Substitution:
    """Pointwise composition: applying the result equals applying s then u."""
    out: dict[Variable, Term] = {}
    for v in set(s.domain()) | set(u.domain()):
        out[v] = subst_term(s.apply(v), u)
    return Substitution(out)


def update_subst(s: Substitution, x: Variable, t: Term) -> Substitution:
    """Substitution mapping x to t and agreeing with s everywhere else."""
    out = dict(s._map)
    out[x] = t
    return Substitution(out)


def single_subst(x: Variable, t: Term) -> Substitution:
    """The map sending x to t and every other variable to itself."""
    return Substitution({x: t})


def free_vars_term(t: Term) -> set[Variable]:
    if isinstance(t, Var):
        return {t.var}
    if isinstance(t, App):
        out: set[Variable] = set()
        for a in t.args:
            out |= free_vars_term(a)
        return out
    raise TypeError(f"not a term: {t!r}")


def term_depth(t: Term) -> int:
    """Nesting depth: variables and constants have depth 0."""
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(term_depth(a) for a in t.args)
