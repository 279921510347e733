"""Concrete syntax: formulas, terms, signature files, model files, maps.

Formula syntax: `forall x. p`, `exists x. p`, `forall {x,y}. p`, `p & q`,
`p | q`, `~p`, `p -> q` (sugar for `~p | q`), `true`, `false`, `t1 = t2`,
`P(t1,...,tn)`. Precedence: `~` over `&` over `|` over `->`; quantifiers bind
weakest. `exists x. p` is sugar for `~forall x. ~p`.

Without a signature, symbols are inferred from use: parenthesized names in
term position are functions, atom names are relations, bare term names are
variables. With a signature, bare names declared as 0-ary functions resolve
to constants.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .boolalg import FiniteBooleanAlgebra
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
    free_vars_formula,
)
from .polyadic import forall_set
from .semantics import FunctionalModel, Valuation
from .terms import (
    RESERVED_PREFIX,
    App,
    Signature,
    Substitution,
    Term,
    Var,
    Variable,
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<SKIP>[ \t\r]+)"
    r"|(?P<COMMENT>#[^\n]*)"
    r"|(?P<NEWLINE>\n)"
    r"|(?P<ARROW>->)"
    r"|(?P<ASSIGN>:=)"
    r"|(?P<NAME>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<LPAREN>\()"
    r"|(?P<RPAREN>\))"
    r"|(?P<LBRACE>\{)"
    r"|(?P<RBRACE>\})"
    r"|(?P<COMMA>,)"
    r"|(?P<DOT>\.)"
    r"|(?P<SEMI>;)"
    r"|(?P<EQUAL>=)"
    r"|(?P<AMP>&)"
    r"|(?P<PIPE>\|)"
    r"|(?P<TILDE>~)"
)

KEYWORDS = {"forall", "exists", "true", "false"}


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        mo = _TOKEN_RE.match(text, pos)
        if mo is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = mo.lastgroup
        lexeme = mo.group()
        if kind == "NEWLINE":
            tokens.append(Token("SEP", lexeme, line, col))
            line += 1
            col = 1
        else:
            if kind == "NAME" and lexeme in KEYWORDS:
                kind = lexeme.upper()
            if kind == "SEMI":
                kind = "SEP"
            if kind not in ("SKIP", "COMMENT"):
                tokens.append(Token(kind, lexeme, line, col))
            col += len(lexeme)
        pos = mo.end()
    tokens.append(Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], sig: Signature | None):
        self.tokens = tokens
        self.pos = 0
        self.sig = sig
        self.bound: list[Variable] = []

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.col)

    def expect(self, kind: str) -> Token:
        if self.peek().kind != kind:
            raise self.error(f"expected {kind}, got {self.peek().text or 'end of input'}")
        return self.next()

    def skip_separators(self) -> None:
        while self.peek().kind == "SEP":
            self.next()

    # ---- formulas ----

    def formula(self) -> Formula:
        return self.quantified()

    def quantified(self) -> Formula:
        tok = self.peek()
        if tok.kind in ("FORALL", "EXISTS"):
            self.next()
            if self.peek().kind == "LBRACE":
                if tok.kind == "EXISTS":
                    raise self.error("exists takes a single variable", tok)
                self.next()
                vars = [self.binder_name()]
                while self.peek().kind == "COMMA":
                    self.next()
                    vars.append(self.binder_name())
                self.expect("RBRACE")
                self.expect("DOT")
                for v in vars:
                    self.bound.append(v)
                body = self.quantified()
                del self.bound[-len(vars):]
                return forall_set(set(vars), body)
            v = self.binder_name()
            self.expect("DOT")
            self.bound.append(v)
            body = self.quantified()
            self.bound.pop()
            if tok.kind == "EXISTS":
                return Not(Forall(v, Not(body)))
            return Forall(v, body)
        return self.implication()

    def binder_name(self) -> Variable:
        tok = self.expect("NAME")
        if self.sig and (tok.text in self.sig.functions or tok.text in self.sig.relations):
            raise self.error(f"{tok.text!r} is a declared symbol, not a variable", tok)
        return Variable(tok.text)

    def implication(self) -> Formula:
        lhs = self.disjunction()
        if self.peek().kind == "ARROW":
            self.next()
            rhs = self.implication()
            return Or(Not(lhs), rhs)
        return lhs

    def disjunction(self) -> Formula:
        out = self.conjunction()
        while self.peek().kind == "PIPE":
            self.next()
            out = Or(out, self.conjunction())
        return out

    def conjunction(self) -> Formula:
        out = self.negation()
        while self.peek().kind == "AMP":
            self.next()
            out = And(out, self.negation())
        return out

    def negation(self) -> Formula:
        if self.peek().kind == "TILDE":
            self.next()
            return Not(self.negation())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "TRUE":
            self.next()
            return Top()
        if tok.kind == "FALSE":
            self.next()
            return Bot()
        if tok.kind == "LPAREN":
            self.next()
            out = self.formula()
            self.expect("RPAREN")
            return out
        if tok.kind in ("FORALL", "EXISTS"):
            return self.quantified()
        if tok.kind != "NAME":
            raise self.error(f"expected a formula, got {tok.text or 'end of input'}")
        name_tok = self.next()
        args: tuple[Term, ...] | None = None
        if self.peek().kind == "LPAREN":
            args = self.arg_list()
        if self.peek().kind == "EQUAL":
            lhs = self.as_term(name_tok, args)
            self.next()
            rhs = self.term()
            if self.sig and not self.sig.with_equality:
                raise self.error("equality is not enabled in the signature", name_tok)
            return Eq(lhs, rhs)
        return self.as_atom(name_tok, args)

    def arg_list(self) -> tuple[Term, ...]:
        self.expect("LPAREN")
        if self.peek().kind == "RPAREN":
            self.next()
            return ()
        args = [self.term()]
        while self.peek().kind == "COMMA":
            self.next()
            args.append(self.term())
        self.expect("RPAREN")
        return tuple(args)

    def term(self) -> Term:
        tok = self.expect("NAME")
        args = self.arg_list() if self.peek().kind == "LPAREN" else None
        return self.as_term(tok, args)

    def as_term(self, tok: Token, args: tuple[Term, ...] | None) -> Term:
        name = tok.text
        if args is not None:
            if self.sig:
                if name not in self.sig.functions:
                    raise self.error(f"undeclared function symbol {name!r}", tok)
                if self.sig.functions[name] != len(args):
                    raise self.error(
                        f"{name!r} expects {self.sig.functions[name]} arguments, "
                        f"got {len(args)}", tok)
            if name.startswith(RESERVED_PREFIX):
                raise self.error(f"symbol {name!r} uses the reserved prefix", tok)
            return App(name, args)
        if self.sig:
            if name in self.sig.functions:
                if self.sig.functions[name] == 0:
                    return App(name, ())
                raise self.error(f"function {name!r} needs arguments", tok)
            if name in self.sig.relations:
                raise self.error(f"relation {name!r} used in term position", tok)
        v = Variable(name)
        if v.is_reserved and v not in self.bound:
            raise self.error(f"reserved variable {name!r} cannot occur free", tok)
        return Var(v)

    def as_atom(self, tok: Token, args: tuple[Term, ...] | None) -> Formula:
        name = tok.text
        if name.startswith(RESERVED_PREFIX):
            raise self.error(f"symbol {name!r} uses the reserved prefix", tok)
        arity = 0 if args is None else len(args)
        if self.sig:
            if name not in self.sig.relations:
                raise self.error(f"undeclared relation symbol {name!r}", tok)
            if self.sig.relations[name] != arity:
                raise self.error(
                    f"{name!r} expects {self.sig.relations[name]} arguments, got {arity}",
                    tok)
        return Atom(name, args or ())

    # ---- substitution and valuation maps ----

    def subst_map(self) -> Substitution:
        mapping: dict[Variable, Term] = {}
        if self.peek().kind == "EOF":
            return Substitution(mapping)
        while True:
            tok = self.expect("NAME")
            v = Variable(tok.text)
            if v.is_reserved:
                raise self.error("cannot substitute for a reserved variable", tok)
            if self.sig and (tok.text in self.sig.functions or tok.text in self.sig.relations):
                raise self.error(f"{tok.text!r} is a declared symbol, not a variable", tok)
            self.expect("ASSIGN")
            t = self.term()
            if v in mapping:
                raise self.error(f"duplicate binding for {v}", tok)
            mapping[v] = t
            if self.peek().kind != "COMMA":
                break
            self.next()
        self.expect("EOF")
        return Substitution(mapping)


def parse_formula(text: str, sig: Signature | None = None) -> Formula:
    parser = _Parser(tokenize(text), sig)
    parser.skip_separators()
    out = parser.formula()
    parser.skip_separators()
    parser.expect("EOF")
    _reject_free_reserved(out)
    return out


def parse_formulas(text: str, sig: Signature | None = None) -> list[Formula]:
    """Parse a problem: formulas separated by newlines or semicolons."""
    parser = _Parser(tokenize(text), sig)
    out: list[Formula] = []
    parser.skip_separators()
    while parser.peek().kind != "EOF":
        f = parser.formula()
        _reject_free_reserved(f)
        out.append(f)
        if parser.peek().kind not in ("SEP", "EOF"):
            raise parser.error(
                f"expected end of formula, got {parser.peek().text!r}")
        parser.skip_separators()
    return out


def parse_term(text: str, sig: Signature | None = None) -> Term:
    parser = _Parser(tokenize(text), sig)
    out = parser.term()
    parser.expect("EOF")
    return out


def parse_subst(text: str, sig: Signature | None = None) -> Substitution:
    return _Parser(tokenize(text), sig).subst_map()


def _reject_free_reserved(p: Formula) -> None:
    bad = sorted(v.name for v in free_vars_formula(p) if v.is_reserved)
    if bad:
        raise ParseError(f"reserved variable {bad[0]!r} cannot occur free", 1, 1)


# ---- signature inference ----

def infer_signature(formulas: list[Formula]) -> Signature:
    """Derive a signature from use; rejects inconsistent arities and names
    used both as symbols and as variables."""
    functions: dict[str, int] = {}
    relations: dict[str, int] = {}
    variables: set[str] = set()
    equality = False

    def walk_term(t: Term):
        nonlocal equality
        if isinstance(t, Var):
            variables.add(t.var.name)
            return
        seen = functions.get(t.fn)
        if seen is not None and seen != len(t.args):
            raise ParseError(
                f"function {t.fn!r} used with arities {seen} and {len(t.args)}", 1, 1)
        if t.fn in relations:
            raise ParseError(f"{t.fn!r} used as both function and relation", 1, 1)
        functions[t.fn] = len(t.args)
        for a in t.args:
            walk_term(a)

    def walk(p: Formula):
        nonlocal equality
        if isinstance(p, Atom):
            seen = relations.get(p.rel)
            if seen is not None and seen != len(p.args):
                raise ParseError(
                    f"relation {p.rel!r} used with arities {seen} and {len(p.args)}", 1, 1)
            if p.rel in functions:
                raise ParseError(f"{p.rel!r} used as both function and relation", 1, 1)
            relations[p.rel] = len(p.args)
            for t in p.args:
                walk_term(t)
        elif isinstance(p, Eq):
            equality = True
            walk_term(p.lhs)
            walk_term(p.rhs)
        elif isinstance(p, Not):
            walk(p.body)
        elif isinstance(p, (And, Or)):
            walk(p.lhs)
            walk(p.rhs)
        elif isinstance(p, Forall):
            variables.add(p.var.name)
            walk(p.body)

    for f in formulas:
        walk(f)
    clash = variables & (set(functions) | set(relations))
    if clash:
        raise ParseError(
            f"{sorted(clash)[0]!r} used as both a variable and a symbol", 1, 1)
    return Signature(functions, relations, equality)


# ---- signature files ----

def parse_signature_text(text: str) -> Signature:
    functions: dict[str, int] = {}
    relations: dict[str, int] = {}
    equality = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "equality":
            if len(parts) != 2 or parts[1] not in ("on", "off"):
                raise ParseError("expected 'equality on' or 'equality off'", lineno, 1)
            equality = parts[1] == "on"
            continue
        if parts[0] in ("fun", "rel"):
            if len(parts) != 2 or "/" not in parts[1]:
                raise ParseError(f"expected '{parts[0]} name/arity'", lineno, 1)
            name, _, arity_text = parts[1].partition("/")
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", name) or name in KEYWORDS:
                raise ParseError(f"bad symbol name {name!r}", lineno, 1)
            if not arity_text.isdigit():
                raise ParseError(f"bad arity {arity_text!r}", lineno, 1)
            table = functions if parts[0] == "fun" else relations
            if name in functions or name in relations:
                raise ParseError(f"duplicate symbol {name!r}", lineno, 1)
            table[name] = int(arity_text)
            continue
        raise ParseError(f"unknown declaration {parts[0]!r}", lineno, 1)
    try:
        return Signature(functions, relations, equality)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from exc


def signature_to_text(sig: Signature) -> str:
    lines = [f"fun {f}/{a}" for f, a in sig.functions.items()]
    lines += [f"rel {r}/{a}" for r, a in sig.relations.items()]
    lines.append(f"equality {'on' if sig.with_equality else 'off'}")
    return "\n".join(lines) + "\n"


# ---- model files ----

_NAME_RE = re.compile(r"[A-Za-z0-9_()']+")


def _split_outside_brackets(s: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in s:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return out


def _group_entries(chunks: list[str], sep: str, lineno: int) -> list[tuple[list[str], str]]:
    """Regroup comma-split chunks into (argument list, value) entries."""
    entries: list[tuple[list[str], str]] = []
    pending: list[str] = []
    for chunk in chunks:
        if sep in chunk:
            left, _, value = chunk.partition(sep)
            args = pending + ([left.strip()] if left.strip() else [])
            entries.append((args, value.strip()))
            pending = []
        else:
            if not chunk:
                raise ParseError("empty table entry", lineno, 1)
            pending.append(chunk)
    if pending:
        raise ParseError(f"table entry missing {sep!r}", lineno, 1)
    return entries


def parse_model_text(text: str) -> FunctionalModel:
    domain: list[str] | None = None
    atom_count: int | None = None
    equality = False
    fun_tables: dict[str, dict[tuple, str]] = {}
    rel_tables: dict[str, dict[tuple, int]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "domain":
            domain = rest.split()
            if not domain:
                raise ParseError("empty domain", lineno, 1)
            continue
        if head == "algebra":
            mo = re.fullmatch(r"atoms\s*=\s*(\d+)", rest.strip())
            if not mo:
                raise ParseError("expected 'algebra atoms=N'", lineno, 1)
            atom_count = int(mo.group(1))
            continue
        if head == "equality":
            if rest.strip() not in ("on", "off"):
                raise ParseError("expected 'equality on' or 'equality off'", lineno, 1)
            equality = rest.strip() == "on"
            continue
        if head in ("fun", "rel"):
            name, _, body = rest.partition(":")
            name = name.strip()
            if not name:
                raise ParseError(f"expected '{head} name: entries'", lineno, 1)
            entries = _group_entries(
                _split_outside_brackets(body), "->" if head == "fun" else "=", lineno)
            if head == "fun":
                table_f: dict[tuple, str] = {}
                for args, value in entries:
                    table_f[tuple(args)] = value
                fun_tables[name] = table_f
            else:
                table_r: dict[tuple, int] = {}
                for args, value in entries:
                    mo = re.fullmatch(r"\[([0-9,\s]*)\]", value)
                    if not mo:
                        raise ParseError(
                            f"relation value must be an atom list like [0,2], got {value!r}",
                            lineno, 1)
                    idxs = [int(part) for part in mo.group(1).split(",") if part.strip()]
                    table_r[tuple(args)] = sum(1 << i for i in set(idxs))
                rel_tables[name] = table_r
            continue
        raise ParseError(f"unknown model declaration {head!r}", lineno, 1)

    if domain is None:
        raise ParseError("model file needs a 'domain' line", 1, 1)
    if atom_count is None:
        raise ParseError("model file needs an 'algebra' line", 1, 1)
    sig = Signature(
        functions={f: len(next(iter(t), ())) for f, t in fun_tables.items()},
        relations={r: len(next(iter(t), ())) for r, t in rel_tables.items()},
        with_equality=equality,
    )
    try:
        return FunctionalModel(
            sig, tuple(domain), FiniteBooleanAlgebra(atom_count),
            fun_tables, rel_tables)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from exc


def model_to_text(m: FunctionalModel, header: str | None = None) -> str:
    lines = []
    if header:
        lines.extend(f"# {part}" for part in header.splitlines())
    lines.append("domain " + " ".join(str(e) for e in m.domain))
    lines.append(f"algebra atoms={m.algebra.atom_count}")
    if m.signature.with_equality:
        lines.append("equality on")
    for f in m.signature.functions:
        entries = [
            ("," .join(str(a) for a in args) + " -> " + str(val)).strip()
            for args, val in sorted(m.fun_tables[f].items())
        ]
        lines.append(f"fun {f}: " + ", ".join(entries))
    for r in m.signature.relations:
        entries = []
        for args, val in sorted(m.rel_tables[r].items()):
            atoms = ",".join(str(i) for i in m.algebra.element_to_atoms(val))
            entries.append(",".join(str(a) for a in args) + f"=[{atoms}]")
        lines.append(f"rel {r}: " + ", ".join(entries))
    return "\n".join(lines) + "\n"


def parse_valuation(text: str, m: FunctionalModel) -> Valuation:
    """Parse `x:=a, y:=b` against a model's domain."""
    mapping: dict[Variable, str] = {}
    text = text.strip()
    if text:
        for part in _split_outside_brackets(text):
            mo = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*:=\s*(\S+)\s*", part)
            if not mo:
                raise ParseError(f"expected 'var:=element', got {part!r}", 1, 1)
            v = Variable(mo.group(1))
            if v.is_reserved:
                raise ParseError(f"reserved variable {v.name!r} in valuation", 1, 1)
            if mo.group(2) not in {str(e) for e in m.domain}:
                raise ParseError(f"{mo.group(2)!r} is not a domain element", 1, 1)
            mapping[v] = mo.group(2)
    by_name = {str(e): e for e in m.domain}
    return Valuation({v: by_name[e] for v, e in mapping.items()}, m.domain[0])
