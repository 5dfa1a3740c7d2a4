"""Concrete syntax: parser and printer.

    e ::= \\x y. e | let x = e, y = e in e | a <+> a | a
    a ::= h atom* ;  h ::= atom | seq atom atom | C atom^n
    atom ::= x | id | K | K2 | Bot | Omega | C (nullary) | (e) | [.]
           | case e of { C x* -> e; ... }

``<+>`` does not associate: ``a <+> b <+> c`` is rejected.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .ctors import DEFAULT_TABLE, CtorTable
from .terms import (Alt, App, Case, Choice, Ctor, Expr, Hole, Lam, Let, Name, Seq,
                    SHORTHANDS, Var, alpha_equiv, children, size)

KEYWORDS = {"let", "in", "case", "of", "seq"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<hole>\[\.\]|\[·\]|\[\s*\])
  | (?P<choice><\+>)
  | (?P<arrow>->)
  | (?P<lower>[a-z][A-Za-z0-9_]*(?:\#[0-9]+)?)
  | (?P<upper>[A-Z][A-Za-z0-9_]*)
  | (?P<punct>[\\λ.()=,{};])
""", re.VERBOSE)


class ParseError(ValueError):
    def __init__(self, msg, line, col):
        super().__init__(f"{line}:{col}: {msg}")
        self.line, self.col = line, col


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(src: str) -> list:
    out, pos, line, lstart = [], 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", line, pos - lstart + 1)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            if kind == "lower" and text in KEYWORDS:
                kind = text
            elif kind == "punct":
                kind = "\\" if text == "λ" else text
            out.append(Tok(kind, text, line, pos - lstart + 1))
        for i, ch in enumerate(text):
            if ch == "\n":
                line += 1
                lstart = pos + i + 1
        pos = m.end()
    out.append(Tok("eof", "", line, pos - lstart + 1))
    return out


def parse_name(text: str) -> Name:
    base, _, idx = text.partition("#")
    return Name(base, int(idx) if idx else 0)


class Parser:
    def __init__(self, src: str, table: CtorTable = DEFAULT_TABLE, extended: bool = True):
        self.toks = tokenize(src)
        self.i = 0
        self.table = table
        self.extended = extended

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def eat(self, kind) -> Tok:
        if self.tok.kind != kind:
            self.error(f"expected {kind!r}, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")
        return e

    def expr(self) -> Expr:
        if self.tok.kind in ("\\", "let"):
            return self.prefix()
        left = self.app()
        if self.tok.kind == "choice":
            self.i += 1
            right = self.prefix() if self.tok.kind in ("\\", "let") else self.app()
            if self.tok.kind == "choice":
                self.error("<+> is not associative; add parentheses")
            return Choice(left, right)
        return left

    def prefix(self) -> Expr:
        if self.tok.kind == "\\":
            self.i += 1
            names = [parse_name(self.eat("lower").text)]
            while self.tok.kind == "lower":
                names.append(parse_name(self.eat("lower").text))
            self.eat(".")
            body = self.expr()
            for x in reversed(names):
                body = Lam(x, body)
            return body
        self.eat("let")
        binds, seen = [], set()
        while True:
            t = self.eat("lower")
            x = parse_name(t.text)
            if x in seen:
                self.error(f"variable {x} bound twice in one environment", t)
            seen.add(x)
            self.eat("=")
            binds.append((x, self.expr()))
            if self.tok.kind != ",":
                break
            self.i += 1
        self.eat("in")
        return Let(tuple(binds), self.expr())

    def app(self) -> Expr:
        f = self.head()
        while True:
            if self.starts_atom():
                f = App(f, self.atom())
            elif self.tok.kind in ("\\", "let"):
                return App(f, self.prefix())
            else:
                return f

    def starts_atom(self) -> bool:
        return self.tok.kind in ("lower", "upper", "(", "hole", "case")

    def head(self) -> Expr:
        t = self.tok
        if t.kind == "seq":
            self.need_extended(t)
            self.i += 1
            a = self.atom()
            b = self.atom()
            return Seq(a, b)
        if t.kind == "upper" and t.text not in SHORTHANDS and self.table.has(t.text):
            self.need_extended(t)
            self.i += 1
            args = []
            for _ in range(self.table.arity(t.text)):
                if not self.starts_atom():
                    self.error(f"constructor {t.text} expects {self.table.arity(t.text)} arguments", t)
                args.append(self.atom())
            return Ctor(t.text, tuple(args))
        return self.atom()

    def need_extended(self, t):
        if not self.extended:
            self.error(f"{t.text!r} needs extended mode", t)

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "lower":
            self.i += 1
            if t.text in SHORTHANDS:
                return SHORTHANDS[t.text]
            return Var(parse_name(t.text))
        if t.kind == "upper":
            self.i += 1
            if t.text in SHORTHANDS:
                return SHORTHANDS[t.text]
            if not self.table.has(t.text):
                self.error(f"unknown constructor {t.text}", t)
            self.need_extended(t)
            if self.table.arity(t.text):
                self.error(f"constructor {t.text} is not saturated; add parentheses", t)
            return Ctor(t.text, ())
        if t.kind == "hole":
            self.i += 1
            return Hole()
        if t.kind == "(":
            self.i += 1
            e = self.expr()
            self.eat(")")
            return e
        if t.kind == "case":
            return self.case()
        self.error(f"unexpected {t.text or 'end of input'!r}")

    def case(self) -> Expr:
        t = self.eat("case")
        self.need_extended(t)
        scrut = self.expr()
        self.eat("of")
        self.eat("{")
        alts = {}
        while True:
            c = self.eat("upper")
            if not self.table.has(c.text):
                self.error(f"unknown constructor {c.text}", c)
            xs = []
            while self.tok.kind == "lower":
                xs.append(parse_name(self.eat("lower").text))
            if len(xs) != self.table.arity(c.text):
                self.error(f"pattern {c.text} needs {self.table.arity(c.text)} variables", c)
            if len(set(xs)) != len(xs):
                self.error("pattern variables must be distinct", c)
            if c.text in alts:
                self.error(f"duplicate alternative {c.text}", c)
            self.eat("arrow")
            alts[c.text] = Alt(c.text, tuple(xs), self.expr())
            if self.tok.kind != ";":
                break
            self.i += 1
            if self.tok.kind == "}":
                break
        self.eat("}")
        ty = self.table.type_of(next(iter(alts)))
        wanted = [c for c, _ in self.table.ctors(ty)]
        if sorted(alts) != sorted(wanted) or any(self.table.type_of(c) != ty for c in alts):
            self.error(f"case over {ty} needs exactly the alternatives {', '.join(wanted)}", t)
        return Case(ty, scrut, tuple(alts[c] for c in wanted))


def parse(src: str, table: CtorTable = DEFAULT_TABLE, extended: bool = True) -> Expr:
    return Parser(src, table, extended).parse()


def is_extended(e: Expr) -> bool:
    if isinstance(e, (Ctor, Case, Seq)):
        return True
    return any(is_extended(c) for _, c, _ in children(e))


# ---------------------------------------------------------------- printing

def show(e: Expr, short: bool = False) -> str:
    """Print with minimal parentheses; ``short`` folds closed subterms into id, K, K2, Bot, Omega."""
    return _pr(e, 0, short)


_SHORT = [(name, t, size(t)) for name, t in SHORTHANDS.items()]


def _shorthand(e: Expr) -> Optional[str]:
    n = size(e)
    for name, t, m in _SHORT:
        if n == m and alpha_equiv(e, t):
            return name
    return None


def _pr(e: Expr, prec: int, short: bool = False) -> str:
    # prec 0: anything; 1: operand of <+> or head of application; 2: atom
    if short and not isinstance(e, (Var, Hole)):
        name = _shorthand(e)
        if name is not None:
            return name
    if isinstance(e, Var):
        return str(e.name)
    if isinstance(e, Hole):
        return "[.]"
    if isinstance(e, Lam):
        s = f"\\{e.var}.{_pr(e.body, 0, short)}"
        return s if prec == 0 else f"({s})"
    if isinstance(e, Let):
        bs = ", ".join(f"{x}={_pr(s, 0, short)}" for x, s in e.binds)
        s = f"let {bs} in {_pr(e.body, 0, short)}"
        return s if prec == 0 else f"({s})"
    if isinstance(e, Choice):
        s = f"{_pr(e.left, 1, short)} <+> {_pr(e.right, 1, short)}"
        return s if prec == 0 else f"({s})"
    if isinstance(e, App):
        s = f"{_pr(e.fun, 1, short)} {_pr(e.arg, 2, short)}"
        return s if prec <= 1 else f"({s})"
    if isinstance(e, Ctor):
        if not e.args:
            return e.name
        s = " ".join([e.name] + [_pr(a, 2, short) for a in e.args])
        return s if prec <= 1 else f"({s})"
    if isinstance(e, Seq):
        s = f"seq {_pr(e.first, 2, short)} {_pr(e.second, 2, short)}"
        return s if prec <= 1 else f"({s})"
    if isinstance(e, Case):
        alts = "; ".join(
            " ".join([a.ctor] + [str(x) for x in a.vars]) + " -> " + _pr(a.body, 0, short)
            for a in e.alts)
        return f"case {_pr(e.scrut, 0, short)} of {{{alts}}}"
    raise TypeError(e)
