"""Brace notation for game forms: tokenizer, parser, printer and evaluator.

Inside one brace group the separator with the most bars splits the top-level
left and right options; runs of fewer bars on either side form a nested
anonymous game, so ``{0|K||0|0}`` reads as ``{{0|K} | {0|0}}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .arena import Arena


class ParseError(ValueError):
    """Syntax or binding error, carrying the 0-based character offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"position {pos}: {message}")
        self.message = message
        self.pos = pos


# -- syntax tree --------------------------------------------------------------

@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class BraceGame(Expr):
    left: tuple[Expr, ...]
    right: tuple[Expr, ...]


@dataclass(frozen=True)
class Name(Expr):
    name: str
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True)
class Half(Expr):
    pass


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Add(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Sub(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Mul(Expr):
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Let(Expr):
    name: str
    value: Expr
    body: Expr


# -- tokenizer ----------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<twocirc>2[o°](?![A-Za-z0-9_]))
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<bars>\|+)
  | (?P<op>[{}(),+=/*·.−-])
""", re.VERBOSE)

_OP_KIND = {"−": "-", ".": "·"}


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        s = m.group()
        if kind == "op":
            s = _OP_KIND.get(s, s)
            tokens.append(Token(s, s, pos))
        elif kind == "name" and s in ("let", "in"):
            tokens.append(Token(s, s, pos))
        elif kind != "ws":
            tokens.append(Token(kind, s, pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


# -- parser -------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {self._describe(self.tok)}", self.tok.pos)
        return self.advance()

    @staticmethod
    def _describe(t: Token) -> str:
        return "end of input" if t.kind == "eof" else repr(t.text)

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "eof":
            raise ParseError(f"unexpected {self._describe(self.tok)}", self.tok.pos)
        return e

    def expr(self) -> Expr:
        if self.tok.kind == "let":
            self.advance()
            name = self.expect("name").text
            self.expect("=")
            value = self.expr()
            self.expect("in")
            return Let(name, value, self.expr())
        return self.sum()

    def sum(self) -> Expr:
        e = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.term()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.tok.kind == "·":
            self.advance()
            e = Mul(e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.tok.kind == "-":
            self.advance()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "int":
            self.advance()
            if self.tok.kind == "/":
                slash = self.advance()
                den = self.expect("int")
                if (t.text, den.text) != ("1", "2"):
                    raise ParseError("only the fraction 1/2 is supported", slash.pos)
                return Half()
            return IntLit(int(t.text))
        if t.kind == "*":
            self.advance()
            return Name("*", t.pos)
        if t.kind == "twocirc":
            self.advance()
            return Name("2°", t.pos)
        if t.kind == "name":
            self.advance()
            return Name(t.text, t.pos)
        if t.kind == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "{":
            return self.brace()
        raise ParseError(f"expected a game, found {self._describe(t)}", t.pos)

    def brace(self) -> Expr:
        open_tok = self.expect("{")
        # flat list of items and separators: ("item", expr, pos) | ("sep", bars, pos)
        parts: list[tuple[str, object, int]] = []
        while self.tok.kind != "}":
            t = self.tok
            if t.kind == "eof":
                raise ParseError("unclosed '{'", open_tok.pos)
            if t.kind == "bars":
                self.advance()
                parts.append(("sep", len(t.text), t.pos))
            elif t.kind == ",":
                self.advance()
                parts.append(("sep", 0, t.pos))
            else:
                parts.append(("item", self.expr(), t.pos))
                if self.tok.kind not in ("bars", ",", "}"):
                    raise ParseError(f"expected ',', '|' or '}}', found {self._describe(self.tok)}",
                                     self.tok.pos)
        self.advance()
        if not any(kind == "sep" and n > 0 for kind, n, _ in parts):
            raise ParseError("brace group has no '|' separator", open_tok.pos)
        return _split_game(parts, open_tok.pos)


def _split_game(parts: list[tuple[str, object, int]], pos: int) -> BraceGame:
    top = max(n for kind, n, _ in parts if kind == "sep")
    cuts = [i for i, (kind, n, _) in enumerate(parts) if kind == "sep" and n == top]
    if len(cuts) > 1:
        raise ParseError(f"ambiguous: more than one {'|' * top!r} separator at one level",
                         parts[cuts[1]][2])
    cut = cuts[0]
    return BraceGame(_side(parts[:cut], parts[cut][2]), _side(parts[cut + 1:], parts[cut][2]))


def _side(parts: list[tuple[str, object, int]], pos: int) -> tuple[Expr, ...]:
    if not parts:
        return ()
    if any(kind == "sep" and n > 0 for kind, n, _ in parts):
        return (_split_game(parts, pos),)
    items: list[Expr] = []
    expect_item = True
    for kind, val, p in parts:
        if kind == "item":
            if not expect_item:
                raise ParseError("missing ',' between options", p)
            items.append(val)  # type: ignore[arg-type]
            expect_item = False
        else:
            if expect_item:
                raise ParseError("empty option", p)
            expect_item = True
    if expect_item:
        raise ParseError("trailing ','", parts[-1][2])
    return tuple(items)


def parse(text: str) -> Expr:
    return _Parser(text).parse()


# -- evaluation and printing -------------------------------------------------

def evaluate(arena: Arena, expr: Expr, env: Mapping[str, int] | None = None) -> int:
    env = dict(env or {})
    if isinstance(expr, BraceGame):
        return arena.intern([evaluate(arena, e, env) for e in expr.left],
                            [evaluate(arena, e, env) for e in expr.right])
    if isinstance(expr, Name):
        if expr.name in env:
            return env[expr.name]
        try:
            return arena.constant(expr.name)
        except KeyError:
            raise ParseError(f"unbound name {expr.name!r}", max(expr.pos, 0)) from None
    if isinstance(expr, IntLit):
        return arena.integer(expr.value)
    if isinstance(expr, Half):
        return arena.constant("1/2")
    if isinstance(expr, Neg):
        return arena.neg(evaluate(arena, expr.operand, env))
    if isinstance(expr, Let):
        env[expr.name] = evaluate(arena, expr.value, env)
        return evaluate(arena, expr.body, env)
    lhs = evaluate(arena, expr.lhs, env)  # type: ignore[attr-defined]
    rhs = evaluate(arena, expr.rhs, env)  # type: ignore[attr-defined]
    if isinstance(expr, Add):
        return arena.add(lhs, rhs)
    if isinstance(expr, Sub):
        return arena.sub(lhs, rhs)
    if isinstance(expr, Mul):
        return arena.product(lhs, rhs)
    raise TypeError(f"not an expression: {expr!r}")


def eval_text(arena: Arena, text: str) -> int:
    return evaluate(arena, parse(text))


def format_game(arena: Arena, g: int) -> str:
    """Fully braced form with options in id order, e.g. ``{{|}|{|}}`` for ``*``."""
    memo: dict[int, str] = {}
    order = sorted(arena.subpositions(g))
    for x in order:  # children always have smaller ids
        memo[x] = ("{" + ",".join(memo[y] for y in arena.left[x]) + "|"
                   + ",".join(memo[y] for y in arena.right[x]) + "}")
    return memo[g]


_PREC = {Add: 1, Sub: 1, Mul: 2}


def format_expr(e: Expr) -> str:
    """Render an expression with minimal parentheses; products print as ``·``."""
    return _fmt(e, 0)


def _fmt(e: Expr, ctx: int) -> str:
    if isinstance(e, Name):
        return e.name
    if isinstance(e, IntLit):
        return str(e.value)
    if isinstance(e, Half):
        return "1/2"
    if isinstance(e, BraceGame):
        return ("{" + ",".join(_fmt(x, 0) for x in e.left) + "|"
                + ",".join(_fmt(x, 0) for x in e.right) + "}")
    if isinstance(e, Neg):
        return "-" + _fmt(e.operand, 3)
    if isinstance(e, Let):
        s = f"let {e.name} = {_fmt(e.value, 0)} in {_fmt(e.body, 0)}"
        return f"({s})" if ctx else s
    prec = _PREC[type(e)]
    sym = {Add: " + ", Sub: " - ", Mul: "·"}[type(e)]
    s = _fmt(e.lhs, prec) + sym + _fmt(e.rhs, prec + 1)  # type: ignore[attr-defined]
    return f"({s})" if prec < ctx else s


def iter_names(e: Expr) -> Iterator[str]:
    if isinstance(e, Name):
        yield e.name
    for child in getattr(e, "left", ()) + getattr(e, "right", ()):
        yield from iter_names(child)
    for attr in ("operand", "lhs", "rhs", "value", "body"):
        child = getattr(e, attr, None)
        if isinstance(child, Expr):
            yield from iter_names(child)
