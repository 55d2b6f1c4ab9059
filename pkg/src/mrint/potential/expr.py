"""Expression trees for rational potentials in q1..qN.

Grammar (no implicit multiplication)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" exponent)?
    exponent := ["-"] INT | "(" ["-"] INT ")"
    atom   := NUMBER | "q" INT | "(" expr ")"

Numbers are integers or decimals, converted exactly; ``a/b`` is ordinary
division.  Nodes are immutable and hashable so derivatives can be cached.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} at column {position + 1}: {text!r}"
        super().__init__(message)


class PoleError(ZeroDivisionError):
    pass


# -- nodes ------------------------------------------------------------------


class Expr:
    __slots__ = ()

    def __add__(self, other: "Expr") -> "Expr":
        return add(self, other)

    def __mul__(self, other: "Expr") -> "Expr":
        return mul(self, other)

    def __neg__(self) -> "Expr":
        return mul(Const(Fraction(-1)), self)


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Var(Expr):
    index: int  # 1-based

    def __str__(self) -> str:
        return f"q{self.index}"


@dataclass(frozen=True)
class Add(Expr):
    terms: tuple[Expr, ...]

    def __str__(self) -> str:
        return "(" + " + ".join(map(str, self.terms)) + ")"


@dataclass(frozen=True)
class Mul(Expr):
    factors: tuple[Expr, ...]

    def __str__(self) -> str:
        return "*".join(map(str, self.factors))


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def __str__(self) -> str:
        b = str(self.base)
        if not isinstance(self.base, (Var, Add)):
            b = f"({b})"
        return f"{b}^{self.exponent}" if self.exponent >= 0 else f"{b}^({self.exponent})"


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def const(v) -> Const:
    return Const(Fraction(v))


def add(*items: Expr) -> Expr:
    terms: list[Expr] = []
    c = Fraction(0)
    for e in items:
        for t in e.terms if isinstance(e, Add) else (e,):
            if isinstance(t, Const):
                c += t.value
            else:
                terms.append(t)
    if c:
        terms.append(Const(c))
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    return Add(tuple(terms))


def mul(*items: Expr) -> Expr:
    factors: list[Expr] = []
    c = Fraction(1)
    for e in items:
        for f in e.factors if isinstance(e, Mul) else (e,):
            if isinstance(f, Const):
                c *= f.value
            else:
                factors.append(f)
    if not c:
        return ZERO
    if c != 1:
        factors.insert(0, Const(c))
    if not factors:
        return ONE
    if len(factors) == 1:
        return factors[0]
    return Mul(tuple(factors))


def power(base: Expr, n: int) -> Expr:
    if n == 0:
        return ONE
    if n == 1:
        return base
    if isinstance(base, Const):
        if not base.value and n < 0:
            raise PoleError("0 raised to a negative power")
        return Const(base.value**n)
    if isinstance(base, Pow):
        return power(base.base, base.exponent * n)
    return Pow(base, n)


def dimension(e: Expr) -> int:
    if isinstance(e, Var):
        return e.index
    if isinstance(e, Add):
        return max(map(dimension, e.terms))
    if isinstance(e, Mul):
        return max(map(dimension, e.factors))
    if isinstance(e, Pow):
        return dimension(e.base)
    return 0


# -- differentiation --------------------------------------------------------


@lru_cache(maxsize=65536)
def diff(e: Expr, var: int) -> Expr:
    """Partial derivative with respect to ``q_var``."""
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.index == var else ZERO
    if isinstance(e, Add):
        return add(*(diff(t, var) for t in e.terms))
    if isinstance(e, Mul):
        parts = []
        for n, f in enumerate(e.factors):
            df = diff(f, var)
            if df != ZERO:
                parts.append(mul(*e.factors[:n], df, *e.factors[n + 1 :]))
        return add(*parts) if parts else ZERO
    if isinstance(e, Pow):
        db = diff(e.base, var)
        if db == ZERO:
            return ZERO
        return mul(const(e.exponent), power(e.base, e.exponent - 1), db)
    raise TypeError(type(e))


@lru_cache(maxsize=65536)
def partial(e: Expr, indices: tuple[int, ...]) -> Expr:
    """Mixed partial over a sorted tuple of 1-based variable indices."""
    if not indices:
        return e
    return diff(partial(e, indices[:-1]), indices[-1])


# -- evaluation -------------------------------------------------------------

Number = Union[Fraction, complex, object]


def evaluate(e: Expr, point, memo: dict | None = None):
    """Value at ``point`` (sequence indexed from 0 for q1).

    Arithmetic follows the point's number type: Fractions and Gaussian
    rationals stay exact, floats and complex stay floating.
    """
    memo = {} if memo is None else memo
    if e in memo:
        return memo[e]
    if isinstance(e, Const):
        v = e.value
    elif isinstance(e, Var):
        v = point[e.index - 1]
    elif isinstance(e, Add):
        v = evaluate(e.terms[0], point, memo)
        for t in e.terms[1:]:
            v = v + evaluate(t, point, memo)
    elif isinstance(e, Mul):
        v = evaluate(e.factors[0], point, memo)
        for f in e.factors[1:]:
            v = v * evaluate(f, point, memo)
    elif isinstance(e, Pow):
        b = evaluate(e.base, point, memo)
        if e.exponent < 0:
            if b == 0:
                raise PoleError(f"pole: {e.base} vanishes")
            v = 1 / b ** (-e.exponent)
        else:
            v = b**e.exponent
    else:
        raise TypeError(type(e))
    memo[e] = v
    return v


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)|(?P<var>q\d+)|(?P<op>[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError("unexpected character", text, col)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op: str) -> None:
        kind, val, pos = self.take()
        if val != op:
            raise ParseError(f"expected {op!r}", self.text, pos)

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", self.text, pos)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            t = self.term()
            e = add(e, t if op == "+" else -t)
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            f = self.unary()
            e = mul(e, f) if op == "*" else mul(e, power(f, -1))
        return e

    def unary(self) -> Expr:
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[1] != "^":
            return base
        self.take()
        return power(base, self.exponent())

    def exponent(self) -> int:
        paren = self.peek()[1] == "("
        if paren:
            self.take()
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        kind, val, pos = self.take()
        if kind != "num" or not val.isdigit():
            raise ParseError("exponent must be an integer", self.text, pos)
        if paren:
            self.expect(")")
        return sign * int(val)

    def atom(self) -> Expr:
        kind, val, pos = self.take()
        if kind == "num":
            nxt = self.peek()
            if nxt[0] in ("var", "num") or nxt[1] == "(":
                raise ParseError("implicit multiplication is not allowed", self.text, nxt[2])
            return Const(Fraction(val))
        if kind == "var":
            n = int(val[1:])
            if n < 1:
                raise ParseError("variables are numbered from q1", self.text, pos)
            return Var(n)
        if val == "(":
            e = self.expr()
            self.expect(")")
            return e
        what = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {what}", self.text, pos)


def max_variable_index(text: str) -> int:
    """Highest ``qN`` mentioned in the text, even if it cancels."""
    return max((int(m) for m in re.findall(r"q(\d+)", text)), default=0)


def parse_expression(text: str) -> Expr:
    try:
        return _Parser(text).parse()
    except PoleError as exc:
        raise ParseError(str(exc)) from None
