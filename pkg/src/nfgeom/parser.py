"""Tokenizer and parsers for scalar expressions, index expressions and
DSL statements.

Scalar grammar (precedence climbing, ``^`` right associative, binding tighter
than unary minus so ``-x^2`` is ``-(x^2)``)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

Every exponent must evaluate to a rational constant; ``u^(p/q)`` with q > 1
declares the radical atom ``u^(1/q)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .tensor import DOWN, UP, IndexExpression, IndexTerm, TensorRef


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0, expected: str | None = None):
        self.msg, self.line, self.col, self.expected = msg, line, col, expected
        where = f"line {line}, col {col}: " if line else ""
        hint = f" (expected {expected})" if expected else ""
        super().__init__(f"{where}{msg}{hint}")


# -- tokens ---------------------------------------------------------------------------
_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>:=|<>|!=|[-+*/^()\[\],=;])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str   # num | name | op | end
    text: str
    col: int


def tokenize(text: str, line: int = 0) -> list[Token]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos + 1))
        pos = m.end()
    out.append(Token("end", "", len(text) + 1))
    return out


class Cursor:
    def __init__(self, tokens: list[Token], line: int = 0):
        self.toks, self.i, self.line = tokens, 0, line

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "name") and self.tok.text == text

    def next(self) -> Token:
        t = self.tok
        if t.kind != "end":
            self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"unexpected {self.describe()}", repr(text))
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            self.fail(f"unexpected {self.describe()}", what)
        return self.next()

    def describe(self) -> str:
        return "end of line" if self.tok.kind == "end" else repr(self.tok.text)

    def fail(self, msg: str, expected: str | None = None):
        raise ParseError(msg, self.line, self.tok.col, expected)


# -- scalar AST ----------------------------------------------------------------------------
@dataclass(frozen=True)
class Num:
    value: Fraction

    def render(self) -> str:
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"({v.numerator}/{v.denominator})"


@dataclass(frozen=True)
class Name:
    name: str

    def render(self) -> str:
        return self.name


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object

    def render(self) -> str:
        return f"{self.fn}({self.arg.render()})"


@dataclass(frozen=True)
class Neg:
    arg: object

    def render(self) -> str:
        return "-" + _wrap(self.arg, _prec(self.arg) < 3)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object

    def render(self) -> str:
        p = _PREC[self.op]
        if self.op == "^":
            left, right = _prec(self.left) <= p, _prec(self.right) < 5
        else:
            left, right = _prec(self.left) < p, _prec(self.right) <= p
        return (f"{_wrap(self.left, left)}{_SPACED.get(self.op, self.op)}"
                f"{_wrap(self.right, right)}")


_SPACED = {"+": " + ", "-": " - "}
FUNCTIONS = ("exp", "sqrt")


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    return 3 if isinstance(node, Neg) else 5


def _wrap(node, paren: bool) -> str:
    s = node.render()
    return f"({s})" if paren else s


def parse_expr(text: str, line: int = 0):
    cur = Cursor(tokenize(text, line), line)
    node = expr(cur)
    if cur.tok.kind != "end":
        cur.fail(f"unexpected {cur.describe()}", "operator or end of expression")
    return node


def expr(cur: Cursor):
    node = term(cur)
    while cur.at("+") or cur.at("-"):
        op = cur.next().text
        node = BinOp(op, node, term(cur))
    return node


def term(cur: Cursor):
    node = unary(cur)
    while cur.at("*") or cur.at("/"):
        op = cur.next().text
        node = BinOp(op, node, unary(cur))
    return node


def unary(cur: Cursor):
    if cur.at("-"):
        cur.next()
        return Neg(unary(cur))
    if cur.at("+"):
        cur.next()
        return unary(cur)
    return power(cur)


def power(cur: Cursor):
    base = atom(cur)
    if cur.at("^"):
        cur.next()
        return BinOp("^", base, unary(cur))
    return base


def atom(cur: Cursor):
    t = cur.tok
    if t.kind == "num":
        cur.next()
        v = Fraction(t.text)
        if v.denominator == 1:
            return Num(v)
        return BinOp("/", Num(Fraction(v.numerator)), Num(Fraction(v.denominator)))
    if t.kind == "name":
        cur.next()
        if cur.at("("):
            if t.text not in FUNCTIONS:
                raise ParseError(f"unknown function {t.text!r}", cur.line, t.col, " or ".join(FUNCTIONS))
            cur.next()
            arg = expr(cur)
            cur.expect(")")
            return Call(t.text, arg)
        return Name(t.text)
    if cur.at("("):
        cur.next()
        node = expr(cur)
        cur.expect(")")
        return node
    cur.fail(f"unexpected {cur.describe()}", "number, name or '('")


def names_in(node) -> set[str]:
    if isinstance(node, Name):
        return {node.name}
    if isinstance(node, (Call, Neg)):
        return names_in(node.arg)
    if isinstance(node, BinOp):
        return names_in(node.left) | names_in(node.right)
    return set()


def evaluate(node, env: Mapping, const: Callable, funcs: Mapping[str, Callable],
             rpow: Callable | None = None):
    """Evaluate with duck-typed values.

    ``env`` maps names to values, ``const`` builds a value from a Fraction,
    ``funcs`` maps exp/sqrt to callables, and ``rpow(base, Fraction)`` handles
    non-integer exponents.
    """
    def go(n):
        if isinstance(n, Num):
            return const(n.value)
        if isinstance(n, Name):
            if n.name not in env:
                raise KeyError(n.name)
            return env[n.name]
        if isinstance(n, Call):
            return funcs[n.fn](go(n.arg))
        if isinstance(n, Neg):
            return -go(n.arg)
        a = go(n.left)
        if n.op == "^":
            k = constant_value(n.right)
            if k is None:
                raise ValueError("exponent must be a rational constant")
            if k.denominator == 1:
                return a ** int(k)
            if rpow is None:
                raise ValueError("fractional exponent not allowed here")
            return rpow(a, k)
        b = go(n.right)
        if n.op == "+":
            return a + b
        if n.op == "-":
            return a - b
        if n.op == "*":
            return a * b
        return a / b
    return go(node)


def constant_value(node) -> Fraction | None:
    """Value of a name-free, function-free subtree, else None."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Neg):
        v = constant_value(node.arg)
        return None if v is None else -v
    if isinstance(node, BinOp):
        a, b = constant_value(node.left), constant_value(node.right)
        if a is None or b is None:
            return None
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            return None if b == 0 else a / b
        if b.denominator == 1 and (a != 0 or b >= 0):
            return a ** int(b)
    return None


# -- index expressions --------------------------------------------------------------------------
DERIVATIVES = {"tdiff": "X", "tddiff": "Y", "Hdiff": "X"}


@dataclass(frozen=True)
class DerivRef:
    """``tdiff(N[i,-j], X[k])`` and friends: a tensor reference with one extra
    covariant slot."""

    op: str
    base: TensorRef
    letter: str

    @property
    def name(self) -> str:
        sig = ",".join("+" if v == UP else "-" for _, v in self.base.indices)
        return f"{self.op}({self.base.name}[{sig}])"

    @property
    def indices(self) -> tuple[tuple[str, int], ...]:
        return self.base.indices + ((self.letter, DOWN),)

    def render(self) -> str:
        return f"{self.op}({self.base.render()}, {DERIVATIVES[self.op]}[{self.letter}])"


def parse_index_list(cur: Cursor) -> tuple[tuple[str, int], ...]:
    cur.expect("[")
    out = []
    while True:
        var = UP
        if cur.at("-"):
            cur.next()
            var = DOWN
        t = cur.expect_kind("name", "index letter")
        out.append((t.text, var))
        if cur.at(","):
            cur.next()
            continue
        cur.expect("]")
        return tuple(out)


def parse_tensor_ref(cur: Cursor) -> TensorRef:
    name = cur.expect_kind("name", "tensor name").text
    return TensorRef(name, parse_index_list(cur))


def _factor(cur: Cursor):
    t = cur.tok
    if t.kind == "name" and t.text in DERIVATIVES and cur.peek().text == "(":
        cur.next()
        cur.expect("(")
        base = parse_tensor_ref(cur)
        cur.expect(",")
        cur.expect(DERIVATIVES[t.text])
        cur.expect("[")
        letter = cur.expect_kind("name", "index letter").text
        cur.expect("]")
        cur.expect(")")
        return DerivRef(t.text, base, letter)
    return parse_tensor_ref(cur)


def _coef(cur: Cursor) -> Fraction | None:
    """NUMBER, NUMBER/NUMBER or (NUMBER/NUMBER); None when absent."""
    if cur.at("("):
        cur.next()
        neg = False
        if cur.at("-"):
            cur.next()
            neg = True
        c = Fraction(cur.expect_kind("num", "number").text)
        if cur.at("/"):
            cur.next()
            c /= Fraction(cur.expect_kind("num", "number").text)
        cur.expect(")")
        return -c if neg else c
    if cur.tok.kind == "num":
        c = Fraction(cur.next().text)
        if cur.at("/") and cur.peek().kind == "num":
            cur.next()
            c /= Fraction(cur.next().text)
        return c
    return None


def parse_index_expression(cur: Cursor, stop: tuple[str, ...] = ()) -> IndexExpression:
    terms = []
    sign = Fraction(1)
    if cur.at("-"):
        cur.next()
        sign = Fraction(-1)
    elif cur.at("+"):
        cur.next()
    while True:
        coef = sign
        factors = []
        c = _coef(cur)
        if c is not None:
            coef *= c
            if cur.at("*"):
                cur.next()
                factors.append(_factor(cur))
        else:
            factors.append(_factor(cur))
        while cur.at("*"):
            cur.next()
            c = _coef(cur)
            if c is not None:
                coef *= c
            else:
                factors.append(_factor(cur))
        terms.append(IndexTerm(coef, tuple(factors)))
        if cur.at("+") or cur.at("-"):
            sign = Fraction(1 if cur.next().text == "+" else -1)
            continue
        if cur.tok.kind == "end" or any(cur.at(s) for s in stop):
            return IndexExpression(tuple(terms))
        cur.fail(f"unexpected {cur.describe()}", "'+', '-', '*' or end of line")
