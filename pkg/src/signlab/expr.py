"""A small expression language for user-supplied entrywise functions.

Grammar (standard precedence, left-associative binary operators)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | "+" unary | primary
    primary := NUMBER ["i" | "j"] | "i" | "j" | "z"
             | NAME "(" expr ("," expr)* ")" | "(" expr ")"

with NAME one of ``conj abs re im sgn pow``.  ``sgn`` is the sign of the
real part (0 maps to 0); ``pow(x, p)`` raises ``x`` to a real power ``p``.
Evaluation is vectorized over numpy arrays of complex numbers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import ParseError

FUNCTIONS = {"conj": 1, "abs": 1, "re": 1, "im": 1, "sgn": 1, "pow": 2}


@dataclass(frozen=True)
class Num:
    value: complex


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?(?:[ij](?![A-Za-z0-9_]))?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/(),])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


_PRIMARY_START = ("number", "z", "i", "(", "-", "+") + tuple(FUNCTIONS)
_AFTER_OPERAND = ("+", "-", "*", "/")


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.k = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.k]

    def advance(self) -> Token:
        t = self.tokens[self.k]
        self.k += 1
        return t

    def expect(self, text: str, context: tuple = ()):
        if self.tok.text != text or self.tok.kind != "op":
            raise ParseError(f"unexpected {self._describe()}", self.tok.pos, (text,) + context)
        return self.advance()

    def _describe(self) -> str:
        return "end of input" if self.tok.kind == "end" else f"token {self.tok.text!r}"

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self._describe()}", self.tok.pos, _AFTER_OPERAND + ("end",))
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        if self.tok.kind == "op" and self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.primary()

    def primary(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            if t.text[-1] in "ij":
                return Num(complex(0.0, float(t.text[:-1])))
            return Num(complex(float(t.text), 0.0))
        if t.kind == "name":
            if t.text in ("i", "j"):
                self.advance()
                return Num(1j)
            if t.text == "z":
                self.advance()
                return Var()
            if t.text in FUNCTIONS:
                self.advance()
                self.expect("(")
                args = [self.expr()]
                while self.tok.kind == "op" and self.tok.text == ",":
                    self.advance()
                    args.append(self.expr())
                if len(args) != FUNCTIONS[t.text]:
                    raise ParseError(f"{t.text} takes {FUNCTIONS[t.text]} argument(s), got {len(args)}",
                                     t.pos)
                self.expect(")", (",",) + _AFTER_OPERAND)
                return Call(t.text, tuple(args))
            raise ParseError(f"unknown name {t.text!r}", t.pos, _PRIMARY_START)
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")", _AFTER_OPERAND)
            return node
        raise ParseError(f"unexpected {self._describe()}", t.pos, _PRIMARY_START)


def parse(text: str):
    """Parse ``text`` into an AST; raises :class:`ParseError` on bad input."""
    return _Parser(text).parse()


def _fmt_real(x: float) -> str:
    return repr(float(x))


def to_text(node) -> str:
    """Fully parenthesized rendering that parses back to an equal AST."""
    if isinstance(node, Num):
        v = node.value
        if v.imag == 0 and v.real >= 0:
            return _fmt_real(v.real)
        if v.real == 0 and v.imag >= 0:
            return _fmt_real(v.imag) + "i"
        return f"({_fmt_real(v.real)} + {_fmt_real(v.imag)}i)"
    if isinstance(node, Var):
        return "z"
    if isinstance(node, Neg):
        return f"(-{to_text(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({', '.join(to_text(a) for a in node.args)})"
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(node, z) -> np.ndarray:
    """Evaluate ``node`` at every element of ``z``; non-finite results are left in place."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        return _eval(node, z)


def _eval(node, z):
    if isinstance(node, Num):
        return np.full(z.shape, node.value, dtype=complex)
    if isinstance(node, Var):
        return z
    if isinstance(node, Neg):
        return -_eval(node.operand, z)
    if isinstance(node, BinOp):
        a, b = _eval(node.left, z), _eval(node.right, z)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    if isinstance(node, Call):
        args = [_eval(a, z) for a in node.args]
        x = args[0]
        if node.name == "conj":
            return np.conj(x)
        if node.name == "abs":
            return np.abs(x).astype(complex)
        if node.name == "re":
            return x.real.astype(complex)
        if node.name == "im":
            return x.imag.astype(complex)
        if node.name == "sgn":
            return np.sign(x.real).astype(complex)
        if node.name == "pow":
            return _pow(x, args[1])
    raise TypeError(f"not an expression node: {node!r}")


def _pow(x, p):
    """Real power; nonnegative real bases use the real power (0**p = 0 for p > 0)."""
    out = np.full(x.shape, np.nan + 0j)
    p_real = p.real
    real_p = p.imag == 0
    nonneg = (x.imag == 0) & (x.real >= 0) & real_p
    out[nonneg] = np.power(x.real[nonneg], p_real[nonneg])
    other = ~nonneg & real_p
    out[other] = np.power(x[other], p_real[other])
    return out
