"""Expression trees for smooth one-variable functions.

Grammar (EBNF):

    expr     = term , { ("+" | "-") , term } ;
    term     = unary , { ("*" | "/") , unary } ;
    unary    = "-" , unary | power ;
    power    = atom , { "^" , integer } ;
    atom     = number | variable | function , "(" , expr , ")" | "(" , expr , ")" ;
    function = "sin" | "cos" | "sqrt" | "exp" ;
    number   = digits , [ "." , digits ] , [ ("e"|"E") , ["+"|"-"] , digits ] ;
    integer  = [ "-" ] , digits ;

The single variable defaults to ``s``. Exponents must be integer literals.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .errors import DomainError, ExprSyntaxError

_FUNCTIONS = ("sin", "cos", "sqrt", "exp")


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: object
    right: object


@dataclass(frozen=True)
class IntPow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Call:
    fn: str  # one of _FUNCTIONS
    arg: object


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ExprSyntaxError(f"unexpected character {stripped[0]!r}", at)
        if m.group("num") is not None:
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("ident") is not None:
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, var):
        self.text = text
        self.var = var
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ExprSyntaxError(f"expected {op!r}", pos)
        return self.advance()

    def parse(self):
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected trailing input {text!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = BinOp(text, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = BinOp(text, node, self.unary())
            else:
                return node

    def unary(self):
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text == "^":
                self.advance()
                node = IntPow(node, self.integer_literal())
            else:
                return node

    def integer_literal(self):
        sign = 1
        kind, text, pos = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            sign = -1
            kind, text, pos = self.peek()
        if kind != "num":
            raise ExprSyntaxError("expected integer exponent", pos)
        if not text.isdigit():
            raise ExprSyntaxError(f"non-integer exponent {text!r}", pos)
        self.advance()
        return sign * int(text)

    def atom(self):
        kind, text, pos = self.peek()
        if kind == "num":
            self.advance()
            return Const(float(text))
        if kind == "ident":
            self.advance()
            if text == self.var:
                return Var()
            if text in _FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            raise ExprSyntaxError(f"unknown identifier {text!r}", pos)
        if kind == "op" and text == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(f"expected a value, got {text!r}" if text else "unexpected end of input", pos)


def _evaluate(node, x):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_evaluate(node.arg, x)
    if isinstance(node, BinOp):
        a = _evaluate(node.left, x)
        b = _evaluate(node.right, x)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if abs(b) < 1e-300:
            raise DomainError(f"division by zero at x = {x!r}")
        return a / b
    if isinstance(node, IntPow):
        base = _evaluate(node.base, x)
        if node.exponent < 0 and base == 0.0:
            raise DomainError(f"zero raised to negative power at x = {x!r}")
        return base ** node.exponent
    if isinstance(node, Call):
        v = _evaluate(node.arg, x)
        if node.fn == "sin":
            return math.sin(v)
        if node.fn == "cos":
            return math.cos(v)
        if node.fn == "exp":
            return math.exp(v)
        if v < 0.0:
            raise DomainError(f"sqrt of negative value {v!r} at x = {x!r}")
        return math.sqrt(v)
    raise TypeError(f"unknown node {node!r}")


# Precedence levels used by the printer; parentheses are emitted whenever a
# child's level is below what its position requires, so printing and
# reparsing reproduces the tree exactly.
_LEVEL_ADD, _LEVEL_MUL, _LEVEL_NEG, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def _level(node):
    if isinstance(node, (Const, Var, Call)):
        return _LEVEL_ATOM
    if isinstance(node, IntPow):
        return _LEVEL_POW
    if isinstance(node, Neg):
        return _LEVEL_NEG
    return _LEVEL_ADD if node.op in "+-" else _LEVEL_MUL


def _print(node, min_level, var):
    if isinstance(node, Const):
        v = node.value
        if v < 0:
            return f"(-{-v!r})"
        return repr(v)
    if isinstance(node, Var):
        return var
    if isinstance(node, Call):
        return f"{node.fn}({_print(node.arg, _LEVEL_ADD, var)})"
    if isinstance(node, IntPow):
        text = f"{_print(node.base, _LEVEL_ATOM, var)}^{node.exponent}"
    elif isinstance(node, Neg):
        text = f"-{_print(node.arg, _LEVEL_NEG, var)}"
    elif node.op in "+-":
        text = f"{_print(node.left, _LEVEL_ADD, var)} {node.op} {_print(node.right, _LEVEL_MUL, var)}"
    else:
        text = f"{_print(node.left, _LEVEL_MUL, var)} {node.op} {_print(node.right, _LEVEL_NEG, var)}"
    if _level(node) < min_level:
        return f"({text})"
    return text


@dataclass(frozen=True)
class SmoothFn:
    """A smooth function of one real variable, held as an expression tree."""

    root: object
    source_text: str = field(compare=False, default="")
    var: str = field(compare=False, default="s")

    def __call__(self, x):
        return _evaluate(self.root, float(x))

    def to_source(self):
        return _print(self.root, 0, self.var)

    def jet(self, base, order):
        from .jets import jet_eval

        return jet_eval(self, base, order)

    def _combine(self, other, op):
        if isinstance(other, (int, float)):
            other = SmoothFn(Const(float(other)), var=self.var)
        node = BinOp(op, self.root, other.root)
        return SmoothFn(node, _print(node, 0, self.var), self.var)

    def __add__(self, other):
        return self._combine(other, "+")

    def __radd__(self, other):
        return SmoothFn(Const(float(other)), var=self.var)._combine(self, "+")

    def __sub__(self, other):
        return self._combine(other, "-")

    def __rsub__(self, other):
        return SmoothFn(Const(float(other)), var=self.var)._combine(self, "-")

    def __mul__(self, other):
        return self._combine(other, "*")

    def __rmul__(self, other):
        return SmoothFn(Const(float(other)), var=self.var)._combine(self, "*")

    def __truediv__(self, other):
        return self._combine(other, "/")

    def __neg__(self):
        node = Neg(self.root)
        return SmoothFn(node, _print(node, 0, self.var), self.var)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        node = IntPow(self.root, n)
        return SmoothFn(node, _print(node, 0, self.var), self.var)


def parse_expr(text, var="s"):
    """Parse ``text`` into a SmoothFn over the variable ``var``."""
    root = _Parser(text, var).parse()
    return SmoothFn(root, text, var)
