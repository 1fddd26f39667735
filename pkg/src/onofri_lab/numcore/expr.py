"""A small recursive-descent parser for one-variable test functions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?          # right associative
    atom   := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

Functions: exp, log, cosh, sinh, tanh, sqrt.  Constants: pi, e.  Any other
name is the variable; an expression may use only one.
"""

import math
import re
from dataclasses import dataclass

import numpy as np

from ..errors import ExprDomainError, ExprSyntaxError

FUNCTIONS = {
    "exp": np.exp,
    "log": np.log,
    "cosh": np.cosh,
    "sinh": np.sinh,
    "tanh": np.tanh,
    "sqrt": np.sqrt,
}
CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


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
    func: str
    arg: object


def _tokenize(src):
    tokens = []
    pos = 0
    src = src.rstrip()
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {src[pos:].lstrip()[:1]!r}",
                                  pos + len(src[pos:]) - len(src[pos:].lstrip()))
        start = m.start(m.lastindex)
        number, name, op = m.groups()
        if number is not None:
            tokens.append(("num", float(number), start))
        elif name is not None:
            tokens.append(("name", name, start))
        else:
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    tokens.append(("end", None, len(src)))
    return tokens


class _Parser:
    def __init__(self, src):
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ExprSyntaxError(f"expected {op!r}", pos)

    def parse(self):
        node = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError("trailing input", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            operand = self.unary()
            return Neg(operand) if val == "-" else operand
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Num(val)
        if kind == "name":
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            if val in CONSTANTS:
                return Num(CONSTANTS[val])
            return Var(val)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError("expected a number, name or '('" if kind != "end"
                              else "unexpected end of input", pos)


def variables(ast):
    if isinstance(ast, Var):
        return {ast.name}
    if isinstance(ast, Num):
        return set()
    if isinstance(ast, Neg):
        return variables(ast.operand)
    if isinstance(ast, Call):
        return variables(ast.arg)
    return variables(ast.left) | variables(ast.right)


def parse_expr(src):
    if not isinstance(src, str) or not src.strip():
        raise ExprSyntaxError("empty expression", 0)
    ast = _Parser(src).parse()
    names = variables(ast)
    if len(names) > 1:
        raise ExprSyntaxError(f"only one variable allowed, found {sorted(names)}", 0)
    return ast


def to_source(ast):
    """Render an AST back to parseable text (binary nodes fully parenthesised)."""
    if isinstance(ast, Num):
        return repr(float(ast.value))
    if isinstance(ast, Var):
        return ast.name
    if isinstance(ast, Neg):
        return f"(-{to_source(ast.operand)})"
    if isinstance(ast, Call):
        return f"{ast.func}({to_source(ast.arg)})"
    return f"({to_source(ast.left)} {ast.op} {to_source(ast.right)})"


def _eval(ast, x):
    if isinstance(ast, Num):
        return np.full_like(x, ast.value)
    if isinstance(ast, Var):
        return x
    if isinstance(ast, Neg):
        return -_eval(ast.operand, x)
    if isinstance(ast, Call):
        arg = _eval(ast.arg, x)
        if ast.func == "log" and np.any(arg <= 0):
            raise ExprDomainError("log of a non-positive number")
        if ast.func == "sqrt" and np.any(arg < 0):
            raise ExprDomainError("sqrt of a negative number")
        return FUNCTIONS[ast.func](arg)
    a = _eval(ast.left, x)
    b = _eval(ast.right, x)
    if ast.op == "+":
        return a + b
    if ast.op == "-":
        return a - b
    if ast.op == "*":
        return a * b
    if ast.op == "/":
        if np.any(b == 0):
            raise ExprDomainError("division by zero")
        return a / b
    if np.any((a < 0) & (b != np.round(b))):
        raise ExprDomainError("negative base raised to a non-integer power")
    if np.any((a == 0) & (b < 0)):
        raise ExprDomainError("zero raised to a negative power")
    return np.power(a, b)


def eval_expr(ast, x):
    """Evaluate at a scalar or an array; domain problems raise ExprDomainError."""
    arr = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        out = _eval(ast, np.atleast_1d(arr).copy())
    if not np.all(np.isfinite(out)):
        raise ExprDomainError("expression evaluated to a non-finite value")
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def compile_expr(src):
    """Parse once and return a vectorised callable."""
    ast = parse_expr(src)
    return lambda x: eval_expr(ast, x)
