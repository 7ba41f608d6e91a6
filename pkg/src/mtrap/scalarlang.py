"""A small expression language for scalar fields over chart coordinates.

Grammar, lowest precedence first::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' exponent)?
    exponent:= '-'? INT | '(' '-'? INT ')'
    atom    := NUMBER | NAME | FUNC '(' expr ')' | '(' expr ')'

``FUNC`` is one of sin, cos, exp.  Exponents are integers so that every
derivative exists wherever the base is nonzero.  Evaluation works on plain
arrays and on :class:`~mtrap.taylor.Taylor` objects alike; the latter gives
exact partial derivatives through the usual chain and product rules.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from . import taylor as tl
from .errors import EvalDomain, ExprSyntaxError, UnknownSymbol

FUNCTIONS = ("sin", "cos", "exp")
BUILTIN_CONSTANTS = {"pi": math.pi}


# AST -------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str
    value: float


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Const, Neg, BinOp, Pow, Call]


@dataclass(frozen=True)
class FieldExpr:
    root: Node
    variables: tuple[str, ...]
    source: str = ""

    def __str__(self) -> str:
        return to_source(self.root)


# lexer -----------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    offset: int  # byte offset


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    # char index -> byte offset
    byte_at = [0]
    for ch in src:
        byte_at.append(byte_at[-1] + len(ch.encode("utf-8")))
    while True:
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == m.start() or m.lastgroup is None:
            rest = src[pos:]
            stripped = len(rest) - len(rest.lstrip())
            at = pos + stripped
            if at >= len(src):
                toks.append(_Tok("end", "", byte_at[len(src)]))
                return toks
            raise ExprSyntaxError(byte_at[at], "token", src[at])
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), byte_at[m.start(kind)]))
        pos = m.end()


# parser ----------------------------------------------------------------------

class _Parser:
    def __init__(self, src: str, variables, constants):
        self.toks = _tokenize(src)
        self.i = 0
        self.variables = variables
        self.constants = constants

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text or self.tok.kind == "end":
            raise ExprSyntaxError(self.tok.offset, f"'{text}'", self.tok.text)
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(self.tok.offset, "end of input", self.tok.text)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            return Pow(base, self.exponent())
        return base

    def _int(self) -> int:
        sign = 1
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            sign = -1
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            raise ExprSyntaxError(t.offset, "integer exponent", t.text)
        self.advance()
        return sign * int(t.text)

    def exponent(self) -> int:
        if self.tok.kind == "op" and self.tok.text == "(":
            self.advance()
            k = self._int()
            self.expect(")")
            return k
        return self._int()

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(float(t.text))
        if t.kind == "name":
            self.advance()
            if t.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(t.text, arg)
            if self.variables is not None and t.text in self.variables:
                return Var(t.text)
            if t.text in self.constants:
                return Const(t.text, float(self.constants[t.text]))
            if self.variables is None:
                return Var(t.text)
            raise UnknownSymbol(t.text, t.offset)
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(t.offset, "expression", t.text)


def parse(src: str, variables=None, constants: Mapping[str, float] | None = None) -> FieldExpr:
    """Parse ``src``; names outside ``variables`` and the constants raise UnknownSymbol.

    With ``variables=None`` any free name is accepted as a variable.
    """
    consts = dict(BUILTIN_CONSTANTS)
    if constants:
        consts.update(constants)
    node = _Parser(src, None if variables is None else tuple(variables), consts).parse()
    if variables is None:
        variables = tuple(sorted(free_variables(node)))
    return FieldExpr(node, tuple(variables), src)


def free_variables(node: Node) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, (Num, Const)):
        return set()
    if isinstance(node, Neg):
        return free_variables(node.operand)
    if isinstance(node, BinOp):
        return free_variables(node.left) | free_variables(node.right)
    if isinstance(node, Pow):
        return free_variables(node.base)
    return free_variables(node.arg)


# printing --------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def _fmt_num(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def to_source(node: Node) -> str:
    """Render with the fewest parentheses that parse back to the same tree."""
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, (Var, Const)):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, Neg):
        inner = to_source(node.operand)
        return "-" + (f"({inner})" if _prec(node.operand) < 3 else inner)
    if isinstance(node, Pow):
        base = to_source(node.base)
        if _prec(node.base) <= 4:
            base = f"({base})"
        exp = str(node.exponent) if node.exponent >= 0 else f"({node.exponent})"
        return f"{base}^{exp}"
    p = _PREC[node.op]
    left = to_source(node.left)
    if _prec(node.left) < p:
        left = f"({left})"
    right = to_source(node.right)
    if _prec(node.right) <= p:
        right = f"({right})"
    return f"{left} {node.op} {right}"


# evaluation ------------------------------------------------------------------

def evaluate(expr: FieldExpr | Node, env: Mapping[str, object], div_tol: float = 1e-12):
    """Evaluate on arrays or Taylor objects bound in ``env``."""
    node = expr.root if isinstance(expr, FieldExpr) else expr
    return _eval(node, env, div_tol)


def _eval(node: Node, env, tol):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        try:
            return env[node.name]
        except KeyError:
            raise UnknownSymbol(node.name, -1) from None
    if isinstance(node, Neg):
        return -_eval(node.operand, env, tol)
    if isinstance(node, Call):
        arg = _eval(node.arg, env, tol)
        return getattr(tl, node.func)(arg)
    if isinstance(node, Pow):
        base = _eval(node.base, env, tol)
        k = node.exponent
        if k < 0 and np.any(np.abs(tl.value(base)) <= tol):
            raise EvalDomain("negative power of a value near zero")
        if isinstance(base, tl.Taylor):
            return base ** k
        return np.asarray(base, dtype=float) ** float(k)
    a = _eval(node.left, env, tol)
    b = _eval(node.right, env, tol)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if np.any(np.abs(tl.value(b)) <= tol):
        raise EvalDomain("division by a value near zero")
    return a / b


# jets ------------------------------------------------------------------------

@dataclass
class Jet4:
    """Value and raw chart partials up to the requested order (higher ones None)."""

    value: np.ndarray
    grad: np.ndarray | None = None
    hess: np.ndarray | None = None
    third: np.ndarray | None = None
    fourth: np.ndarray | None = None

    @classmethod
    def from_taylor(cls, t: tl.Taylor) -> "Jet4":
        n, k = t.nvars, t.order
        tensors = []
        for order in range(1, 5):
            if order > k:
                tensors.append(None)
                continue
            arr = np.empty(t.shape + (n,) * order)
            for idx in np.ndindex(*(n,) * order):
                alpha = [0] * n
                for i in idx:
                    alpha[i] += 1
                arr[(...,) + idx] = t.partial(alpha)
            tensors.append(arr)
        return cls(np.asarray(t.value), *tensors)


def jet(expr: FieldExpr, x, order: int = 4, env=None) -> Jet4:
    """Exact partial derivatives of ``expr`` at chart point(s) ``x`` up to ``order``.

    ``env`` maps the list of chart Taylor variables to the name bindings
    (for instance a chart's ``field_env``); by default the expression's
    variables are bound positionally to the chart coordinates.
    """
    if not 0 <= order <= 4:
        raise ValueError("order must be in 0..4")
    x = np.asarray(x, dtype=float)
    return Jet4.from_taylor(taylor_eval(expr, x, order, env))


def taylor_eval(expr: FieldExpr, x, order: int, env=None) -> tl.Taylor:
    """Evaluate ``expr`` on Taylor chart variables expanded at ``x``."""
    x = np.asarray(x, dtype=float)
    coords = tl.Taylor.variables(x, order)
    bindings = dict(zip(expr.variables, coords)) if env is None else env(coords)
    out = evaluate(expr, bindings)
    if not isinstance(out, tl.Taylor):
        out = tl.Taylor.constant(np.broadcast_to(out, x.shape[:-1]), x.shape[-1], order)
    elif out.shape != x.shape[:-1]:
        out = out + np.zeros(x.shape[:-1])
    return out
