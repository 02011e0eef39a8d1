"""A small expression language for f(x).

Grammar (whitespace is ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | 'x' | CONST | FUNC '(' expr ')' | '(' expr ')'

so ``^`` binds tighter than unary minus (``-x^2 == -(x^2)``) and is right
associative (``2^3^2 == 2^9``), while ``+ - * /`` associate to the left.

Expressions evaluate either in mpmath (scalar, current working precision) or
in numpy (vectorized, double precision).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

import mpmath as mp
import numpy as np
from scipy import special

from . import specfun
from .errors import DomainError, ParseError

# -- AST --------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    text: str

    @property
    def value(self) -> float:
        return float(self.text)


@dataclass(frozen=True)
class Var:
    name: str = "x"


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


Node = Union[Num, Var, Const, Unary, Binary, Call]
ExprAst = Node


# -- registry ---------------------------------------------------------------


def _check_real(node, ok, message):
    if not ok:
        raise DomainError(message, node)


def _mp_sqrt(node, v):
    _check_real(node, v >= 0, f"sqrt of negative value {mp.nstr(v, 8)}")
    return mp.sqrt(v)


def _mp_asin(node, v):
    _check_real(node, -1 <= v <= 1, f"asin argument {mp.nstr(v, 8)} outside [-1, 1]")
    return mp.asin(v)


def _mp_ln(node, v):
    _check_real(node, v > 0, f"ln of non-positive value {mp.nstr(v, 8)}")
    return mp.log(v)


def _mp_gamma(node, v):
    _check_real(node, not (v <= 0 and v == mp.floor(v)), f"gamma pole at {mp.nstr(v, 8)}")
    return mp.gamma(v)


def _mp_kurepa(node, v):
    _check_real(node, 0 <= v <= 1, f"kurepaK argument {mp.nstr(v, 8)} outside [0, 1]")
    return specfun.kurepa_K_mp(v)


def _np_sqrt(node, v):
    _check_real(node, np.all(v >= 0), "sqrt of negative value")
    return np.sqrt(v)


def _np_asin(node, v):
    _check_real(node, np.all((v >= -1) & (v <= 1)), "asin argument outside [-1, 1]")
    return np.arcsin(v)


def _np_ln(node, v):
    _check_real(node, np.all(v > 0), "ln of non-positive value")
    return np.log(v)


def _np_gamma(node, v):
    _check_real(node, not np.any((v <= 0) & (v == np.floor(v))), "gamma pole")
    return special.gamma(v)


def _np_kurepa(node, v):
    _check_real(node, np.all((v >= 0) & (v <= 1)), "kurepaK argument outside [0, 1]")
    return specfun.kurepa_K(np.asarray(v, dtype=float))


@dataclass(frozen=True)
class FuncSpec:
    arity: int
    mp_impl: Callable
    np_impl: Callable
    quadrature_backed: bool = False


FUNCTIONS = {
    "sin": FuncSpec(1, lambda n, v: mp.sin(v), lambda n, v: np.sin(v)),
    "cos": FuncSpec(1, lambda n, v: mp.cos(v), lambda n, v: np.cos(v)),
    "asin": FuncSpec(1, _mp_asin, _np_asin),
    "sqrt": FuncSpec(1, _mp_sqrt, _np_sqrt),
    "exp": FuncSpec(1, lambda n, v: mp.exp(v), lambda n, v: np.exp(v)),
    "ln": FuncSpec(1, _mp_ln, _np_ln),
    "gamma": FuncSpec(1, _mp_gamma, _np_gamma),
    "kurepaK": FuncSpec(1, _mp_kurepa, _np_kurepa, quadrature_backed=True),
}

CONSTANTS = {
    "pi": lambda: +mp.pi,
    "sqrt2": lambda: mp.sqrt(2),
    "e": lambda: +mp.e,
    "KP0": lambda: specfun.kp0_mp(mp.mp.dps),
}

VARIABLE = "x"

# -- tokenizer / parser -----------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))"
)


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.peek()
        if val != value or kind != "op":
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {value!r}, found {found}", pos)
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = Binary(op, node, self.unary())
        return node

    def unary(self) -> Node:
        kind, val, _ = self.peek()
        if kind == "op" and val in ("-", "+"):
            self.advance()
            return Unary(val, self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            return Binary("^", base, self.unary())
        return base

    def atom(self) -> Node:
        kind, val, pos = self.advance()
        if kind == "num":
            return Num(val)
        if kind == "name":
            is_call = self.peek()[0] == "op" and self.peek()[1] == "("
            if val in FUNCTIONS:
                if not is_call:
                    raise ParseError(f"function {val!r} needs an argument list", pos)
                self.advance()
                args = [self.expr()]
                while self.peek()[0] == "op" and self.peek()[1] == ",":
                    self.advance()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != FUNCTIONS[val].arity:
                    raise ParseError(
                        f"function {val!r} takes {FUNCTIONS[val].arity} argument(s), got {len(args)}", pos)
                return Call(val, tuple(args))
            if is_call:
                raise ParseError(f"unknown function {val!r}", pos)
            if val == VARIABLE:
                return Var(val)
            if val in CONSTANTS:
                return Const(val)
            raise ParseError(f"unknown identifier {val!r}", pos)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {found}", pos)


def parse_expr(text: str) -> Node:
    """Parse ``text`` into an expression tree; raises ParseError with an offset."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression", 0)
    parser = _Parser(text)
    try:
        return parser.parse()
    except RecursionError:
        raise ParseError("expression nested too deeply", parser.peek()[2]) from None


# -- printing ---------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "u": 3, "^": 4}


def _prec(node) -> int:
    if isinstance(node, Binary):
        return _PREC[node.op]
    if isinstance(node, Unary):
        return _PREC["u"]
    return 5


def to_text(node: Node) -> str:
    """Render with the minimum parentheses needed to reparse to the same tree."""
    if isinstance(node, Num):
        return node.text
    if isinstance(node, (Var, Const)):
        return node.name
    if isinstance(node, Call):
        return f"{node.name}({', '.join(to_text(a) for a in node.args)})"
    if isinstance(node, Unary):
        inner = to_text(node.operand)
        # unary operands parse at unary level, so anything below it needs parens
        if _prec(node.operand) < _PREC["u"]:
            inner = f"({inner})"
        return f"{node.op}{inner}"
    p = _PREC[node.op]
    left, right = to_text(node.left), to_text(node.right)
    if node.op == "^":
        if _prec(node.left) <= p:
            left = f"({left})"
        if _prec(node.right) < _PREC["u"]:
            right = f"({right})"
        return f"{left}^{right}"
    if _prec(node.left) < p:
        left = f"({left})"
    if _prec(node.right) <= p:
        right = f"({right})"
    return f"{left} {node.op} {right}" if p == 1 else f"{left}*{right}" if node.op == "*" else f"{left}/{right}"


# -- tree utilities ---------------------------------------------------------


def substitute(node: Node, replacement: Node) -> Node:
    """Replace every occurrence of the variable by ``replacement``."""
    if isinstance(node, Var):
        return replacement
    if isinstance(node, Unary):
        return Unary(node.op, substitute(node.operand, replacement))
    if isinstance(node, Binary):
        return Binary(node.op, substitute(node.left, replacement), substitute(node.right, replacement))
    if isinstance(node, Call):
        return Call(node.name, tuple(substitute(a, replacement) for a in node.args))
    return node


def walk(node: Node):
    yield node
    if isinstance(node, Unary):
        yield from walk(node.operand)
    elif isinstance(node, Binary):
        yield from walk(node.left)
        yield from walk(node.right)
    elif isinstance(node, Call):
        for a in node.args:
            yield from walk(a)


def uses_quadrature(node: Node) -> bool:
    return any(isinstance(n, Call) and FUNCTIONS[n.name].quadrature_backed for n in walk(node))


# -- evaluation -------------------------------------------------------------


@dataclass(frozen=True)
class EvalEnv:
    """Evaluation context: variable value, backend and precision.

    ``backend`` is ``"mp"`` (scalar, ``dps`` decimal digits) or ``"np"``
    (vectorized doubles; ``x`` may be an array).
    """

    x: object
    backend: str = "mp"
    dps: int = 30


def _eval_mp(node: Node, x):
    if isinstance(node, Num):
        return mp.mpf(node.text)
    if isinstance(node, Var):
        return x
    if isinstance(node, Const):
        return CONSTANTS[node.name]()
    if isinstance(node, Unary):
        v = _eval_mp(node.operand, x)
        return -v if node.op == "-" else v
    if isinstance(node, Call):
        args = [_eval_mp(a, x) for a in node.args]
        return FUNCTIONS[node.name].mp_impl(node, *args)
    a = _eval_mp(node.left, x)
    b = _eval_mp(node.right, x)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        if b == 0:
            raise DomainError("division by zero", node)
        return a / b
    # power
    if a < 0 and b != mp.floor(b):
        raise DomainError("negative base with non-integer exponent", node)
    if a == 0 and b < 0:
        raise DomainError("zero to a negative power", node)
    if b == mp.floor(b) and abs(b) <= 64:
        return a ** int(b)
    return mp.power(a, b)


_NP_CONST_CACHE: dict = {}


def _np_const(name):
    if name not in _NP_CONST_CACHE:
        with mp.workdps(30):
            _NP_CONST_CACHE[name] = float(CONSTANTS[name]())
    return _NP_CONST_CACHE[name]


def _eval_np(node: Node, x):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return x
    if isinstance(node, Const):
        return _np_const(node.name)
    if isinstance(node, Unary):
        v = _eval_np(node.operand, x)
        return -v if node.op == "-" else v
    if isinstance(node, Call):
        args = [np.asarray(_eval_np(a, x), dtype=float) for a in node.args]
        return FUNCTIONS[node.name].np_impl(node, *args)
    a = _eval_np(node.left, x)
    b = _eval_np(node.right, x)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        if np.any(np.asarray(b) == 0):
            raise DomainError("division by zero", node)
        return a / b
    base, ex = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if np.any((base < 0) & (ex != np.floor(ex))):
        raise DomainError("negative base with non-integer exponent", node)
    if np.any((base == 0) & (ex < 0)):
        raise DomainError("zero to a negative power", node)
    if ex.ndim == 0 and float(ex) == math.floor(float(ex)) and abs(float(ex)) <= 64:
        return a ** int(ex)
    return np.power(base, ex)


def eval_expr(ast: Node, env: EvalEnv):
    """Evaluate ``ast`` at ``env.x``.

    The mp backend returns an mpf computed at ``env.dps`` digits; the np
    backend returns a float or an array of floats.
    """
    if env.backend == "mp":
        with mp.workdps(env.dps):
            return +_eval_mp(ast, mp.mpf(env.x))
    if env.backend == "np":
        with np.errstate(all="ignore"):
            out = _eval_np(ast, np.asarray(env.x, dtype=float) if np.ndim(env.x) else float(env.x))
        if np.ndim(env.x):
            return np.broadcast_to(np.asarray(out, dtype=float), np.shape(env.x)).copy()
        return float(out)
    raise ValueError(f"unknown backend {env.backend!r}")


def evaluate_text(text: str, x: float = 0.0, dps: int = 30) -> float:
    """Parse and evaluate in extended precision, returning a float."""
    return float(eval_expr(parse_expr(text), EvalEnv(x, "mp", dps)))
