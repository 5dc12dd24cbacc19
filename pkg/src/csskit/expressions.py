"""Small expression language for scalar model functions.

Grammar (whitespace-insensitive)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?          # right-associative
    atom    := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

'^' binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``.  Exponents
must fold to a constant integer or half-integer; half-integer powers are
evaluated through sqrt and take the nonnegative branch.  Known functions:
sin, cos, exp, ln, sqrt.

Trees are immutable.  Construction (by the parser, by `differentiate`, or
via Python operators on nodes) funnels through smart constructors that do
constant folding and nothing more, so structurally equal inputs produce
structurally equal trees and ``parse(to_str(e)) == e``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator, Mapping, Sequence

from .errors import EvalError, ExprSyntaxError, UnknownIdentifier

__all__ = [
    "Expr",
    "Lit",
    "Var",
    "Neg",
    "Fun",
    "Bin",
    "parse_expr",
    "differentiate",
    "evaluate",
    "to_str",
    "ScalarFn1D",
    "ScalarFn4D",
]

FUNCTIONS = ("sin", "cos", "exp", "ln", "sqrt")

_UNARY_MATH: dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "ln": math.log,
    "sqrt": math.sqrt,
}


class Expr:
    """Base node.  Python operators build folded trees, mirroring the parser."""

    def __add__(self, other: Expr | float) -> Expr:
        return _add(self, _as_expr(other))

    def __radd__(self, other: float) -> Expr:
        return _add(_as_expr(other), self)

    def __sub__(self, other: Expr | float) -> Expr:
        return _sub(self, _as_expr(other))

    def __rsub__(self, other: float) -> Expr:
        return _sub(_as_expr(other), self)

    def __mul__(self, other: Expr | float) -> Expr:
        return _mul(self, _as_expr(other))

    def __rmul__(self, other: float) -> Expr:
        return _mul(_as_expr(other), self)

    def __truediv__(self, other: Expr | float) -> Expr:
        return _div(self, _as_expr(other))

    def __rtruediv__(self, other: float) -> Expr:
        return _div(_as_expr(other), self)

    def __neg__(self) -> Expr:
        return _neg(self)

    def __pow__(self, k: float) -> Expr:
        return _pow(self, _as_expr(float(k)))

    def __str__(self) -> str:
        return to_str(self)


@dataclass(frozen=True)
class Lit(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Fun(Expr):
    name: str
    arg: Expr


@dataclass(frozen=True)
class Bin(Expr):
    op: str
    left: Expr
    right: Expr


def _as_expr(v: Expr | float) -> Expr:
    return v if isinstance(v, Expr) else Lit(float(v))


def _finite_lit(value: float) -> Lit | None:
    return Lit(value) if math.isfinite(value) else None


def _add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Lit) and isinstance(b, Lit):
        folded = _finite_lit(a.value + b.value)
        if folded is not None:
            return folded
    if isinstance(a, Lit) and a.value == 0.0:
        return b
    if isinstance(b, Lit) and b.value == 0.0:
        return a
    return Bin("+", a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Lit) and isinstance(b, Lit):
        folded = _finite_lit(a.value - b.value)
        if folded is not None:
            return folded
    if isinstance(b, Lit) and b.value == 0.0:
        return a
    if isinstance(a, Lit) and a.value == 0.0:
        return _neg(b)
    return Bin("-", a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Lit) and isinstance(b, Lit):
        folded = _finite_lit(a.value * b.value)
        if folded is not None:
            return folded
    if isinstance(a, Lit) and a.value == 1.0:
        return b
    if isinstance(b, Lit) and b.value == 1.0:
        return a
    return Bin("*", a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Lit) and isinstance(b, Lit) and b.value != 0.0:
        folded = _finite_lit(a.value / b.value)
        if folded is not None:
            return folded
    if isinstance(b, Lit) and b.value == 1.0:
        return a
    return Bin("/", a, b)


def _neg(a: Expr) -> Expr:
    if isinstance(a, Lit):
        return Lit(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _half_integer(v: float) -> bool:
    return (2.0 * v) == round(2.0 * v) and abs(v) <= 64.0


def _pow(base: Expr, expo: Expr, offset: int | None = None) -> Expr:
    if not isinstance(expo, Lit) or not _half_integer(expo.value):
        if offset is not None:
            raise ExprSyntaxError(
                "exponent must fold to a constant integer or half-integer", offset
            )
        raise ValueError("exponent must be a constant integer or half-integer")
    k = expo.value
    if k == 1.0:
        return base
    if k == 0.0:
        return Lit(1.0)
    if isinstance(base, Lit):
        try:
            folded = _finite_lit(_pow_value(base.value, k))
        except (ValueError, ZeroDivisionError, OverflowError):
            folded = None
        if folded is not None:
            return folded
    return Bin("^", base, Lit(k))


def _pow_value(x: float, k: float) -> float:
    # route half-integer powers through sqrt so the branch is the real one
    n = math.floor(k)
    if k == n:
        return x ** int(n)
    return (x ** int(n)) * math.sqrt(x)


def _fun(name: str, arg: Expr) -> Expr:
    if isinstance(arg, Lit):
        try:
            folded = _finite_lit(_UNARY_MATH[name](arg.value))
        except (ValueError, OverflowError):
            folded = None
        if folded is not None:
            return folded
    return Fun(name, arg)


# --- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # num | name | op | end
    text: str
    offset: int


def _tokenize(src: str) -> list[_Token]:
    toks: list[_Token] = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(src, pos)
        if m is None or m.end() == pos:
            bad = pos + len(src[pos:]) - len(src[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {src[bad]!r}", bad)
        pos = m.end()
        for kind in ("num", "name", "op"):
            text = m.group(kind)
            if text is not None:
                toks.append(_Token(kind, text, m.start(kind)))
                break
    toks.append(_Token("end", "", len(src)))
    return toks


class _Parser:
    def __init__(self, src: str, variables: Sequence[str]) -> None:
        self.toks = _tokenize(src)
        self.pos = 0
        self.vars = frozenset(variables)

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def next(self) -> _Token:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> Expr:
        e = self.expr(anchor=None)
        tok = self.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {tok.text!r}", tok.offset)
        return e

    def expr(self, anchor: int | None) -> Expr:
        e = self.term(anchor)
        while self.peek().text in ("+", "-"):
            op = self.next()
            rhs = self.term(anchor=op.offset)
            e = _add(e, rhs) if op.text == "+" else _sub(e, rhs)
        return e

    def term(self, anchor: int | None) -> Expr:
        e = self.unary(anchor)
        while self.peek().text in ("*", "/"):
            op = self.next()
            rhs = self.unary(anchor=op.offset)
            e = _mul(e, rhs) if op.text == "*" else _div(e, rhs)
        return e

    def unary(self, anchor: int | None) -> Expr:
        if self.peek().text == "-":
            op = self.next()
            return _neg(self.unary(anchor=op.offset))
        return self.power(anchor)

    def power(self, anchor: int | None) -> Expr:
        base = self.atom(anchor)
        if self.peek().text == "^":
            op = self.next()
            expo = self.unary(anchor=op.offset)  # right-associative
            return _pow(base, expo, offset=op.offset)
        return base

    def atom(self, anchor: int | None) -> Expr:
        tok = self.next()
        if tok.kind == "num":
            return Lit(float(tok.text))
        if tok.kind == "name":
            if self.peek().text == "(":
                if tok.text not in _UNARY_MATH:
                    raise UnknownIdentifier(tok.text, tok.offset)
                self.next()
                arg = self.expr(anchor=None)
                closing = self.next()
                if closing.text != ")":
                    raise ExprSyntaxError("expected ')'", closing.offset)
                return _fun(tok.text, arg)
            if tok.text not in self.vars:
                raise UnknownIdentifier(tok.text, tok.offset)
            return Var(tok.text)
        if tok.text == "(":
            e = self.expr(anchor=None)
            closing = self.next()
            if closing.text != ")":
                raise ExprSyntaxError("expected ')'", closing.offset)
            return e
        # operand expected but an operator/end/')' found: blame the operator
        # that demanded it when there is one, else the stray token itself
        where = anchor if anchor is not None else tok.offset
        raise ExprSyntaxError(f"expected operand, found {tok.text or 'end'!r}", where)


def parse_expr(src: str, variables: Sequence[str]) -> Expr:
    """Parse ``src`` into a folded tree over the given variable names."""
    return _Parser(src, variables).parse()


# --- printing ---------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(e: Expr) -> int:
    if isinstance(e, Bin):
        return {"+": _PREC_ADD, "-": _PREC_ADD, "*": _PREC_MUL, "/": _PREC_MUL, "^": _PREC_POW}[e.op]
    if isinstance(e, Neg):
        return _PREC_NEG
    if isinstance(e, Lit) and e.value < 0:
        return _PREC_NEG
    return _PREC_ATOM


def _num_str(v: float) -> str:
    return str(int(v)) if v == int(v) and abs(v) < 1e16 else repr(v)


def to_str(e: Expr) -> str:
    """Render with minimal parentheses; `parse_expr` inverts it."""
    if isinstance(e, Lit):
        return _num_str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        inner = to_str(e.arg)
        if _prec(e.arg) < _PREC_NEG:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, Fun):
        return f"{e.name}({to_str(e.arg)})"
    if isinstance(e, Bin):
        lp, rp = _prec(e.left), _prec(e.right)
        level = _prec(e)
        if e.op == "^":
            # right-associative and tighter than unary minus
            left = f"({to_str(e.left)})" if lp <= level else to_str(e.left)
            right = f"({to_str(e.right)})" if rp < level else to_str(e.right)
            return f"{left}^{right}"
        # right child parenthesized at equal precedence so that the printed
        # form reparses to the same shape, not just the same value
        left = f"({to_str(e.left)})" if lp < level else to_str(e.left)
        right = f"({to_str(e.right)})" if rp <= level else to_str(e.right)
        return f"{left} {e.op} {right}"
    raise TypeError(f"not an Expr: {e!r}")


# --- differentiation --------------------------------------------------------


def differentiate(e: Expr, var: str) -> Expr:
    """Exact derivative; result is folded but otherwise unsimplified."""
    if isinstance(e, Lit):
        return Lit(0.0)
    if isinstance(e, Var):
        return Lit(1.0 if e.name == var else 0.0)
    if isinstance(e, Neg):
        return _neg(differentiate(e.arg, var))
    if isinstance(e, Fun):
        da = differentiate(e.arg, var)
        if e.name == "sin":
            return _mul(_fun("cos", e.arg), da)
        if e.name == "cos":
            return _neg(_mul(_fun("sin", e.arg), da))
        if e.name == "exp":
            return _mul(_fun("exp", e.arg), da)
        if e.name == "ln":
            return _div(da, e.arg)
        if e.name == "sqrt":
            return _div(da, _mul(Lit(2.0), _fun("sqrt", e.arg)))
        raise ValueError(f"unknown function {e.name!r}")
    if isinstance(e, Bin):
        if e.op == "^":
            k = e.right.value  # type: ignore[union-attr]  # rhs is Lit by construction
            da = differentiate(e.left, var)
            return _mul(_mul(Lit(k), _pow(e.left, Lit(k - 1.0))), da)
        da, db = differentiate(e.left, var), differentiate(e.right, var)
        if e.op == "+":
            return _add(da, db)
        if e.op == "-":
            return _sub(da, db)
        if e.op == "*":
            return _add(_mul(da, e.right), _mul(e.left, db))
        if e.op == "/":
            num = _sub(_mul(da, e.right), _mul(e.left, db))
            return _div(num, _mul(e.right, e.right))
    raise TypeError(f"not an Expr: {e!r}")


# --- evaluation -------------------------------------------------------------


def evaluate(e: Expr, env: Mapping[str, float]) -> float:
    """Tree-walking evaluation; raises EvalError when leaving the real line."""
    v = _eval(e, env)
    if not math.isfinite(v):
        raise EvalError(f"non-finite value from {to_str(e)!r}")
    return v


def _eval(e: Expr, env: Mapping[str, float]) -> float:
    try:
        if isinstance(e, Lit):
            return e.value
        if isinstance(e, Var):
            return env[e.name]
        if isinstance(e, Neg):
            return -_eval(e.arg, env)
        if isinstance(e, Fun):
            return _UNARY_MATH[e.name](_eval(e.arg, env))
        if isinstance(e, Bin):
            a = _eval(e.left, env)
            if e.op == "^":
                return _pow_value(a, e.right.value)  # type: ignore[union-attr]
            b = _eval(e.right, env)
            if e.op == "+":
                return a + b
            if e.op == "-":
                return a - b
            if e.op == "*":
                return a * b
            return a / b
    except KeyError as exc:
        raise EvalError(f"unbound variable {exc}") from exc
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise EvalError(str(exc)) from exc
    raise TypeError(f"not an Expr: {e!r}")


# --- compilation ------------------------------------------------------------


def _emit(e: Expr) -> str:
    if isinstance(e, Lit):
        return repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{_emit(e.arg)})"
    if isinstance(e, Fun):
        return f"_{e.name}({_emit(e.arg)})"
    if isinstance(e, Bin):
        if e.op == "^":
            k = e.right.value  # type: ignore[union-attr]
            n = math.floor(k)
            base = _emit(e.left)
            if k == n:
                return f"({base})**({int(n)})"
            if n == 0:
                return f"_sqrt({base})"
            return f"(({base})**({int(n)})*_sqrt({base}))"
        return f"({_emit(e.left)}{e.op}{_emit(e.right)})"
    raise TypeError(f"not an Expr: {e!r}")


def compile_expr(e: Expr, variables: Sequence[str]) -> Callable[..., float]:
    """Compile to a positional-argument Python function (no domain checks)."""
    args = ", ".join(variables) if variables else "_ignored=0.0"
    namespace: dict[str, object] = {f"_{name}": fn for name, fn in _UNARY_MATH.items()}
    exec(compile(f"def _f({args}):\n    return {_emit(e)}", "<expr>", "exec"), namespace)
    return namespace["_f"]  # type: ignore[return-value]


def _guarded(fn: Callable[..., float], label: str) -> Callable[..., float]:
    def call(*xs: float) -> float:
        try:
            v = fn(*xs)
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise EvalError(f"{label}: {exc}") from exc
        if not math.isfinite(v):
            raise EvalError(f"{label}: non-finite value")
        return v

    return call


# --- scalar function wrappers ------------------------------------------------


@dataclass(frozen=True, eq=False)
class ScalarFn1D:
    """Single-variable scalar function with an exact derivative."""

    expr: Expr
    var: str
    domain: tuple[float, float] = (-1.0, 1.0)

    @classmethod
    def parse(cls, src: str, var: str, domain: tuple[float, float] = (-1.0, 1.0)) -> "ScalarFn1D":
        return cls(parse_expr(src, (var,)), var, domain)

    @cached_property
    def _fn(self) -> Callable[..., float]:
        return _guarded(compile_expr(self.expr, (self.var,)), to_str(self.expr))

    @cached_property
    def deriv(self) -> "ScalarFn1D":
        return ScalarFn1D(differentiate(self.expr, self.var), self.var, self.domain)

    def __call__(self, x: float) -> float:
        return self._fn(x)

    def __str__(self) -> str:
        return to_str(self.expr)


@dataclass(frozen=True, eq=False)
class ScalarFn4D:
    """Scalar function of up to four named variables."""

    expr: Expr
    vars: tuple[str, ...] = ("x0", "x1", "x2", "x3")

    @classmethod
    def parse(cls, src: str, vars: Sequence[str] = ("x0", "x1", "x2", "x3")) -> "ScalarFn4D":
        return cls(parse_expr(src, tuple(vars)), tuple(vars))

    @cached_property
    def _fn(self) -> Callable[..., float]:
        return _guarded(compile_expr(self.expr, self.vars), to_str(self.expr))

    def gradient(self) -> tuple["ScalarFn4D", ...]:
        return tuple(ScalarFn4D(differentiate(self.expr, v), self.vars) for v in self.vars)

    def __call__(self, *xs: float) -> float:
        return self._fn(*xs[: len(self.vars)])

    def __str__(self) -> str:
        return to_str(self.expr)
