"""Expression language for vector fields, control systems, and scalar functions.

Grammar (infix arithmetic, ``^`` for non-negative integer powers,
comma-separated components)::

    field   := expr ("," expr)*
    expr    := term (("+"|"-") term)*
    term    := factor (("*"|"/") factor)*
    factor  := base ("^" unsigned-integer)?
    base    := number | ident | "(" expr ")" | "-" base | func "(" expr ")"
    ident   := "x" digits | "u" digits
    func    := "sin" | "cos" | "exp" | "tanh" | "sqrt" | "abs"

State variables are ``x1..xn``, control variables ``u1..um``.  Expression
trees are immutable; evaluation, differentiation, and substitution are pure
functions, safe to call concurrently.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, ParseError

FUNCTIONS = ("sin", "cos", "exp", "tanh", "sqrt", "abs")

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?"
    r"|\d+(?:[eE][+-]?\d+)?)|(?P<ident>[A-Za-z]\w*)|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class Expr:
    """Immutable expression node.

    ``kind`` is one of const, var, neg, add, sub, mul, div, pow, call.
    ``name`` holds the variable or function name, ``power`` the integer
    exponent of a pow node, ``args`` the child nodes.
    """

    kind: str
    value: float = 0.0
    name: str = ""
    power: int = 0
    args: tuple["Expr", ...] = ()


def const(v: float) -> Expr:
    return Expr("const", value=float(v))


def var(name: str) -> Expr:
    return Expr("var", name=name)


ZERO = const(0.0)
ONE = const(1.0)


def _is_const(e: Expr, v: float | None = None) -> bool:
    return e.kind == "const" and (v is None or e.value == v)


def neg(a: Expr) -> Expr:
    if _is_const(a):
        return const(-a.value)
    if a.kind == "neg":
        return a.args[0]
    return Expr("neg", args=(a,))


def add(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return const(a.value + b.value)
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    if b.kind == "neg":
        return sub(a, b.args[0])
    return Expr("add", args=(a, b))


def sub(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return const(a.value - b.value)
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return neg(b)
    if b.kind == "neg":
        return add(a, b.args[0])
    return Expr("sub", args=(a, b))


def mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return const(a.value * b.value)
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return ZERO
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    return Expr("mul", args=(a, b))


def div(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0.0) and not _is_const(b, 0.0):
        return ZERO
    if _is_const(b, 1.0):
        return a
    return Expr("div", args=(a, b))


def power(a: Expr, k: int) -> Expr:
    if k == 0:
        return ONE
    if k == 1:
        return a
    if _is_const(a):
        return const(a.value**k)
    return Expr("pow", power=int(k), args=(a,))


def call(fn: str, a: Expr) -> Expr:
    return Expr("call", name=fn, args=(a,))


# ---------------------------------------------------------------------------
# Parsing


class _Parser:
    def __init__(self, source: str, n: int, m: int):
        self.source = source
        self.n = n
        self.m = m
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(source):
            match = _TOKEN_RE.match(source, pos)
            if match is None or match.end() == pos:
                stripped = source[pos:].lstrip()
                if not stripped:
                    break
                offset = len(source) - len(stripped)
                raise ParseError(f"unexpected character {stripped[0]!r}", offset)
            for group in ("number", "ident", "op"):
                text = match.group(group)
                if text is not None:
                    self.tokens.append((group, text, match.start(group)))
                    break
            pos = match.end()
        self.idx = 0

    def peek(self) -> tuple[str, str, int]:
        if self.idx < len(self.tokens):
            return self.tokens[self.idx]
        return ("eof", "", len(self.source))

    def advance(self) -> tuple[str, str, int]:
        tok = self.peek()
        self.idx += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"expected {op!r}", pos)
        self.advance()

    def parse_components(self) -> list[Expr]:
        comps = [self.parse_expr()]
        while True:
            kind, text, pos = self.peek()
            if kind == "eof":
                return comps
            if kind == "op" and text == ",":
                self.advance()
                comps.append(self.parse_expr())
            else:
                raise ParseError(f"unexpected token {text!r}", pos)

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                rhs = self.parse_term()
                node = Expr("add" if text == "+" else "sub", args=(node, rhs))
            else:
                return node

    def parse_term(self) -> Expr:
        node = self.parse_factor()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                rhs = self.parse_factor()
                node = Expr("mul" if text == "*" else "div", args=(node, rhs))
            else:
                return node

    def parse_factor(self) -> Expr:
        node = self.parse_base()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            nkind, ntext, npos = self.peek()
            if nkind != "number" or not ntext.isdigit():
                raise ParseError("exponent must be an unsigned integer", npos)
            self.advance()
            node = Expr("pow", power=int(ntext), args=(node,))
        return node

    def parse_base(self) -> Expr:
        kind, text, pos = self.advance()
        if kind == "number":
            return const(float(text))
        if kind == "op" and text == "-":
            inner = self.parse_base()
            if inner.kind == "const":
                return const(-inner.value)
            return Expr("neg", args=(inner,))
        if kind == "op" and text == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        if kind == "ident":
            if text in FUNCTIONS:
                self.expect_op("(")
                arg = self.parse_expr()
                self.expect_op(")")
                return Expr("call", name=text, args=(arg,))
            ref = re.fullmatch(r"([xu])(\d+)", text)
            if ref is None:
                raise ParseError(f"unknown identifier {text!r}", pos)
            index = int(ref.group(2))
            limit = self.n if ref.group(1) == "x" else self.m
            if index < 1 or index > limit:
                raise ParseError(f"unknown identifier {text!r}", pos)
            return var(text)
        raise ParseError(f"unexpected token {text or 'end of input'!r}", pos)


@dataclass(frozen=True)
class FieldSpec:
    """A vector field (m=0) or control system (m>0) with n components."""

    n: int
    m: int
    components: tuple[Expr, ...]


@dataclass(frozen=True)
class ScalarSpec:
    """A scalar function of x1..xn, e.g. a candidate Lyapunov function."""

    n: int
    expr: Expr


def parse_field(source: str, n: int, m: int = 0) -> FieldSpec:
    """Parse a comma-separated list of n component expressions."""
    if n < 1:
        raise ValueError("state dimension n must be >= 1")
    if m < 0:
        raise ValueError("control dimension m must be >= 0")
    comps = _Parser(source, n, m).parse_components()
    if len(comps) != n:
        raise ParseError(
            f"expected {n} components, got {len(comps)}", len(source)
        )
    return FieldSpec(n, m, tuple(comps))


def parse_scalar(source: str, n: int) -> ScalarSpec:
    if n < 1:
        raise ValueError("state dimension n must be >= 1")
    comps = _Parser(source, n, 0).parse_components()
    if len(comps) != 1:
        raise ParseError(f"expected 1 component, got {len(comps)}", len(source))
    return ScalarSpec(n, comps[0])


def parse_feedback(source: str, n: int, m: int) -> FieldSpec:
    """Parse a state feedback law: m control components over x1..xn only."""
    if m < 1:
        raise ValueError("feedback needs control dimension m >= 1")
    comps = _Parser(source, n, 0).parse_components()
    if len(comps) != m:
        raise ParseError(
            f"expected {m} feedback components, got {len(comps)}", len(source)
        )
    return FieldSpec(n, 0, tuple(comps))


# ---------------------------------------------------------------------------
# Printing

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2}


def to_source(e: Expr) -> str:
    """Canonical printer; parse(to_source(e)) reproduces e structurally."""
    if e.kind == "const":
        # negative literals print as "-c" and re-parse to the same node
        return repr(e.value)
    if e.kind == "var":
        return e.name
    if e.kind == "neg":
        return "-" + _as_base(e.args[0])
    if e.kind == "call":
        return f"{e.name}({to_source(e.args[0])})"
    if e.kind == "pow":
        return f"{_as_base(e.args[0])}^{e.power}"
    a, b = e.args
    op = {"add": " + ", "sub": " - ", "mul": "*", "div": "/"}[e.kind]
    prec = _PREC[e.kind]
    left = to_source(a)
    if _PREC.get(a.kind, 3) < prec:
        left = f"({left})"
    right = to_source(b)
    if _PREC.get(b.kind, 3) <= prec and b.kind in _PREC:
        right = f"({right})"
    return f"{left}{op}{right}"


def _as_base(e: Expr) -> str:
    # grammar base = number | ident | (expr) | -base | func(expr)
    if e.kind in ("var", "call") or (e.kind == "const" and e.value >= 0):
        return to_source(e)
    if e.kind == "neg":
        return to_source(e)
    return f"({to_source(e)})"


# ---------------------------------------------------------------------------
# Evaluation


def evaluate(e: Expr, x, u=()) -> float:
    k = e.kind
    if k == "const":
        return e.value
    if k == "var":
        idx = int(e.name[1:]) - 1
        return float(x[idx]) if e.name[0] == "x" else float(u[idx])
    if k == "neg":
        return -evaluate(e.args[0], x, u)
    if k == "add":
        return evaluate(e.args[0], x, u) + evaluate(e.args[1], x, u)
    if k == "sub":
        return evaluate(e.args[0], x, u) - evaluate(e.args[1], x, u)
    if k == "mul":
        return evaluate(e.args[0], x, u) * evaluate(e.args[1], x, u)
    if k == "div":
        denom = evaluate(e.args[1], x, u)
        if denom == 0.0:
            raise DomainError("division by zero")
        return evaluate(e.args[0], x, u) / denom
    if k == "pow":
        base = evaluate(e.args[0], x, u)
        try:
            return base**e.power
        except OverflowError as exc:
            raise DomainError(f"overflow in power: {exc}") from exc
    if k == "call":
        arg = evaluate(e.args[0], x, u)
        if e.name == "sqrt":
            if arg < 0.0:
                raise DomainError(f"sqrt of negative value {arg}")
            return math.sqrt(arg)
        if e.name == "abs":
            return abs(arg)
        try:
            return getattr(math, e.name)(arg)
        except OverflowError as exc:
            raise DomainError(f"overflow in {e.name}: {exc}") from exc
    raise ValueError(f"unknown node kind {k!r}")


def evaluate_field(f: FieldSpec, x, u=None) -> np.ndarray:
    """Componentwise evaluation of a field at state x, control u."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(() if u is None else u, dtype=float)
    if x.shape != (f.n,):
        raise ValueError(f"state vector must have length {f.n}")
    if u.shape != (f.m,):
        raise ValueError(f"control vector must have length {f.m}")
    out = np.empty(f.n)
    for i, comp in enumerate(f.components):
        try:
            out[i] = evaluate(comp, x, u)
        except DomainError as exc:
            raise DomainError(f"component {i + 1}: {exc}") from exc
    return out


def evaluate_scalar(V: ScalarSpec, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.shape != (V.n,):
        raise ValueError(f"state vector must have length {V.n}")
    return evaluate(V.expr, x)


# ---------------------------------------------------------------------------
# Differentiation


def diff(e: Expr, name: str) -> Expr:
    """Symbolic partial derivative with respect to variable `name`.

    abs and sqrt are differentiated away from their kinks; evaluating the
    derivative at a kink raises a DomainError (division by zero) instead of
    picking a subgradient.
    """
    k = e.kind
    if k == "const":
        return ZERO
    if k == "var":
        return ONE if e.name == name else ZERO
    if k == "neg":
        return neg(diff(e.args[0], name))
    if k == "add":
        return add(diff(e.args[0], name), diff(e.args[1], name))
    if k == "sub":
        return sub(diff(e.args[0], name), diff(e.args[1], name))
    if k == "mul":
        a, b = e.args
        return add(mul(diff(a, name), b), mul(a, diff(b, name)))
    if k == "div":
        a, b = e.args
        num = sub(mul(diff(a, name), b), mul(a, diff(b, name)))
        return div(num, power(b, 2))
    if k == "pow":
        a = e.args[0]
        da = diff(a, name)
        if e.power == 0:
            return ZERO
        return mul(mul(const(e.power), power(a, e.power - 1)), da)
    if k == "call":
        a = e.args[0]
        da = diff(a, name)
        if e.name == "sin":
            return mul(call("cos", a), da)
        if e.name == "cos":
            return neg(mul(call("sin", a), da))
        if e.name == "exp":
            return mul(call("exp", a), da)
        if e.name == "tanh":
            return mul(sub(ONE, power(call("tanh", a), 2)), da)
        if e.name == "sqrt":
            return div(da, mul(const(2.0), call("sqrt", a)))
        if e.name == "abs":
            return mul(div(a, call("abs", a)), da)
    raise ValueError(f"unknown node kind {k!r}")


@lru_cache(maxsize=512)
def _state_partials(f: FieldSpec) -> tuple[tuple[Expr, ...], ...]:
    names = [f"x{j + 1}" for j in range(f.n)]
    return tuple(
        tuple(diff(comp, name) for name in names) for comp in f.components
    )


def jacobian(f: FieldSpec, x, u=None) -> np.ndarray:
    """n-by-n matrix of partial derivatives in the state variables."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(() if u is None else u, dtype=float)
    if x.shape != (f.n,):
        raise ValueError(f"state vector must have length {f.n}")
    if u.shape != (f.m,):
        raise ValueError(f"control vector must have length {f.m}")
    parts = _state_partials(f)
    J = np.empty((f.n, f.n))
    for i in range(f.n):
        for j in range(f.n):
            try:
                J[i, j] = evaluate(parts[i][j], x, u)
            except DomainError as exc:
                raise DomainError(f"component {i + 1}: {exc}") from exc
    return J


def gradient(V: ScalarSpec) -> FieldSpec:
    """Gradient of a scalar function as a FieldSpec."""
    comps = tuple(diff(V.expr, f"x{j + 1}") for j in range(V.n))
    return FieldSpec(V.n, 0, comps)


def negated(f: FieldSpec) -> FieldSpec:
    return FieldSpec(f.n, f.m, tuple(neg(c) for c in f.components))


def substitute(e: Expr, mapping: dict[str, Expr]) -> Expr:
    if e.kind == "var":
        return mapping.get(e.name, e)
    if not e.args:
        return e
    new_args = tuple(substitute(a, mapping) for a in e.args)
    return Expr(e.kind, value=e.value, name=e.name, power=e.power, args=new_args)


def close_loop(f: FieldSpec, feedback: FieldSpec) -> FieldSpec:
    """Substitute u_j <- feedback component j; yields closed dynamics (m=0)."""
    if len(feedback.components) != f.m:
        raise ValueError(
            f"feedback must supply {f.m} components, got {len(feedback.components)}"
        )
    mapping = {f"u{j + 1}": comp for j, comp in enumerate(feedback.components)}
    comps = tuple(substitute(c, mapping) for c in f.components)
    return FieldSpec(f.n, 0, comps)


# ---------------------------------------------------------------------------
# Compiled evaluation (used by integrators, optimizers, and mesh sampling)

_SCALAR_ENV = {
    "_sin": math.sin,
    "_cos": math.cos,
    "_exp": math.exp,
    "_tanh": math.tanh,
    "_sqrt": math.sqrt,
    "_abs": abs,
}
_VECTOR_ENV = {
    "_sin": np.sin,
    "_cos": np.cos,
    "_exp": np.exp,
    "_tanh": np.tanh,
    "_sqrt": np.sqrt,
    "_abs": np.abs,
}


def _emit(e: Expr) -> str:
    k = e.kind
    if k == "const":
        return repr(e.value)
    if k == "var":
        idx = int(e.name[1:]) - 1
        return f"x[{idx}]" if e.name[0] == "x" else f"u[{idx}]"
    if k == "neg":
        return f"(-{_emit(e.args[0])})"
    if k in ("add", "sub", "mul", "div"):
        op = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[k]
        return f"({_emit(e.args[0])}{op}{_emit(e.args[1])})"
    if k == "pow":
        return f"({_emit(e.args[0])})**{e.power}"
    if k == "call":
        return f"_{e.name}({_emit(e.args[0])})"
    raise ValueError(f"unknown node kind {k!r}")


@lru_cache(maxsize=512)
def _compile_components(f: FieldSpec, vectorized: bool):
    body = ", ".join(_emit(c) for c in f.components)
    source = f"def _field(x, u=None):\n    return [{body}]\n"
    env = dict(_VECTOR_ENV if vectorized else _SCALAR_ENV)
    exec(source, env)  # noqa: S102 - generated from a validated AST
    return env["_field"]


def field_function(f: FieldSpec):
    """Fast scalar-point callable: (x, u) -> list of floats."""
    return _compile_components(f, False)


def field_function_vectorized(f: FieldSpec):
    """Batch callable: columns of states -> (N, n) array of values.

    Accepts x with shape (n, N) (and u with shape (m, N) if m > 0).
    """
    raw = _compile_components(f, True)

    def _batched(x, u=None):
        vals = raw(x, u)
        n_pts = np.asarray(x[0]).shape[0] if np.ndim(x[0]) else 1
        cols = [np.broadcast_to(np.asarray(v, dtype=float), (n_pts,)) for v in vals]
        return np.column_stack(cols)

    return _batched


@lru_cache(maxsize=512)
def _compile_jacobian(f: FieldSpec):
    parts = _state_partials(f)
    rows = ", ".join(
        "[" + ", ".join(_emit(p) for p in row) + "]" for row in parts
    )
    source = f"def _jac(x, u=None):\n    return [{rows}]\n"
    env = dict(_SCALAR_ENV)
    exec(source, env)  # noqa: S102
    return env["_jac"]


def jacobian_function(f: FieldSpec):
    """Fast scalar-point Jacobian callable: (x, u) -> n x n nested lists."""
    return _compile_jacobian(f)
