"""Scalar fields over chart variables of J^1Q and TQ.

A field is an immutable expression DAG over the symbols ``t``, ``q1..qm``,
``v1..vm`` and, on the tangent bundle, ``v0`` (the time component of the
tangent vector).  On TQ the coordinates read x^0 = t, x^i = q^i and the
tangent vector is (v0, v1..vm).

Derivatives are taken on the tree.  Evaluation is vectorised over the rows
of a sample matrix whose columns are laid out as

    [t, q1..qm, v1..vm, v0]

(see :func:`ncols`).  Jet points carry ``nan`` in the ``v0`` column, so a
tangent-only field evaluated on J^1Q fails loudly instead of silently
picking a value.
"""

from __future__ import annotations

import math
import numbers
from collections import OrderedDict
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, DomainError, NonFiniteValue

__all__ = [
    "Sym", "T", "TDOT", "Q", "V", "ncols",
    "ScalarField", "Vars", "const", "sin", "cos", "exp", "log", "sqrt", "atan",
    "evaluate_fields", "JetPoint", "TangentPoint", "jet_matrix", "tangent_matrix",
]


# ---------------------------------------------------------------------------
# symbols


@dataclass(frozen=True, order=True)
class Sym:
    kind: str  # 't', 'q', 'v' or 'tdot'
    index: int = 0

    def column(self, dim: int) -> int:
        if self.kind == "t":
            return 0
        if self.kind == "q":
            return 1 + self.index
        if self.kind == "v":
            return 1 + dim + self.index
        return 1 + 2 * dim

    @property
    def name(self) -> str:
        if self.kind == "t":
            return "t"
        if self.kind == "tdot":
            return "v0"
        return f"{self.kind}{self.index + 1}"

    def __repr__(self):
        return self.name


T = Sym("t")
TDOT = Sym("tdot")


def Q(i: int) -> Sym:
    return Sym("q", i)


def V(i: int) -> Sym:
    return Sym("v", i)


def ncols(dim: int) -> int:
    return 2 * dim + 2


# ---------------------------------------------------------------------------
# expression nodes


class Node:
    __slots__ = ("_dcache", "_free", "__weakref__")
    prec = 9

    def __init__(self):
        self._dcache = {}
        self._free = None

    def children(self) -> tuple:
        return ()

    @property
    def free(self) -> frozenset:
        if self._free is None:
            out = set()
            for c in self.children():
                out |= c.free
            self._free = frozenset(out)
        return self._free


class Const(Node):
    __slots__ = ("value",)

    def __init__(self, value: float):
        super().__init__()
        self.value = float(value)
        self._free = frozenset()

    @property
    def prec(self):
        return 3 if self.value < 0 else 9


class Var(Node):
    __slots__ = ("sym",)

    def __init__(self, sym: Sym):
        super().__init__()
        self.sym = sym
        self._free = frozenset((sym,))


class Add(Node):
    __slots__ = ("terms",)
    prec = 1

    def __init__(self, terms):
        super().__init__()
        self.terms = tuple(terms)

    def children(self):
        return self.terms


class Mul(Node):
    __slots__ = ("factors",)
    prec = 2

    def __init__(self, factors):
        super().__init__()
        self.factors = tuple(factors)

    def children(self):
        return self.factors


class Div(Node):
    __slots__ = ("num", "den")
    prec = 2

    def __init__(self, num, den):
        super().__init__()
        self.num, self.den = num, den

    def children(self):
        return (self.num, self.den)


class Neg(Node):
    __slots__ = ("arg",)
    prec = 3

    def __init__(self, arg):
        super().__init__()
        self.arg = arg

    def children(self):
        return (self.arg,)


class Pow(Node):
    __slots__ = ("base", "expo")
    prec = 4

    def __init__(self, base, expo):
        super().__init__()
        self.base, self.expo = base, expo

    def children(self):
        return (self.base, self.expo)


class Func(Node):
    __slots__ = ("name", "arg")

    def __init__(self, name, arg):
        super().__init__()
        self.name, self.arg = name, arg

    def children(self):
        return (self.arg,)


FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "atan")
ZERO = Const(0.0)
ONE = Const(1.0)


def _is_const(n: Node, value=None) -> bool:
    return isinstance(n, Const) and (value is None or n.value == value)


def _is_int(x: float) -> bool:
    return math.isfinite(x) and float(x).is_integer()


def _fold_pow(a: float, e: float):
    if a < 0 and not _is_int(e):
        return None
    if a == 0 and e < 0:
        return None
    try:
        r = a**e
    except OverflowError:
        return None
    return r if isinstance(r, float) and math.isfinite(r) else None


def _fold_func(name: str, a: float):
    if name == "log" and a <= 0:
        return None
    if name == "sqrt" and a < 0:
        return None
    try:
        r = getattr(math, name)(a)
    except (OverflowError, ValueError):
        return None
    return r if math.isfinite(r) else None


# smart constructors: constant folding and 0/1 identities only

def n_add(*terms: Node) -> Node:
    flat, c = [], 0.0
    for t in terms:
        if isinstance(t, Add):
            parts = t.terms
        else:
            parts = (t,)
        for p in parts:
            if isinstance(p, Const):
                c += p.value
            else:
                flat.append(p)
    if c != 0.0:
        flat.append(Const(c))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Add(flat)


def n_neg(a: Node) -> Node:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    if isinstance(a, Mul) and isinstance(a.factors[0], Const):
        return n_mul(Const(-a.factors[0].value), *a.factors[1:])
    return Neg(a)


def n_sub(a: Node, b: Node) -> Node:
    return n_add(a, n_neg(b))


def n_mul(*factors: Node) -> Node:
    flat, c = [], 1.0
    for f in factors:
        parts = f.factors if isinstance(f, Mul) else (f,)
        for p in parts:
            if isinstance(p, Const):
                c *= p.value
            elif isinstance(p, Neg):
                c = -c
                flat.append(p.arg)
            else:
                flat.append(p)
    if c == 0.0:
        return ZERO
    if not flat:
        return Const(c)
    body = flat[0] if len(flat) == 1 else Mul(flat)
    if c == 1.0:
        return body
    if c == -1.0:
        return Neg(body)
    return Mul((Const(c), *flat))


def n_div(a: Node, b: Node) -> Node:
    if _is_const(b, 1.0):
        return a
    if _is_const(a, 0.0):
        return ZERO
    if isinstance(b, Const) and b.value != 0.0:
        if isinstance(a, Const):
            return Const(a.value / b.value)
        return n_mul(Const(1.0 / b.value), a)
    return Div(a, b)


def n_pow(a: Node, e: Node) -> Node:
    if _is_const(e, 0.0):
        return ONE
    if _is_const(e, 1.0):
        return a
    if _is_const(a, 1.0):
        return ONE
    if isinstance(a, Const) and isinstance(e, Const):
        r = _fold_pow(a.value, e.value)
        if r is not None:
            return Const(r)
    return Pow(a, e)


def n_func(name: str, a: Node) -> Node:
    if name not in FUNCTIONS:
        raise ValueError(f"unknown function {name!r}")
    if isinstance(a, Const):
        r = _fold_func(name, a.value)
        if r is not None:
            return Const(r)
    return Func(name, a)


# ---------------------------------------------------------------------------
# differentiation and substitution


def diff(node: Node, sym: Sym) -> Node:
    if sym not in node.free:
        return ZERO
    hit = node._dcache.get(sym)
    if hit is not None:
        return hit
    out = _diff(node, sym)
    node._dcache[sym] = out
    return out


def _diff(n: Node, s: Sym) -> Node:
    if isinstance(n, Var):
        return ONE
    if isinstance(n, Add):
        return n_add(*(diff(t, s) for t in n.terms))
    if isinstance(n, Neg):
        return n_neg(diff(n.arg, s))
    if isinstance(n, Mul):
        terms = []
        for i, f in enumerate(n.factors):
            d = diff(f, s)
            if _is_const(d, 0.0):
                continue
            terms.append(n_mul(*n.factors[:i], d, *n.factors[i + 1:]))
        return n_add(*terms)
    if isinstance(n, Div):
        da, db = diff(n.num, s), diff(n.den, s)
        return n_sub(n_div(da, n.den), n_div(n_mul(n.num, db), n_pow(n.den, Const(2.0))))
    if isinstance(n, Pow):
        a, e = n.base, n.expo
        da, de = diff(a, s), diff(e, s)
        if isinstance(e, Const):
            return n_mul(e, n_pow(a, Const(e.value - 1.0)), da)
        if isinstance(a, Const):
            return n_mul(n, Const(math.log(a.value)), de)
        return n_mul(n, n_add(n_mul(de, n_func("log", a)), n_div(n_mul(e, da), a)))
    if isinstance(n, Func):
        a = n.arg
        da = diff(a, s)
        if n.name == "sin":
            inner = n_func("cos", a)
        elif n.name == "cos":
            inner = n_neg(n_func("sin", a))
        elif n.name == "exp":
            inner = n
        elif n.name == "log":
            return n_div(da, a)
        elif n.name == "sqrt":
            return n_div(da, n_mul(Const(2.0), n))
        else:  # atan
            return n_div(da, n_add(ONE, n_pow(a, Const(2.0))))
        return n_mul(inner, da)
    raise TypeError(type(n))


def substitute(node: Node, mapping: Mapping[Sym, Node], _memo=None) -> Node:
    if _memo is None:
        _memo = {}
    key = id(node)
    if key in _memo:
        return _memo[key]
    if not (node.free & mapping.keys()):
        out = node
    elif isinstance(node, Var):
        out = mapping[node.sym]
    else:
        kids = [substitute(c, mapping, _memo) for c in node.children()]
        if isinstance(node, Add):
            out = n_add(*kids)
        elif isinstance(node, Mul):
            out = n_mul(*kids)
        elif isinstance(node, Div):
            out = n_div(*kids)
        elif isinstance(node, Neg):
            out = n_neg(kids[0])
        elif isinstance(node, Pow):
            out = n_pow(*kids)
        elif isinstance(node, Func):
            out = n_func(node.name, kids[0])
        else:
            raise TypeError(type(node))
    _memo[key] = out
    return out


# ---------------------------------------------------------------------------
# text form (round-trips through the parser)


def _num(x: float) -> str:
    r = repr(float(x))
    return r[:-2] if r.endswith(".0") else r


def to_text(n: Node) -> str:
    if isinstance(n, Const):
        return _num(n.value)
    if isinstance(n, Var):
        return n.sym.name
    if isinstance(n, Add):
        out = _wrap(n.terms[0], 1)
        for t in n.terms[1:]:
            if isinstance(t, Neg):
                out += " - " + _wrap(t.arg, 2)
            elif isinstance(t, Const) and t.value < 0:
                out += " - " + _num(-t.value)
            elif isinstance(t, Mul) and _is_const(t.factors[0]) and t.factors[0].value < 0:
                out += " - " + to_text(n_neg(t))
            else:
                out += " + " + _wrap(t, 1)
        return out
    if isinstance(n, Mul):
        return "*".join(_wrap(f, 3) for f in n.factors)
    if isinstance(n, Div):
        return _wrap(n.num, 2) + "/" + _wrap(n.den, 3)
    if isinstance(n, Neg):
        return "-" + _wrap(n.arg, 3)
    if isinstance(n, Pow):
        return _wrap(n.base, 5) + "^" + _wrap(n.expo, 3)
    if isinstance(n, Func):
        return f"{n.name}({to_text(n.arg)})"
    raise TypeError(type(n))


def _wrap(n: Node, need: int) -> str:
    s = to_text(n)
    return s if n.prec >= need else f"({s})"


# ---------------------------------------------------------------------------
# vectorised evaluation via generated numpy code


class _EvalContext:
    """Domain checks used by generated evaluators.

    In strict mode any invalid element raises :class:`DomainError`.  In guard
    mode invalid or near-singular rows (within ``margin``) are flagged in
    ``bad`` and evaluation proceeds.
    """

    def __init__(self, guard: bool, margin: float):
        self.guard = guard
        self.margin = margin
        self.bad = None

    def _flag(self, invalid, near, what):
        if self.guard:
            m = np.asarray(near)
            self.bad = m if self.bad is None else (self.bad | m)
        elif np.any(invalid):
            raise DomainError(what)

    def div(self, a, b):
        self._flag(b == 0, np.abs(b) < self.margin, "division by zero")
        return a / b

    def log(self, a):
        self._flag(a <= 0, a < self.margin, "log of a non-positive number")
        return np.log(a)

    def sqrt(self, a):
        self._flag(a < 0, a < self.margin, "sqrt of a negative number")
        return np.sqrt(a)

    def pow(self, a, e):
        e = np.asarray(e, dtype=float)
        nonint = e != np.round(e)
        invalid = ((a < 0) & nonint) | ((a == 0) & (e < 0))
        near = ((a < self.margin) & nonint) | ((np.abs(a) < self.margin) & (e < 0))
        self._flag(invalid, near, "invalid power")
        return np.power(a, e)


def _codegen(nodes: Sequence[Node], dim: int):
    lines, names = [], {}

    def emit(n: Node) -> str:
        key = id(n)
        if key in names:
            return names[key]
        if isinstance(n, Const):
            return repr(n.value)
        if isinstance(n, Var):
            if n.sym.kind in ("q", "v") and n.sym.index >= dim:
                raise DimensionMismatch(f"symbol {n.sym.name} not available for m={dim}")
            expr = f"X[:, {n.sym.column(dim)}]"
        elif isinstance(n, Add):
            expr = " + ".join(emit(t) for t in n.terms)
        elif isinstance(n, Mul):
            expr = " * ".join(emit(f) for f in n.factors)
        elif isinstance(n, Div):
            expr = f"C.div({emit(n.num)}, {emit(n.den)})"
        elif isinstance(n, Neg):
            expr = f"-({emit(n.arg)})"
        elif isinstance(n, Pow):
            expr = f"C.pow({emit(n.base)}, {emit(n.expo)})"
        elif isinstance(n, Func):
            if n.name in ("log", "sqrt"):
                expr = f"C.{n.name}({emit(n.arg)})"
            elif n.name == "atan":
                expr = f"np.arctan({emit(n.arg)})"
            else:
                expr = f"np.{n.name}({emit(n.arg)})"
        else:
            raise TypeError(type(n))
        name = f"n{len(lines)}"
        lines.append(f"    {name} = {expr}")
        names[key] = name
        return name

    outs = [emit(n) for n in nodes]
    src = "def _f(X, C):\n" + "\n".join(lines) + ("\n" if lines else "")
    src += "    return (" + "".join(o + ", " for o in outs) + ")\n"
    ns = {"np": np}
    exec(compile(src, "<jetflow-field>", "exec"), ns)
    return ns["_f"]


_COMPILED: "OrderedDict[tuple, tuple]" = OrderedDict()
_CACHE_SIZE = 4096


def _compiled(nodes: Sequence[Node], dim: int):
    key = (dim, *map(id, nodes))
    hit = _COMPILED.get(key)
    if hit is not None:
        _COMPILED.move_to_end(key)
        return hit[0]
    fn = _codegen(nodes, dim)
    _COMPILED[key] = (fn, tuple(nodes))  # keep nodes alive so ids stay unique
    if len(_COMPILED) > _CACHE_SIZE:
        _COMPILED.popitem(last=False)
    return fn


def evaluate_fields(fields: Sequence["ScalarField"], X, *, guard=False, margin=1e-3):
    """Evaluate several fields on the rows of ``X``.

    Returns an array of shape ``(len(fields), N)``; with ``guard=True`` returns
    ``(values, bad_rows)`` instead of raising on the domain boundary.
    """
    if not fields:
        X = np.atleast_2d(X)
        out = np.zeros((0, X.shape[0]))
        return (out, np.zeros(X.shape[0], bool)) if guard else out
    dim = fields[0].dim
    for f in fields:
        if f.dim != dim:
            raise DimensionMismatch("fields of different dimension")
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != ncols(dim):
        raise DimensionMismatch(f"sample matrix has {X.shape[1]} columns, expected {ncols(dim)}")
    fn = _compiled([f.node for f in fields], dim)
    ctx = _EvalContext(guard, margin)
    with np.errstate(all="ignore"):
        vals = fn(X, ctx)
    out = np.empty((len(fields), X.shape[0]))
    for k, v in enumerate(vals):
        out[k] = v
    finite = np.isfinite(out).all(axis=0)
    if guard:
        bad = ~finite if ctx.bad is None else (ctx.bad | ~finite)
        return out, np.broadcast_to(bad, (X.shape[0],)).copy()
    if not finite.all():
        raise NonFiniteValue("non-finite field value")
    return out


# ---------------------------------------------------------------------------
# public field type


def _as_node(x, dim):
    if isinstance(x, ScalarField):
        if x.dim != dim:
            raise DimensionMismatch(f"cannot combine fields of dim {x.dim} and {dim}")
        return x.node
    if isinstance(x, numbers.Real):
        return Const(float(x))
    if isinstance(x, Node):
        return x
    raise TypeError(f"cannot use {type(x).__name__} as a field")


class ScalarField:
    """A differentiable expression in (t, q, v[, v0]) for fibre dimension ``dim``."""

    __slots__ = ("node", "dim")

    def __init__(self, node: Node, dim: int):
        if dim < 0:
            raise DimensionMismatch("negative dimension")
        for s in node.free:
            if s.kind in ("q", "v") and s.index >= dim:
                raise DimensionMismatch(f"symbol {s.name} not available for m={dim}")
        object.__setattr__(self, "node", node)
        object.__setattr__(self, "dim", dim)

    def __setattr__(self, *_):
        raise AttributeError("ScalarField is immutable")

    # construction ----------------------------------------------------------
    @classmethod
    def constant(cls, value: float, dim: int) -> "ScalarField":
        return cls(Const(value), dim)

    @classmethod
    def symbol(cls, sym: Sym, dim: int) -> "ScalarField":
        return cls(Var(sym), dim)

    # algebra -----------------------------------------------------------------
    def _bin(self, other, op, swap=False):
        a, b = self.node, _as_node(other, self.dim)
        if swap:
            a, b = b, a
        return ScalarField(op(a, b), self.dim)

    def __add__(self, o):
        return self._bin(o, n_add)

    def __radd__(self, o):
        return self._bin(o, n_add, True)

    def __sub__(self, o):
        return self._bin(o, n_sub)

    def __rsub__(self, o):
        return self._bin(o, n_sub, True)

    def __mul__(self, o):
        return self._bin(o, n_mul)

    def __rmul__(self, o):
        return self._bin(o, n_mul, True)

    def __truediv__(self, o):
        return self._bin(o, n_div)

    def __rtruediv__(self, o):
        return self._bin(o, n_div, True)

    def __pow__(self, o):
        return self._bin(o, n_pow)

    def __rpow__(self, o):
        return self._bin(o, n_pow, True)

    def __neg__(self):
        return ScalarField(n_neg(self.node), self.dim)

    def __pos__(self):
        return self

    # calculus ----------------------------------------------------------------
    def partial(self, sym: Sym) -> "ScalarField":
        return ScalarField(diff(self.node, sym), self.dim)

    def subs(self, mapping: Mapping[Sym, "ScalarField | float"], dim: int | None = None):
        """Simultaneous substitution; ``dim`` sets the dimension of the result."""
        dim = self.dim if dim is None else dim
        nm = {s: _as_node(v, dim) if not isinstance(v, ScalarField) else v.node
              for s, v in mapping.items()}
        return ScalarField(substitute(self.node, nm), dim)

    # inspection --------------------------------------------------------------
    @property
    def free_symbols(self) -> frozenset:
        return self.node.free

    def uses(self, kind: str) -> bool:
        return any(s.kind == kind for s in self.node.free)

    @property
    def is_constant(self) -> bool:
        return isinstance(self.node, Const)

    @property
    def is_zero(self) -> bool:
        return _is_const(self.node, 0.0)

    def to_text(self) -> str:
        return to_text(self.node)

    __str__ = to_text

    def __repr__(self):
        return f"ScalarField({self.to_text()!r}, dim={self.dim})"

    # evaluation --------------------------------------------------------------
    def evaluate(self, X, **kw):
        out = evaluate_fields([self], X, **kw)
        if kw.get("guard"):
            return out[0][0], out[1]
        return out[0]

    def __call__(self, t=0.0, q=(), v=(), tdot=float("nan")) -> float:
        row = _row(self.dim, t, q, v, tdot)
        return float(evaluate_fields([self], row[None, :])[0, 0])

    def at(self, p: "JetPoint | TangentPoint") -> float:
        if isinstance(p, TangentPoint):
            return self(p.x[0], p.x[1:], p.xdot[1:], p.xdot[0])
        if p.dim != self.dim:
            raise DimensionMismatch("point and field dimensions differ")
        return self(p.t, p.q, p.v)


def const(value: float, dim: int) -> ScalarField:
    return ScalarField.constant(value, dim)


def _fn(name):
    def f(x: ScalarField) -> ScalarField:
        return ScalarField(n_func(name, x.node), x.dim)
    f.__name__ = name
    return f


sin, cos, exp, log, sqrt, atan = (_fn(n) for n in FUNCTIONS)


class Vars:
    """Coordinate fields for fibre dimension ``m``: ``t``, ``q[i]``, ``v[i]``, ``tdot``."""

    def __init__(self, m: int):
        self.m = m
        self.t = ScalarField.symbol(T, m)
        self.q = tuple(ScalarField.symbol(Q(i), m) for i in range(m))
        self.v = tuple(ScalarField.symbol(V(i), m) for i in range(m))
        self.tdot = ScalarField.symbol(TDOT, m)
        self.zero = const(0.0, m)
        self.one = const(1.0, m)

    def x(self, mu: int) -> ScalarField:
        """Tangent-bundle coordinate x^mu (x^0 = t)."""
        return self.t if mu == 0 else self.q[mu - 1]

    def xdot(self, mu: int) -> ScalarField:
        return self.tdot if mu == 0 else self.v[mu - 1]


def xsym(mu: int) -> Sym:
    return T if mu == 0 else Q(mu - 1)


def xdotsym(mu: int) -> Sym:
    return TDOT if mu == 0 else V(mu - 1)


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class JetPoint:
    t: float
    q: tuple
    v: tuple

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(float(x) for x in self.q))
        object.__setattr__(self, "v", tuple(float(x) for x in self.v))
        if len(self.q) != len(self.v):
            raise DimensionMismatch("q and v lengths differ")
        if not all(math.isfinite(x) for x in (self.t, *self.q, *self.v)):
            raise ValueError("non-finite jet point")

    @property
    def dim(self) -> int:
        return len(self.q)

    def row(self) -> np.ndarray:
        return _row(self.dim, self.t, self.q, self.v, float("nan"))


@dataclass(frozen=True)
class TangentPoint:
    x: tuple
    xdot: tuple

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(a) for a in self.x))
        object.__setattr__(self, "xdot", tuple(float(a) for a in self.xdot))
        if len(self.x) != len(self.xdot) or len(self.x) < 1:
            raise DimensionMismatch("x and xdot lengths differ")
        if not all(math.isfinite(a) for a in (*self.x, *self.xdot)):
            raise ValueError("non-finite tangent point")

    @property
    def dim(self) -> int:
        return len(self.x) - 1

    def row(self) -> np.ndarray:
        return _row(self.dim, self.x[0], self.x[1:], self.xdot[1:], self.xdot[0])

    @classmethod
    def from_jet(cls, p: JetPoint) -> "TangentPoint":
        """The canonical imbedding J^1Q -> TQ: (t, q, v) -> (t, q, 1, v)."""
        return cls((p.t, *p.q), (1.0, *p.v))


def _row(dim, t, q, v, tdot):
    q, v = tuple(q), tuple(v)
    if len(q) != dim or len(v) != dim:
        raise DimensionMismatch(f"expected {dim} coordinates")
    return np.array([t, *q, *v, tdot], dtype=float)


def jet_matrix(t, q, v) -> np.ndarray:
    """Stack jet coordinates (arrays of shape (N,), (N, m), (N, m)) into a sample matrix."""
    t = np.asarray(t, float).reshape(-1)
    q = np.asarray(q, float).reshape(t.size, -1)
    v = np.asarray(v, float).reshape(t.size, -1)
    return np.column_stack([t, q, v, np.full(t.size, np.nan)])


def tangent_matrix(x, xdot) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, float))
    xdot = np.atleast_2d(np.asarray(xdot, float))
    return np.column_stack([x[:, 0], x[:, 1:], xdot[:, 1:], xdot[:, 0]])
