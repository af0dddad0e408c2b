"""Core abstract syntax, the target of desugaring and input of all evaluators.

Every node caches two structural facts at construction time: its free
variables and whether it is syntactically deterministic (contains no
``Choose``, ``Exp`` or ``DistDraw`` node).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import InternalError
from .types import Type
from .values import Shape, render, render_field


class _Default:
    """Key of the fallback case in a numeric switch."""

    __slots__ = ()

    def __repr__(self):
        return "default"

    def __reduce__(self):
        return "DEFAULT"


DEFAULT = _Default()


def _meta(**kw):
    return field(init=False, compare=False, repr=False, **kw)


@dataclass(frozen=True)
class Expr:
    def __post_init__(self):
        object.__setattr__(self, "fv", frozenset(self._free_vars()))
        object.__setattr__(self, "det", self._deterministic())

    def children(self) -> tuple:
        return ()

    def _free_vars(self):
        out = set()
        for c in self.children():
            out |= c.fv
        return out

    def _deterministic(self) -> bool:
        return all(c.det for c in self.children())


@dataclass(frozen=True)
class Var(Expr):
    name: str
    fv: frozenset = _meta()
    det: bool = _meta()

    def _free_vars(self):
        return {self.name}


@dataclass(frozen=True)
class Const(Expr):
    value: object
    type: Type
    fv: frozenset = _meta()
    det: bool = _meta()


@dataclass(frozen=True)
class App(Expr):
    fun: str
    arg: Expr
    # neutral element for reducing a possibly-empty collection; filled in by elaboration
    neutral: object = None
    fv: frozenset = _meta()
    det: bool = _meta()

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Choose(Expr):
    branches: tuple  # ((Expr, Fraction), ...)
    fv: frozenset = _meta()
    det: bool = _meta()

    def children(self):
        return tuple(e for e, _ in self.branches)

    def _deterministic(self):
        return False


@dataclass(frozen=True)
class Exp(Expr):
    body: Expr
    fv: frozenset = _meta()
    det: bool = _meta()

    def children(self):
        return (self.body,)

    def _deterministic(self):
        return False


@dataclass(frozen=True)
class DistDraw(Expr):
    dist: str
    param: Expr
    fv: frozenset = _meta()
    det: bool = _meta()

    def children(self):
        return (self.param,)

    def _deterministic(self):
        return False


@dataclass(frozen=True)
class Let(Expr):
    bound: Expr
    name: str
    body: Expr
    fv: frozenset = _meta()
    det: bool = _meta()

    def children(self):
        return (self.bound, self.body)

    def _free_vars(self):
        return set(self.bound.fv) | (self.body.fv - {self.name})


@dataclass(frozen=True)
class NSwitch(Expr):
    scrutinee: Expr
    cases: tuple  # ((Fraction | int | DEFAULT, Expr), ...)
    fv: frozenset = _meta()
    det: bool = _meta()

    def children(self):
        return (self.scrutinee,) + tuple(e for _, e in self.cases)

    def branch(self, key) -> Optional[Expr]:
        default = None
        for k, e in self.cases:
            if k is DEFAULT:
                default = e
            elif k == key:
                return e
        return default


@dataclass(frozen=True)
class Iter(Expr):
    source: Expr
    name: str
    body: Expr
    shape: Shape
    fv: frozenset = _meta()
    det: bool = _meta()

    def children(self):
        return (self.source, self.body)

    def _free_vars(self):
        return set(self.source.fv) | (self.body.fv - {self.name})


@dataclass(frozen=True)
class Tuple(Expr):
    fields: tuple  # ((FieldId, Expr), ...)
    fv: frozenset = _meta()
    det: bool = _meta()

    def children(self):
        return tuple(e for _, e in self.fields)


@dataclass(frozen=True)
class Select(Expr):
    expr: Expr
    field: Union[int, str]
    fv: frozenset = _meta()
    det: bool = _meta()

    def children(self):
        return (self.expr,)


@dataclass(frozen=True)
class Cons(Expr):
    case: str
    expr: Expr
    fv: frozenset = _meta()
    det: bool = _meta()

    def children(self):
        return (self.expr,)


@dataclass(frozen=True)
class CSwitch(Expr):
    scrutinee: Expr
    cases: tuple  # ((CaseId, VarId, Expr), ...)
    default: Optional[Expr] = None
    fv: frozenset = _meta()
    det: bool = _meta()

    def children(self):
        out = (self.scrutinee,) + tuple(e for _, _, e in self.cases)
        return out + ((self.default,) if self.default is not None else ())

    def _free_vars(self):
        out = set(self.scrutinee.fv)
        for _, x, e in self.cases:
            out |= e.fv - {x}
        if self.default is not None:
            out |= self.default.fv
        return out

    def case(self, name):
        for c, x, e in self.cases:
            if c == name:
                return x, e
        return None


NODE_TYPES = (Var, Const, App, Choose, Exp, DistDraw, Let, NSwitch, Iter, Tuple, Select, Cons, CSwitch)


def s_deterministic(e: Expr) -> bool:
    return e.det


def free_vars(e: Expr) -> frozenset:
    return e.fv


def walk(e: Expr):
    yield e
    for c in e.children():
        yield from walk(c)


def validate(e: Expr) -> None:
    """Check the node invariants that constructors do not enforce."""
    for n in walk(e):
        if isinstance(n, Choose):
            if not n.branches or any(p <= 0 for _, p in n.branches):
                raise InternalError("choose weights must be positive")
            if sum(p for _, p in n.branches) != 1:
                raise InternalError("choose weights must sum to 1")
        elif isinstance(n, NSwitch):
            keys = [k for k, _ in n.cases]
            if len(keys) != len(set(keys)):
                raise InternalError("duplicate nswitch keys")
        elif isinstance(n, CSwitch):
            names = [c for c, _, _ in n.cases]
            if len(names) != len(set(names)):
                raise InternalError("duplicate cswitch cases")


# --- serialized form ----------------------------------------------------------

def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _num_text(k) -> str:
    return str(k) if isinstance(k, int) else f"{k.numerator}/{k.denominator}"


def to_sexpr(e: Expr) -> str:
    """Render as a parenthesized prefix form that :func:`from_sexpr` reads back."""
    from .types import to_sexpr as type_sexpr

    if isinstance(e, Var):
        return f"(var {e.name})"
    if isinstance(e, Const):
        return f"(const {_q(render(e.value))} {type_sexpr(e.type)})"
    if isinstance(e, App):
        tail = "" if e.neutral is None else f" {_q(render(e.neutral))}"
        return f"(app {_q(e.fun)} {to_sexpr(e.arg)}{tail})"
    if isinstance(e, Choose):
        return "(choose" + "".join(f" ({to_sexpr(b)} {_num_text(p)})" for b, p in e.branches) + ")"
    if isinstance(e, Exp):
        return f"(exp {to_sexpr(e.body)})"
    if isinstance(e, DistDraw):
        return f"(dist {e.dist} {to_sexpr(e.param)})"
    if isinstance(e, Let):
        return f"(let {to_sexpr(e.bound)} {e.name} {to_sexpr(e.body)})"
    if isinstance(e, NSwitch):
        cases = "".join(
            f" ({'default' if k is DEFAULT else _num_text(k)} {to_sexpr(b)})" for k, b in e.cases
        )
        return f"(nswitch {to_sexpr(e.scrutinee)}{cases})"
    if isinstance(e, Iter):
        return f"(iter {to_sexpr(e.source)} {e.name} {to_sexpr(e.body)} {e.shape})"
    if isinstance(e, Tuple):
        return "(tuple" + "".join(f" ({render_field(f)} {to_sexpr(x)})" for f, x in e.fields) + ")"
    if isinstance(e, Select):
        return f"(select {to_sexpr(e.expr)} {render_field(e.field)})"
    if isinstance(e, Cons):
        return f"(cons {e.case} {to_sexpr(e.expr)})"
    if isinstance(e, CSwitch):
        cases = "".join(f" ({c} {x} {to_sexpr(b)})" for c, x, b in e.cases)
        default = "" if e.default is None else f" (default {to_sexpr(e.default)})"
        return f"(cswitch {to_sexpr(e.scrutinee)}{cases}{default})"
    raise InternalError(f"not an expression: {e!r}")


_SEXPR_TOKEN = re.compile(r'\s*(?:(\()|(\))|"((?:[^"\\]|\\.)*)"|([^\s()"]+))')


def _read_tree(text: str):
    pos = 0
    stack: list[list] = [[]]
    while True:
        m = _SEXPR_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        pos = m.end()
        if m.group(1):
            stack.append([])
        elif m.group(2):
            done = stack.pop()
            stack[-1].append(done)
        elif m.group(3) is not None:
            stack[-1].append(("str", re.sub(r"\\(.)", r"\1", m.group(3))))
        else:
            stack[-1].append(m.group(4))
    if text[pos:].strip() or len(stack) != 1 or len(stack[0]) != 1:
        raise InternalError("malformed s-expression")
    return stack[0][0]


def _field(a: str):
    return int(a[1:]) if a.startswith("#") else a


def _number(a: str):
    return Fraction(a) if "/" in a else int(a)


def _type_from(tree) -> Type:
    from . import types as T

    if tree == "any":
        return T.ANY
    if tree == "none":
        return T.NONE
    head, *rest = tree
    if head == "num":
        return T.NumType(T.NumKind[rest[0].upper()])
    if head == "coll":
        return T.CollType(Shape(rest[0]), T.Mode[rest[1].upper()], _type_from(rest[2]))
    if head == "prod":
        return T.prod({_field(f): _type_from(t) for f, t in rest})
    if head == "sum":
        return T.sum_type({c: _type_from(t) for c, t in rest})
    raise InternalError(f"bad type form {tree!r}")


def _expr_from(tree) -> Expr:
    from .textio import read_value

    head, *rest = tree
    if head == "var":
        return Var(rest[0])
    if head == "const":
        return Const(read_value(rest[0][1]), _type_from(rest[1]))
    if head == "app":
        neutral = read_value(rest[2][1]) if len(rest) > 2 else None
        return App(rest[0][1], _expr_from(rest[1]), neutral)
    if head == "choose":
        return Choose(tuple((_expr_from(b), Fraction(p)) for b, p in rest))
    if head == "exp":
        return Exp(_expr_from(rest[0]))
    if head == "dist":
        return DistDraw(rest[0], _expr_from(rest[1]))
    if head == "let":
        return Let(_expr_from(rest[0]), rest[1], _expr_from(rest[2]))
    if head == "nswitch":
        cases = tuple((DEFAULT if k == "default" else _number(k), _expr_from(b)) for k, b in rest[1:])
        return NSwitch(_expr_from(rest[0]), cases)
    if head == "iter":
        return Iter(_expr_from(rest[0]), rest[1], _expr_from(rest[2]), Shape(rest[3]))
    if head == "tuple":
        return Tuple(tuple((_field(f), _expr_from(x)) for f, x in rest))
    if head == "select":
        return Select(_expr_from(rest[0]), _field(rest[1]))
    if head == "cons":
        return Cons(rest[0], _expr_from(rest[1]))
    if head == "cswitch":
        cases, default = [], None
        for c in rest[1:]:
            if c[0] == "default":
                default = _expr_from(c[1])
            else:
                cases.append((c[0], c[1], _expr_from(c[2])))
        return CSwitch(_expr_from(rest[0]), tuple(cases), default)
    raise InternalError(f"unknown node {head!r}")


def from_sexpr(text: str) -> Expr:
    return _expr_from(_read_tree(text))
