"""Parse tree of the concrete syntax, plus a printer back to source text."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from ..values import Shape

Pos = tuple  # (line, col)


@dataclass(frozen=True)
class Node:
    pass


@dataclass(frozen=True)
class Num(Node):
    value: object
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Name(Node):
    name: str
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Unary(Node):
    op: str  # "-" or "!"
    expr: Node
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Call(Node):
    name: str
    arg: Node
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Draw(Node):
    name: str
    arg: Node
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class ChooseS(Node):
    branches: tuple  # ((Node, Node weight), ...)
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Expect(Node):
    arg: Node
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Reduce(Node):
    op: str
    arg: Node
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class RecordS(Node):
    fields: tuple  # ((FieldId, Node), ...) in source order
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Block(Node):
    bindings: tuple  # ((name, Node), ...)
    result: Node
    pos: Pos = field(default=(0, 0), compare=False)
    implicit: bool = field(default=False, compare=False)  # result is the last bound name


@dataclass(frozen=True)
class SelectS(Node):
    expr: Node
    field: Union[int, str]
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class TagS(Node):
    case: str
    payload: Optional[Node]
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Ternary(Node):
    cond: Node
    then: Node
    other: Node
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class NumCase:
    keys: tuple  # rationals; empty tuple means the default case "_"
    body: Node


@dataclass(frozen=True)
class TagCase:
    case: Optional[str]  # None for the default case
    var: Optional[str]   # None when the payload is ignored
    body: Node


@dataclass(frozen=True)
class Switch(Node):
    scrutinee: Node
    cases: tuple  # NumCase... or TagCase...
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Item:
    """Display element: a single expression, or a range when ``hi`` is set."""

    expr: Node
    hi: Optional[Node] = None


@dataclass(frozen=True)
class Display(Node):
    shape: Shape
    items: tuple
    pos: Pos = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Gen:
    """Generator clause ``p1 <- p2 <- ... <- source``.

    Each pattern is a variable name, ``None`` for a wildcard, or a tuple of
    names for a draw without replacement.
    """

    patterns: tuple
    source: Node


@dataclass(frozen=True)
class Filter:
    cond: Node


@dataclass(frozen=True)
class Comprehension(Node):
    shape: Shape
    head: Optional[Node]  # None when the leftmost generator supplies the map clause
    clauses: tuple
    pos: Pos = field(default=(0, 0), compare=False)


# --- printer -------------------------------------------------------------------

_OPEN = {Shape.LIST: ("[", "]"), Shape.BAG: ("⟨", "⟩"), Shape.SET: ("{", "}")}
_SPELL = {"<-": "←", "->": "→", "/\\": "∧", "\\/": "∨", "<=": "≤", ">=": "≥", "!=": "≠", "!": "¬"}


def terminating_decimal(v: Fraction):
    """Exact decimal text of ``v`` when its expansion terminates, else None."""
    d, twos, fives = v.denominator, 0, 0
    while d % 2 == 0:
        d, twos = d // 2, twos + 1
    while d % 5 == 0:
        d, fives = d // 5, fives + 1
    if d != 1:
        return None
    k = max(twos, fives)
    if k == 0:
        return str(v.numerator)
    digits = str(abs(v.numerator) * 10 ** k // v.denominator).rjust(k + 1, "0")
    sign = "-" if v < 0 else ""
    return f"{sign}{digits[:-k]}.{digits[-k:]}"


def _num_text(v) -> str:
    if isinstance(v, Fraction):
        return terminating_decimal(v) or f"{v.numerator}/{v.denominator}"
    return str(v)


def _pattern(p) -> str:
    if p is None:
        return "_"
    if isinstance(p, tuple):
        return "{" + ", ".join(p) + "}"
    return p


def unparse(n: Node) -> str:
    """Fully parenthesized source text that parses back to an equal tree."""
    if isinstance(n, Num):
        text = _num_text(n.value)
        return f"({text})" if "/" in text or text.startswith("-") else text
    if isinstance(n, Name):
        return n.name
    if isinstance(n, BinOp):
        return f"({unparse(n.left)} {_SPELL.get(n.op, n.op)} {unparse(n.right)})"
    if isinstance(n, Unary):
        return f"({_SPELL.get(n.op, n.op)}{unparse(n.expr)})"
    if isinstance(n, Call):
        return f"{n.name}{_arg(n.arg)}"
    if isinstance(n, Draw):
        return f"~{n.name}{_arg(n.arg)}"
    if isinstance(n, ChooseS):
        return "~choose{" + "; ".join(f"{unparse(e)}: {unparse(w)}" for e, w in n.branches) + "}"
    if isinstance(n, Expect):
        return f"E{_arg(n.arg)}"
    if isinstance(n, Reduce):
        return f"({_SPELL.get(n.op, n.op)}){_arg(n.arg)}"
    if isinstance(n, RecordS):
        if not n.fields:
            return "()"
        parts = [f"{'#' + str(f) if isinstance(f, int) else f}: {unparse(e)}" for f, e in n.fields]
        return "(" + ", ".join(parts) + ")"
    if isinstance(n, Block):
        parts = [f"{x} := {unparse(e)}" for x, e in n.bindings] + [unparse(n.result)]
        return "(" + "; ".join(parts) + ")"
    if isinstance(n, SelectS):
        f = f"#{n.field}" if isinstance(n.field, int) else n.field
        return f"{unparse(n.expr)}.{f}"
    if isinstance(n, TagS):
        return f"@{n.case}" if n.payload is None else f"@{n.case}({unparse(n.payload)})"
    if isinstance(n, Ternary):
        return f"({unparse(n.cond)} ? {unparse(n.then)} : {unparse(n.other)})"
    if isinstance(n, Switch):
        cases = []
        for c in n.cases:
            if isinstance(c, NumCase):
                pat = ", ".join(_num_text(k) for k in c.keys) if c.keys else "_"
            elif c.case is None:
                pat = "_"
            else:
                pat = f"@{c.case}" + ("" if c.var is None else f"({c.var})")
            cases.append(f"{pat} → {unparse(c.body)}")
        return f"({unparse(n.scrutinee)} ? {{ " + "; ".join(cases) + " })"
    if isinstance(n, Display):
        lo, hi = _OPEN[n.shape]
        parts = [unparse(i.expr) if i.hi is None else f"{unparse(i.expr)} .. {unparse(i.hi)}" for i in n.items]
        return lo + ", ".join(parts) + hi
    if isinstance(n, Comprehension):
        lo, hi = _OPEN[n.shape]
        clauses = []
        for c in n.clauses:
            if isinstance(c, Gen):
                clauses.append(" ← ".join(_pattern(p) for p in c.patterns) + f" ← {unparse(c.source)}")
            else:
                clauses.append(unparse(c.cond))
        if n.head is None:
            first, rest = clauses[0], clauses[1:]
            return lo + first + (" | " + "; ".join(rest) if rest else "") + hi
        return lo + unparse(n.head) + " | " + "; ".join(clauses) + hi
    raise TypeError(f"not a surface node: {n!r}")


def _arg(n: Node) -> str:
    text = unparse(n)
    if isinstance(n, (RecordS, Block, Display, Comprehension)):
        return text
    return f"({text})"
