"""Translation of the surface tree into core expressions."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .. import ast as A
from ..builtins import DISTRIBUTIONS, FUNCTIONS
from ..errors import DesugarError
from ..types import NONE, Mode, coll, least_type_of
from ..values import NAN, Shape, coll_convert, empty, make_coll, num_arith
from . import surface as S

OPERATORS = {
    "+": "+", "-": "-", "*": "*", "/": "/", "//": "//", "\\\\": "\\",
    "=": "=", "!=": "!=", "<": "<", "<=": "<=", ">": ">", ">=": ">=",
    "/\\": "min", "\\/": "max",
}

_CONVERT = {Shape.BAG: "$asbag", Shape.SET: "$asset"}
_SHAPE_ORDER = {Shape.LIST: 0, Shape.BAG: 1, Shape.SET: 2}


def _fail(msg: str, node=None):
    pos = getattr(node, "pos", None) or (None, None)
    raise DesugarError(msg, *pos)


def pair(a: A.Expr, b: A.Expr) -> A.Tuple:
    return A.Tuple(((1, a), (2, b)))


def tuple_of(items: Iterable[A.Expr]) -> A.Tuple:
    return A.Tuple(tuple((i, e) for i, e in enumerate(items, 1)))


UNIT = A.Tuple(())


class Desugarer:
    def __init__(self, free: Iterable[str] = ()):
        self.free = frozenset(free)
        self.counter = 0

    def fresh(self, stem: str) -> str:
        self.counter += 1
        return f"${stem}{self.counter}"

    def run(self, node: S.Node) -> A.Expr:
        e = self.expr(node, self.free)
        A.validate(e)
        return e

    # --- expressions -------------------------------------------------------------

    def expr(self, n: S.Node, scope: frozenset) -> A.Expr:
        method = getattr(self, "_" + type(n).__name__)
        return method(n, scope)

    def _Num(self, n: S.Num, scope):
        return const(n.value)

    def _Name(self, n: S.Name, scope):
        if n.name not in scope:
            hint = " (functions must be applied to a bracketed argument)" if n.name in FUNCTIONS else ""
            _fail(f"unbound variable {n.name}{hint}", n)
        return A.Var(n.name)

    def _BinOp(self, n: S.BinOp, scope):
        return A.App(OPERATORS[n.op], pair(self.expr(n.left, scope), self.expr(n.right, scope)))

    def _Unary(self, n: S.Unary, scope):
        inner = self.expr(n.expr, scope)
        if n.op == "!":
            return A.App("not", inner)
        if isinstance(inner, A.Const) and isinstance(n.expr, S.Num):
            return const(num_arith("-", 0, inner.value))
        return A.App("neg", inner)

    def _Call(self, n: S.Call, scope):
        b = FUNCTIONS.get(n.name)
        if b is None or b.internal:
            if n.name in DISTRIBUTIONS:
                _fail(f"{n.name} is a distribution; write ~{n.name}(...)", n)
            _fail(f"unknown function {n.name}", n)
        return A.App(n.name, self.expr(n.arg, scope))

    def _Draw(self, n: S.Draw, scope):
        if n.name not in DISTRIBUTIONS:
            _fail(f"unknown distribution ~{n.name}", n)
        return A.DistDraw(n.name, self.expr(n.arg, scope))

    def _ChooseS(self, n: S.ChooseS, scope):
        branches = []
        for e, w in n.branches:
            p = fold_constant(self.expr(w, scope))
            if p is None or p is NAN:
                _fail("choice probabilities must be constant numbers", n)
            if p <= 0:
                _fail("choice probabilities must be positive", n)
            branches.append((self.expr(e, scope), Fraction(p)))
        if sum(p for _, p in branches) != 1:
            _fail(f"choice probabilities sum to {sum(p for _, p in branches)}, not 1", n)
        return A.Choose(tuple(branches))

    def _Expect(self, n: S.Expect, scope):
        return A.Exp(self.expr(n.arg, scope))

    def _Reduce(self, n: S.Reduce, scope):
        return A.App(OPERATORS[n.op], self.expr(n.arg, scope))

    def _RecordS(self, n: S.RecordS, scope):
        return A.Tuple(tuple((f, self.expr(e, scope)) for f, e in n.fields))

    def _Block(self, n: S.Block, scope):
        return self.bindings(list(n.bindings), n.result, scope)

    def bindings(self, items: list, result: S.Node, scope) -> A.Expr:
        if not items:
            return self.expr(result, scope)
        (name, rhs), rest = items[0], items[1:]
        bound = self.expr(rhs, scope)
        return A.Let(bound, name, self.bindings(rest, result, scope | {name}))

    def _SelectS(self, n: S.SelectS, scope):
        return A.Select(self.expr(n.expr, scope), n.field)

    def _TagS(self, n: S.TagS, scope):
        payload = UNIT if n.payload is None else self.expr(n.payload, scope)
        return A.Cons(n.case, payload)

    def _Ternary(self, n: S.Ternary, scope):
        return A.NSwitch(self.expr(n.cond, scope),
                         ((1, self.expr(n.then, scope)), (0, self.expr(n.other, scope))))

    def _Switch(self, n: S.Switch, scope):
        scrutinee = self.expr(n.scrutinee, scope)
        if isinstance(n.cases[0], S.NumCase) or any(isinstance(c, S.NumCase) for c in n.cases):
            cases, seen = [], set()
            for c in n.cases:
                for k in (c.keys or (A.DEFAULT,)):
                    if k in seen:
                        _fail(f"duplicate switch case {k}", n)
                    seen.add(k)
                    cases.append((k, self.expr(c.body, scope)))
            return A.NSwitch(scrutinee, tuple(cases))
        cases, default, seen = [], None, set()
        for c in n.cases:
            if c.case is None:
                default = self.expr(c.body, scope)
                continue
            if c.case in seen:
                _fail(f"duplicate switch case @{c.case}", n)
            seen.add(c.case)
            var = c.var if c.var is not None else self.fresh("w")
            cases.append((c.case, var, self.expr(c.body, scope | {var})))
        return A.CSwitch(scrutinee, tuple(cases), default)

    # --- collections -----------------------------------------------------------

    def _Display(self, n: S.Display, scope):
        parts = []  # ("one", Expr) or ("range", lo, hi)
        for item in n.items:
            lo = self.expr(item.expr, scope)
            if item.hi is None:
                parts.append(("one", lo))
            else:
                parts.append(("range", lo, self.expr(item.hi, scope)))
        literal = []
        for part in parts:
            if not all(isinstance(e, A.Const) for e in part[1:]):
                literal = None
                break
            if part[0] == "one":
                literal.append(part[1].value)
            else:
                lo, hi = part[1].value, part[2].value
                for bound in (lo, hi):
                    if bound is not NAN and type(bound) is not int:
                        _fail(f"range bounds must be integers, got {bound}", n)
                if lo is not NAN and hi is not NAN:
                    literal.extend(range(lo, hi + 1))
        if literal is not None:
            return const(make_coll(n.shape, literal))
        pieces, singles = [], []
        for part in parts:
            if part[0] == "one":
                singles.append(part[1])
                continue
            if singles:
                pieces.append(A.App(f"${n.shape}", tuple_of(singles)))
                singles = []
            r = A.App("$range", pair(part[1], part[2]))
            pieces.append(r if n.shape is Shape.LIST else A.App(_CONVERT[n.shape], r))
        if singles:
            pieces.append(A.App(f"${n.shape}", tuple_of(singles)))
        out = pieces[0]
        for p in pieces[1:]:
            out = A.App("+", pair(out, p))
        return out

    def _Comprehension(self, n: S.Comprehension, scope):
        clauses = list(n.clauses)
        head = n.head
        gens = []
        if head is None:
            first = clauses.pop(0)
            lead = first.patterns[0]
            if isinstance(lead, tuple):
                _fail("a draw without replacement cannot stand in place of the map clause", n)
            if lead is None:
                lead = self.fresh("w")
                first = S.Gen((lead,) + first.patterns[1:], first.source)
            head = S.Name(lead, n.pos)
            clauses.insert(0, first)
        for c in clauses:
            if isinstance(c, S.Filter):
                gens.append(c)
                continue
            # p1 <- p2 <- ... <- pk <- src  ==  pk <- src; ...; p1 <- p2
            pats = [p if p is not None else self.fresh("w") for p in c.patterns]
            for p in pats[1:]:
                if isinstance(p, tuple):
                    _fail("a draw without replacement cannot be a source of another generator", n)
            source = c.source
            chain = []
            for p in reversed(pats):
                chain.append((p, source))
                source = S.Name(p, n.pos) if isinstance(p, str) else None
            gens.extend(chain)
        return self.clauses(n, gens, head, scope)

    def clauses(self, n: S.Comprehension, gens: list, head: S.Node, scope) -> A.Expr:
        shape = n.shape
        if not gens:
            return A.App(f"${shape}", tuple_of([self.expr(head, scope)]))
        first, rest = gens[0], gens[1:]
        if isinstance(first, S.Filter):
            cond = self.expr(first.cond, scope)
            nothing = A.Const(empty(shape), coll(shape, Mode.OPT, NONE))
            return A.NSwitch(cond, ((1, self.clauses(n, rest, head, scope)), (0, nothing)))
        pattern, source = first
        src = self.convert(self.expr(source, scope), shape, n)
        if isinstance(pattern, str):
            return A.Iter(src, pattern, self.clauses(n, rest, head, scope | {pattern}), shape)
        if shape is Shape.LIST:
            _fail("draws without replacement need a bag or set comprehension", n)
        pool = self.fresh("s")
        inner_scope = scope | {pool} | set(pattern)
        body = self.clauses(n, rest, head, inner_scope)
        remaining: A.Expr = A.Var(pool)
        drawn = []
        for var in pattern:
            drawn.append((remaining, var))
            remaining = A.App("$without", pair(remaining, A.Var(var)))
        for source_expr, var in reversed(drawn):
            body = A.Iter(source_expr, var, body, shape)
        return A.Let(src, pool, body)

    def convert(self, src: A.Expr, shape: Shape, n) -> A.Expr:
        if shape is Shape.LIST:
            return src
        if isinstance(src, A.Const):
            v = src.value
            if _SHAPE_ORDER.get(getattr(v, "shape", None), 9) > _SHAPE_ORDER[shape]:
                _fail(f"cannot draw from a {v.shape} into a {shape} comprehension", n)
            if getattr(v, "shape", None) in _SHAPE_ORDER:
                return const(coll_convert(v, shape))
        return A.App(_CONVERT[shape], src)


def const(v) -> A.Const:
    return A.Const(v, least_type_of(v))


_FOLD = {"+", "-", "*", "/"}


def fold_constant(e: A.Expr):
    """Value of a closed arithmetic expression over literals, or None."""
    if isinstance(e, A.Const):
        return e.value if isinstance(e.value, (int, Fraction)) or e.value is NAN else None
    if isinstance(e, A.App) and e.fun == "neg":
        v = fold_constant(e.arg)
        return None if v is None else num_arith("-", 0, v)
    if isinstance(e, A.App) and e.fun in _FOLD and isinstance(e.arg, A.Tuple) and len(e.arg.fields) == 2:
        a, b = (fold_constant(x) for _, x in e.arg.fields)
        if a is None or b is None:
            return None
        return num_arith(e.fun, a, b)
    return None


def desugar(node: S.Node, free: Iterable[str] = ()) -> A.Expr:
    """Core expression for ``node``; names in ``free`` may occur unbound."""
    return Desugarer(free).run(node)
