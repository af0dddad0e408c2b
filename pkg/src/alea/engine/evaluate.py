"""Deterministic big-step evaluation of syntactically deterministic expressions."""

from __future__ import annotations

from typing import Mapping

from .. import ast as A
from ..builtins import apply
from ..errors import InternalError
from ..values import Bag, List, Record, Set, Shape, Tag, field_key

Env = Mapping[str, object]


class Accumulator:
    """Collects the concatenation of many collections of one shape."""

    __slots__ = ("shape", "items", "counts", "members")

    def __init__(self, shape: Shape):
        self.shape = shape
        self.items: list = []
        self.counts: dict = {}
        self.members: set = set()

    def add_one(self, v, times: int = 1) -> None:
        if self.shape is Shape.LIST:
            self.items.extend((v,) * times)
        elif self.shape is Shape.BAG:
            self.counts[v] = self.counts.get(v, 0) + times
        else:
            self.members.add(v)

    def add(self, c, times: int = 1) -> None:
        if c.shape is not self.shape:
            raise InternalError(f"comprehension body produced a {c.shape}, expected a {self.shape}")
        if self.shape is Shape.LIST:
            self.items.extend(c.items * times)
        elif self.shape is Shape.BAG:
            counts = self.counts
            for k, n in c.counts.items():
                counts[k] = counts.get(k, 0) + n * times
        else:
            self.members |= c.items

    def result(self):
        if self.shape is Shape.LIST:
            return List(self.items)
        if self.shape is Shape.BAG:
            return Bag.from_counts(self.counts)
        return Set(self.members)


def instances_with_counts(c) -> list:
    """``(element, multiplicity)`` pairs in iteration order."""
    if type(c) is List:
        return [(x, 1) for x in c.items]
    if type(c) is Bag:
        return [(k, c.counts[k]) for k in c.distinct()]
    if type(c) is Set:
        return [(x, 1) for x in c.distinct()]
    raise InternalError(f"iteration over a non-collection {c!r}")


_SINGLETON = {"$list": Shape.LIST, "$bag": Shape.BAG, "$set": Shape.SET}


def map_clause(e: A.Iter):
    """The element expression when the body is a one-element display, else None."""
    b = e.body
    if (type(b) is A.App and _SINGLETON.get(b.fun) is e.shape
            and type(b.arg) is A.Tuple and len(b.arg.fields) == 1 and b.arg.fields[0][0] == 1):
        return b.arg.fields[0][1]
    return None


def select_branch(e: A.NSwitch, v) -> A.Expr:
    b = e.branch(v)
    if b is None:
        raise InternalError(f"switch has no case for {v!r} and no default")
    return b


def match_case(e: A.CSwitch, v):
    if type(v) is not Tag:
        raise InternalError(f"tag match on {v!r}")
    hit = e.case(v.case)
    if hit is not None:
        return hit[0], v.payload, hit[1]
    if e.default is None:
        raise InternalError(f"no case for @{v.case}")
    return None, None, e.default


def select_field(v, f):
    if type(v) is not Record or f not in v.fields:
        raise InternalError(f"selecting {f!r} from {v!r}")
    return v.fields[f]


def extend(env: Env, name: str, v) -> dict:
    out = dict(env)
    out[name] = v
    return out


class DetEvaluator:
    """Evaluator for the identity monad; subclasses thread further effects."""

    def __init__(self):
        self._dispatch = {t: getattr(self, "_" + t.__name__) for t in A.NODE_TYPES}

    def eval(self, env: Env, e: A.Expr):
        return self._dispatch[type(e)](env, e)

    def _Var(self, env, e: A.Var):
        try:
            return env[e.name]
        except KeyError:
            raise InternalError(f"unbound variable {e.name} at run time") from None

    def _Const(self, env, e: A.Const):
        return e.value

    def _App(self, env, e: A.App):
        return apply(e.fun, self.eval(env, e.arg), e.neutral)

    def _Let(self, env, e: A.Let):
        return self.eval(extend(env, e.name, self.eval(env, e.bound)), e.body)

    def _NSwitch(self, env, e: A.NSwitch):
        return self.eval(env, select_branch(e, self.eval(env, e.scrutinee)))

    def _Iter(self, env, e: A.Iter):
        return self.iterate(env, e, self.eval(env, e.source))

    def iterate(self, env, e: A.Iter, c):
        acc = Accumulator(e.shape)
        head = map_clause(e)
        for x, n in instances_with_counts(c):
            # a deterministic body gives the same collection for every instance of x
            inner = extend(env, e.name, x)
            if head is not None:
                acc.add_one(self.eval(inner, head), n)
            else:
                acc.add(self.eval(inner, e.body), n)
        return acc.result()

    def _Tuple(self, env, e: A.Tuple):
        return Record({f: self.eval(env, x) for f, x in e.fields})

    def _Select(self, env, e: A.Select):
        return select_field(self.eval(env, e.expr), e.field)

    def _Cons(self, env, e: A.Cons):
        return Tag(e.case, self.eval(env, e.expr))

    def _CSwitch(self, env, e: A.CSwitch):
        var, payload, body = match_case(e, self.eval(env, e.scrutinee))
        return self.eval(env if var is None else extend(env, var, payload), body)

    def _Choose(self, env, e):
        raise InternalError("deterministic evaluation of a choice")

    _Exp = _DistDraw = _Choose


def tuple_order(e: A.Tuple) -> list:
    """Fields in canonical identifier order, the order effects are performed in."""
    return sorted(e.fields, key=lambda fx: field_key(fx[0]))


_DET = DetEvaluator()


def eval_det(env: Env, e: A.Expr):
    if not e.det:
        raise InternalError("eval_det needs a syntactically deterministic expression")
    return _DET.eval(env, e)
