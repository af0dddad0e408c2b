"""Bottom-up type inference.

:func:`check` returns the type of an expression together with an elaborated
copy of it: reduces over possibly-empty collections get their neutral element
attached, and shape conversions that turn out to be identities are removed.
"""

from __future__ import annotations

from typing import Mapping

from .. import ast as A
from .. import builtins as B
from ..errors import AleaTypeError
from ..types import (
    BOOL,
    NONE,
    RAT,
    CollType,
    Mode,
    NoneType,
    ProdType,
    SumType,
    Type,
    coll,
    inhabits,
    is_empty,
    join_all,
    prod,
    subtype,
    sum_type,
)

TypeEnv = Mapping[str, Type]

_IDENTITY_CONVERSIONS = {"$asbag": "bag", "$asset": "set"}


def _err(kind: str, msg: str, e: A.Expr):
    raise AleaTypeError(kind, msg, e)


def check(env: TypeEnv, e: A.Expr) -> tuple[Type, A.Expr]:
    method = _RULES.get(type(e))
    if method is None:
        _err("internal", f"not an expression: {e!r}", e)
    return method(env, e)


def _var(env, e: A.Var):
    if e.name not in env:
        _err("unbound", f"unbound variable {e.name}", e)
    return env[e.name], e


def _const(env, e: A.Const):
    if not inhabits(e.value, e.type):
        _err("const", f"constant {e.value!r} is not of type {e.type}", e)
    return e.type, e


def _app(env, e: A.App):
    t, arg = check(env, e.arg)
    if e.fun in _IDENTITY_CONVERSIONS and isinstance(t, CollType) and str(t.shape) == _IDENTITY_CONVERSIONS[e.fun]:
        return t, arg
    b = B.lookup(e.fun)
    neutral = None
    try:
        if isinstance(t, CollType) and b.flags is not None:
            result, neutral = B.reduce_info(e.fun, t)
        else:
            result = B.resolve(e.fun, t)
    except AleaTypeError as err:
        _err(err.kind, err.message, e)
    return result, A.App(e.fun, arg, neutral)


def _choose(env, e: A.Choose):
    types, branches = [], []
    for b, p in e.branches:
        t, b2 = check(env, b)
        types.append(t)
        branches.append((b2, p))
    return join_all(types), A.Choose(tuple(branches))


def _exp(env, e: A.Exp):
    t, body = check(env, e.body)
    if not subtype(t, RAT):
        _err("expectation", f"E needs a numeric argument, got {t}", e)
    return RAT, A.Exp(body)


def _dist(env, e: A.DistDraw):
    t, param = check(env, e.param)
    try:
        result = B.resolve_dist(e.dist, t)
    except AleaTypeError as err:
        _err(err.kind, err.message, e)
    return result, A.DistDraw(e.dist, param)


def _let(env, e: A.Let):
    t, bound = check(env, e.bound)
    inner = dict(env)
    inner[e.name] = t
    u, body = check(inner, e.body)
    return u, A.Let(bound, e.name, body)


def switch_covered(t: Type, keys) -> bool:
    """Do the explicit keys cover every value of the numeric type ``t``?"""
    if isinstance(t, NoneType):
        return True
    return subtype(t, BOOL) and 0 in keys and 1 in keys


def _nswitch(env, e: A.NSwitch):
    t, scrutinee = check(env, e.scrutinee)
    if not subtype(t, RAT):
        _err("switch", f"numeric switch on a non-number of type {t}", e)
    keys = [k for k, _ in e.cases if k is not A.DEFAULT]
    has_default = any(k is A.DEFAULT for k, _ in e.cases)
    covered = switch_covered(t, keys)
    if not covered and not has_default:
        _err("switch-coverage", f"switch on {t} needs a default case '_'", e)
    reachable, cases = [], []
    for k, b in e.cases:
        u, b2 = check(env, b)
        cases.append((k, b2))
        if (k is A.DEFAULT and not covered) or (k is not A.DEFAULT and inhabits(k, t)):
            reachable.append(u)
    return join_all(reachable), A.NSwitch(scrutinee, tuple(cases))


def _iter(env, e: A.Iter):
    t, source = check(env, e.source)
    if isinstance(t, NoneType):
        t = coll(e.shape, Mode.POS, NONE)
    if not isinstance(t, CollType):
        _err("iter", f"generator source must be a collection, got {t}", e)
    if t.shape is not e.shape:
        _err("iter", f"cannot draw from a {t.shape} into a {e.shape}", e)
    inner = dict(env)
    inner[e.name] = t.elem
    u, body = check(inner, e.body)
    if isinstance(u, NoneType):
        u = coll(e.shape, Mode.POS, NONE)
    if not isinstance(u, CollType) or u.shape is not e.shape:
        _err("iter", f"comprehension body must be a {e.shape}, got {u}", e)
    return coll(e.shape, max(t.mode, u.mode), u.elem), A.Iter(source, e.name, body, e.shape)


def _tuple(env, e: A.Tuple):
    fields, exprs = {}, []
    for f, x in e.fields:
        t, x2 = check(env, x)
        fields[f] = t
        exprs.append((f, x2))
    return prod(fields), A.Tuple(tuple(exprs))


def _select(env, e: A.Select):
    t, inner = check(env, e.expr)
    if isinstance(t, NoneType):
        return NONE, A.Select(inner, e.field)
    if not isinstance(t, ProdType):
        _err("select", f"field selection on a non-record of type {t}", e)
    ft = t.get(e.field)
    if ft is None:
        shown = f"#{e.field}" if isinstance(e.field, int) else e.field
        _err("select", f"record of type {t} has no field {shown}", e)
    return ft, A.Select(inner, e.field)


def _cons(env, e: A.Cons):
    t, inner = check(env, e.expr)
    return sum_type({e.case: t}), A.Cons(e.case, inner)


def _cswitch(env, e: A.CSwitch):
    t, scrutinee = check(env, e.scrutinee)
    if isinstance(t, NoneType):
        t = sum_type({})
    if not isinstance(t, SumType):
        _err("match", f"tag match on a non-tagged value of type {t}", e)
    handled = {c for c, _, _ in e.cases}
    missing = [c for c, _ in t.cases if c not in handled]
    if missing and e.default is None:
        _err("match-coverage", "unhandled case(s) " + ", ".join("@" + c for c in missing), e)
    results, cases = [], []
    for c, x, b in e.cases:
        ct = t.get(c)
        if ct is None:
            # unreachable: the scrutinee can never carry this tag
            cases.append((c, x, b))
            continue
        inner = dict(env)
        inner[x] = ct
        u, b2 = check(inner, b)
        results.append(u)
        cases.append((c, x, b2))
    default = None
    if e.default is not None:
        u, default = check(env, e.default)
        if missing:
            results.append(u)
    return join_all(results), A.CSwitch(scrutinee, tuple(cases), default)


_RULES = {
    A.Var: _var,
    A.Const: _const,
    A.App: _app,
    A.Choose: _choose,
    A.Exp: _exp,
    A.DistDraw: _dist,
    A.Let: _let,
    A.NSwitch: _nswitch,
    A.Iter: _iter,
    A.Tuple: _tuple,
    A.Select: _select,
    A.Cons: _cons,
    A.CSwitch: _cswitch,
}


def infer(env: TypeEnv, e: A.Expr) -> Type:
    return check(env, e)[0]


def elaborate(env: TypeEnv, e: A.Expr) -> A.Expr:
    return check(env, e)[1]


def check_program(env: TypeEnv, e: A.Expr) -> tuple[Type, A.Expr]:
    """Type-check a whole program; an empty result type is rejected."""
    t, e2 = check(env, e)
    if is_empty(t):
        _err("empty", f"the program's result type {t} has no values", e)
    return t, e2
