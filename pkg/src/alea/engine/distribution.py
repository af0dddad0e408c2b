"""Exact stochastic evaluation: every expression denotes a distribution.

With ``fast=False`` the evaluator applies the monadic rules literally.  The
default fast mode adds three result-preserving shortcuts:

* a syntactically deterministic subexpression is evaluated once, as a point
  mass;
* a chain of ``let`` bindings is evaluated as a distribution over the tuple of
  variables still needed later, collating equal tuples after every step, and
  the distribution of a stochastic bound expression is reused across states
  that agree on its free variables;
* a comprehension over a bag or set combines identically distributed
  instances by repeated squaring instead of one at a time.
"""

from __future__ import annotations

from typing import Mapping

from .. import ast as A
from .. import dist as D
from ..builtins import apply, make_dist
from ..values import Record, Shape, Tag, coll_concat, empty
from .evaluate import (
    DetEvaluator,
    extend,
    instances_with_counts,
    match_case,
    select_branch,
    select_field,
    tuple_order,
)

Env = Mapping[str, object]


class DistEvaluator:
    def __init__(self, fast: bool = True):
        self.fast = fast
        self.det = DetEvaluator()

        self._dispatch = {t: getattr(self, "_" + t.__name__) for t in A.NODE_TYPES}

    def eval(self, env: Env, e: A.Expr) -> D.Dist:
        if self.fast and e.det:
            return D.delta(self.det.eval(env, e))
        return self._dispatch[type(e)](env, e)

    def _Var(self, env, e: A.Var):
        return D.delta(self.det._Var(env, e))

    def _Const(self, env, e: A.Const):
        return D.delta(e.value)

    def _App(self, env, e: A.App):
        return D.dmap(lambda v: apply(e.fun, v, e.neutral), self.eval(env, e.arg))

    def _Choose(self, env, e: A.Choose):
        return D.dmult((self.eval(env, b), p) for b, p in e.branches)

    def _Exp(self, env, e: A.Exp):
        return D.delta(D.mean(self.eval(env, e.body)))

    def _DistDraw(self, env, e: A.DistDraw):
        return D.dbind(self.eval(env, e.param), lambda v: make_dist(e.dist, v))

    def _Let(self, env, e: A.Let):
        if self.fast:
            return self.let_chain(env, e)
        return D.dbind(self.eval(env, e.bound), lambda v: self.eval(extend(env, e.name, v), e.body))

    def _NSwitch(self, env, e: A.NSwitch):
        return D.dbind(self.eval(env, e.scrutinee), lambda v: self.eval(env, select_branch(e, v)))

    def _Iter(self, env, e: A.Iter):
        return D.dbind(self.eval(env, e.source), lambda c: self.iterate(env, e, c))

    def _Tuple(self, env, e: A.Tuple):
        acc = D.delta(())
        for _, x in tuple_order(e):
            acc = D.combine(acc, self.eval(env, x), lambda t, v: t + (v,))
        ids = [f for f, _ in tuple_order(e)]
        return D.dmap(lambda t: Record(zip(ids, t)), acc)

    def _Select(self, env, e: A.Select):
        return D.dmap(lambda v: select_field(v, e.field), self.eval(env, e.expr))

    def _Cons(self, env, e: A.Cons):
        return D.dmap(lambda v: Tag(e.case, v), self.eval(env, e.expr))

    def _CSwitch(self, env, e: A.CSwitch):
        def branch(v):
            var, payload, body = match_case(e, v)
            return self.eval(env if var is None else extend(env, var, payload), body)
        return D.dbind(self.eval(env, e.scrutinee), branch)

    # --- comprehensions ------------------------------------------------------------

    def iterate(self, env, e: A.Iter, c) -> D.Dist:
        if self.fast and e.body.det:
            return D.delta(self.det.iterate(env, e, c))
        nothing = empty(e.shape)
        pairs = instances_with_counts(c)
        if not self.fast:
            acc = D.delta(nothing)
            for x, n in pairs:
                q = self.eval(extend(env, e.name, x), e.body)
                for _ in range(n):
                    acc = D.combine(acc, q, coll_concat)
            return acc
        if e.name not in e.body.fv:
            q = self.eval(env, e.body)
            groups = [[q, sum(n for _, n in pairs)]] if pairs else []
        else:
            groups: list = []
            for x, n in pairs:
                q = self.eval(extend(env, e.name, x), e.body)
                # lists may only merge adjacent runs; bags and sets are commutative
                candidates = groups[-1:] if e.shape is Shape.LIST else groups
                for g in candidates:
                    if g[0] == q:
                        g[1] += n
                        break
                else:
                    groups.append([q, n])
        acc = D.delta(nothing)
        for q, n in groups:
            acc = D.combine(acc, D.dpow_iid(q, n, coll_concat, nothing), coll_concat)
        return acc

    @staticmethod
    def scope(env, names, vals) -> dict:
        local = dict(env)
        local.update(zip(names, vals))
        return local

    # --- let chains --------------------------------------------------------------

    def let_chain(self, env, e: A.Let) -> D.Dist:
        steps = []
        body: A.Expr = e
        while isinstance(body, A.Let):
            steps.append((body.name, body.bound))
            body = body.body
        # variables needed after each step
        live = set(body.fv)
        live_after = []
        for name, bound in reversed(steps):
            live_after.append(frozenset(live))
            if name in live:
                live = (live - {name}) | bound.fv
        live_after.reverse()
        chain_vars = {name for name, _ in steps}

        names: tuple = ()
        states: dict = {(): 1}
        for (name, bound), keep in zip(steps, live_after):
            if name not in keep:
                continue  # a dead binding marginalizes to total mass one
            # a rebound name shadows its earlier slot
            old_slots = [i for i, v in enumerate(names) if v != name and v in keep]
            new_names = tuple(names[i] for i in old_slots) + (name,)
            deps = sorted(bound.fv & chain_vars)
            dep_pos = [names.index(v) for v in deps if v in names]
            # deterministic bounds are only worth caching when states can share their inputs
            reuse = len(dep_pos) < len(names)
            memo: dict = {}
            acc: dict = {}
            for vals, p in states.items():
                if bound.det and not reuse:
                    q_items = ((self.det.eval(self.scope(env, names, vals), bound), 1),)
                else:
                    key = tuple(vals[i] for i in dep_pos)
                    q = memo.get(key)
                    if q is None:
                        q = memo[key] = self.eval(self.scope(env, names, vals), bound)
                    q_items = q.pmf.items()
                kept = tuple(vals[i] for i in old_slots)
                for v, pv in q_items:
                    nxt = kept + (v,)
                    acc[nxt] = acc.get(nxt, 0) + p * pv
            names, states = new_names, acc
        deps = sorted(body.fv & chain_vars)
        dep_pos = [names.index(v) for v in deps if v in names]
        memo = {}
        out: dict = {}
        for vals, p in states.items():
            key = tuple(vals[i] for i in dep_pos)
            q = memo.get(key)
            if q is None:
                q = memo[key] = self.eval(self.scope(env, names, vals), body)
            for v, pv in q.pmf.items():
                out[v] = out.get(v, 0) + p * pv
        return D.Dist._raw(out)


def eval_dist(env: Env, e: A.Expr, fast: bool = True) -> D.Dist:
    return DistEvaluator(fast).eval(env, e)
