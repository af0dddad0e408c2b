"""Randomized evaluation: one run draws one outcome.

The evaluator threads a single generator through the expression in a fixed
order: left to right through let bindings, record fields in canonical field
order, collection instances in iteration order (bags once per instance,
ascending).  A draw consumes generator output only when there is more than one
possible outcome.  Expectations are computed exactly.
"""

from __future__ import annotations

from typing import Mapping

from .. import ast as A
from ..builtins import make_dist
from ..dist import mean
from ..values import Record
from .distribution import DistEvaluator
from .evaluate import Accumulator, DetEvaluator, extend, instances_with_counts, tuple_order
from .rng import DEFAULT_SEED, Generator

Env = Mapping[str, object]


class RandEvaluator(DetEvaluator):
    def __init__(self, gen: Generator, det_shortcut: bool = True):
        super().__init__()
        self.gen = gen
        self.det_shortcut = det_shortcut
        self.exact = DistEvaluator()

    def draw(self, items: list):
        """One outcome from ``(value, probability)`` pairs in canonical order."""
        if len(items) == 1:
            return items[0][0]
        k = self.gen.random([p for _, p in items])
        return items[k - 1][0]

    def _Choose(self, env, e: A.Choose):
        if len(e.branches) == 1:
            return self.eval(env, e.branches[0][0])
        k = self.gen.random([p for _, p in e.branches])
        return self.eval(env, e.branches[k - 1][0])

    def _Exp(self, env, e: A.Exp):
        return mean(self.exact.eval(env, e.body))

    def _DistDraw(self, env, e: A.DistDraw):
        return self.draw(make_dist(e.dist, self.eval(env, e.param)).items())

    def _Tuple(self, env, e: A.Tuple):
        return Record({f: self.eval(env, x) for f, x in tuple_order(e)})

    def iterate(self, env, e: A.Iter, c):
        if self.det_shortcut and e.body.det:
            return super().iterate(env, e, c)
        acc = Accumulator(e.shape)
        for x, n in instances_with_counts(c):
            inner = extend(env, e.name, x)
            for _ in range(n):
                acc.add(self.eval(inner, e.body))
        return acc.result()


def eval_rand(env: Env, e: A.Expr, gen: Generator, det_shortcut: bool = True):
    return RandEvaluator(gen, det_shortcut).eval(env, e)


def sample(env: Env, e: A.Expr, trials: int, seed: int = DEFAULT_SEED, det_shortcut: bool = True) -> list:
    """``trials`` successive outcomes from one generator seeded with ``seed``."""
    gen = Generator(seed)
    ev = RandEvaluator(gen, det_shortcut)
    return [ev.eval(env, e) for _ in range(trials)]
