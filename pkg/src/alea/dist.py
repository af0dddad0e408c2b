"""Finitely supported rational probability distributions.

A :class:`Dist` maps values (keyed by meta-identity, so NaN collates with
NaN) to strictly positive :class:`~fractions.Fraction` probabilities that sum
to exactly one.  The module provides the monad structure (unit, multiplication,
independent pairing, functorial map), the mean, and an n-fold iid power for
associative-commutative combinations.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import EvalError, InternalError
from .values import NAN, Record, is_num, num, render, sort_key

ONE = Fraction(1)


class Dist:
    __slots__ = ("pmf", "_hash")

    def __init__(self, pmf: Mapping, check: bool = True):
        self.pmf = {v: Fraction(p) for v, p in pmf.items() if p != 0}
        self._hash = None
        if check:
            self.check()

    @classmethod
    def _raw(cls, pmf: dict) -> "Dist":
        d = cls.__new__(cls)
        d.pmf = pmf
        d._hash = None
        return d

    def check(self) -> None:
        if not self.pmf:
            raise InternalError("distribution with empty support")
        if any(p <= 0 for p in self.pmf.values()):
            raise InternalError("non-positive probability in distribution")
        total = sum(self.pmf.values())
        if total != 1:
            raise InternalError(f"distribution sums to {total}, not 1")

    def __eq__(self, other):
        return isinstance(other, Dist) and self.pmf == other.pmf

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.pmf.items()))
        return self._hash

    def __len__(self):
        return len(self.pmf)

    def __repr__(self):
        inner = ", ".join(f"{render(v)}: {p}" for v, p in self.items())
        return f"Dist({{{inner}}})"

    def support(self) -> list:
        return sorted(self.pmf, key=sort_key)

    def items(self) -> list:
        """(value, probability) pairs in canonical value order."""
        return [(v, self.pmf[v]) for v in self.support()]

    def prob(self, v) -> Fraction:
        return self.pmf.get(v, Fraction(0))

    def is_point(self) -> bool:
        return len(self.pmf) == 1


def delta(v) -> Dist:
    return Dist._raw({v: ONE})


def dmap(f: Callable, p: Dist) -> Dist:
    acc: dict = {}
    for x, px in p.pmf.items():
        y = f(x)
        acc[y] = acc.get(y, 0) + px
    return Dist._raw(acc)


def dmult(weighted: Iterable[tuple[Dist, Fraction]]) -> Dist:
    """Flatten a weighted family of distributions, collating equal outcomes."""
    acc: dict = {}
    total = 0
    for q, w in weighted:
        total += w
        for x, px in q.pmf.items():
            acc[x] = acc.get(x, 0) + w * px
    if total != 1:
        raise InternalError(f"mixture weights sum to {total}, not 1")
    return Dist._raw(acc)


def dbind(p: Dist, k: Callable[[object], Dist]) -> Dist:
    if len(p.pmf) == 1:
        return k(next(iter(p.pmf)))
    return dmult((k(x), px) for x, px in p.pmf.items())


def combine(p: Dist, q: Dist, f: Callable) -> Dist:
    """Distribution of ``f(x, y)`` for independent ``x ~ p`` and ``y ~ q``."""
    acc: dict = {}
    qitems = list(q.pmf.items())
    for x, px in p.pmf.items():
        for y, qy in qitems:
            z = f(x, y)
            acc[z] = acc.get(z, 0) + px * qy
    return Dist._raw(acc)


def dpair(p: Dist, q: Dist) -> Dist:
    return combine(p, q, lambda x, y: Record.tuple(x, y))


def mean(p: Dist):
    total = Fraction(0)
    for x, px in p.pmf.items():
        if not is_num(x):
            raise EvalError(f"mean of a non-numeric distribution (support contains {x!r})")
        if x is NAN:
            return NAN
        total += px * x
    return num(total)


def dpow_iid(p: Dist, n: int, op: Callable, neutral=None) -> Dist:
    """Distribution of ``op`` folded over ``n`` iid draws from ``p``.

    ``op`` must be associative and commutative; uses repeated squaring, so
    only O(log n) convolutions are performed.
    """
    if n < 0:
        raise InternalError("negative iid power")
    if n == 0:
        if neutral is None:
            raise InternalError("iid power 0 needs a neutral element")
        return delta(neutral)
    result = None
    base = p
    while True:
        if n & 1:
            result = base if result is None else combine(result, base, op)
        n >>= 1
        if not n:
            return result
        base = combine(base, base, op)


def uniform(weights: Mapping) -> Dist:
    """Distribution proportional to positive integer ``weights``."""
    total = sum(weights.values())
    if total == 0:
        raise EvalError("undefined distribution: uniform over an empty collection")
    return Dist._raw({v: Fraction(w, total) for v, w in weights.items()})


def bernoulli(p) -> Dist:
    if not is_num(p) or p is NAN or p < 0 or p > 1:
        raise EvalError(f"undefined distribution: bernoulli({p!r})")
    p = Fraction(p)
    return Dist({1: p, 0: 1 - p}, check=False)
