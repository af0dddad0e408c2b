"""Small helpers shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import alea
from alea.dist import Dist, dmult
from alea.values import Record
from alea.textio import read_value

ROOT = Path(__file__).resolve().parent.parent
PROGRAMS = ROOT / "programs"


def program_text(name: str) -> str:
    return (PROGRAMS / name).read_text(encoding="utf-8")


def dist_of(text: str, **kw) -> dict:
    """Distribution of a program as {canonical text: probability}."""
    return {alea.render(v): p for v, p in alea.analyze(alea.compile(text), **kw).items()}


def value_of(text: str):
    return alea.evaluate(alea.compile(text))


def v(text: str):
    return read_value(text)


def F(x) -> Fraction:
    return Fraction(x)


# --- the quoted-fragment corpus ------------------------------------------------------

def corpus_env() -> dict:
    """Types of the free variables the quoted fragments refer to."""
    from alea.types import BOOL, INT, NAT, RAT, Mode, coll, prod, tuple_type
    from alea.values import Shape

    list_of = lambda t: coll(Shape.LIST, Mode.OPT, t)  # noqa: E731
    return {
        "x": RAT, "y": RAT, "z": RAT, "a": RAT, "b": BOOL, "n": NAT,
        "S": coll(Shape.SET, Mode.OPT, INT),
        "L": list_of(INT),
        "C": list_of(list_of(INT)),
        "B": coll(Shape.BAG, Mode.OPT, INT),
        "r": prod({"foo": NAT}),
        "s": tuple_type(NAT, NAT, NAT),
    }


def fragment_env(text: str) -> dict:
    """The corpus environment, with ``x`` a tagged value where a fragment matches on it."""
    from alea.types import NAT, UNIT_T, sum_type

    env = corpus_env()
    if text.startswith("x ?"):
        env["x"] = sum_type({"good": NAT, "bad": UNIT_T})
    return env


FRAGMENTS = [
    "3 * (x + 1) < -2/3",
    "0/0",
    "7 // 2",
    r"7 \\ 2",
    "[1, 2, 3, 4, 5]",
    "⟨2, 2, 4, 3, 2⟩",
    "{1 .. 5}",
    "{ k*k | k ← {1 .. n}; even(k) }",
    "{ x ← S | x ≥ 0 }",
    "{ x | x ← S; x ≥ 0 }",
    "{ x ≥ 0 | x ← S }",
    "{ x ← L }",
    "{ _ ← L }",
    "[x ← y ← C]",
    "[_ ← _ ← C]",
    "{ b - a | {a, b} ← {1 .. n}; a < b }",
    "max{x, y, z}",
    "(+)⟨ k ≥ 0 | k ← B ⟩",
    "max(a, b) + min{x, y, z}",
    "E(~uniform{1 ... 6} + ~bernoulli(2/3))",
    "(foo: 42, bar: {})",
    "(1, 2, 3)",
    "r.foo",
    "s.#3",
    "@good(42)",
    "@bad",
    "x ? { @good(n) → n; @bad → -1 }",
    "n ? { 0 → @none; 1 → @one; 2, 3 → @few; _ → @many }",
    "b ? { 1 → x; 0 → y }",
    "b ? x : y",
]

PROGRAM_FILES = [
    "coin.alea",
    "dice_pool.alea",
    "dice_pool_variant.alea",
    "dice_pool_win.alea",
    "yahtzee.alea",
    "yahtzee_three_of_a_kind.alea",
]


# --- random distributions ---------------------------------------------------------

def random_dist(rnd: random.Random, points=None, max_support=6) -> Dist:
    points = points if points is not None else list(range(-3, 10))
    k = rnd.randint(1, min(max_support, len(points)))
    support = rnd.sample(points, k)
    weights = [rnd.randint(1, 12) for _ in support]
    total = sum(weights)
    pmf: dict = {}
    for x, w in zip(support, weights):
        pmf[x] = pmf.get(x, 0) + Fraction(w, total)
    d = Dist(pmf)
    d.check()
    return d


def nested(rnd, depth):
    """A random distribution whose support points are distributions, ``depth`` levels deep."""
    if depth == 0:
        return random_dist(rnd)
    inner = [nested(rnd, depth - 1) for _ in range(rnd.randint(1, 4))]
    return random_dist(rnd, points=inner, max_support=4)


def mu(pp: Dist) -> Dist:
    return dmult(pp.pmf.items())


def swap(r: Record) -> Record:
    return Record.tuple(r[2], r[1])
