from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from alea.builtins import (
    DISTRIBUTIONS,
    FUNCTIONS,
    Fixed,
    apply,
    builtin_table,
    lookup,
    make_dist,
    reduce,
    reduce_info,
    resolve,
    resolve_dist,
)
from alea.dist import Dist
from alea.errors import AleaTypeError, EvalError
from alea.types import (
    ANY,
    BOOL,
    INT,
    NAT,
    RAT,
    CollType,
    Mode,
    coll,
    inhabits,
    least_type_of,
    subtype,
    tuple_type,
)
from alea.values import NAN, Bag, List, Record, Set, Shape, make_coll, meta_equal

from support import ROOT
from typegen import widen

NUMS = [0, 1, 2, 5, -1, -4, Fraction(1, 2), Fraction(-7, 3), NAN]
NUM_TYPES = [BOOL, NAT, INT, RAT]


def pair(a, b):
    return Record.tuple(a, b)


def sample_values(rnd: random.Random, n=400) -> list:
    out = list(NUMS)
    out += [pair(a, b) for a in NUMS for b in NUMS]
    for _ in range(n):
        shape = rnd.choice(list(Shape))
        items = [rnd.choice(NUMS[:6]) for _ in range(rnd.randint(0, 4))]
        c = make_coll(shape, items)
        out.append(c)
        other = make_coll(shape, [rnd.choice(NUMS) for _ in range(rnd.randint(0, 3))])
        out.append(pair(c, other))
        nested = make_coll(shape, [make_coll(shape, items[:k]) for k in range(rnd.randint(0, 3))])
        out.append(nested)
    return out


VALUES = sample_values(random.Random(4))
USER_FUNCTIONS = sorted(f for f, b in FUNCTIONS.items() if not b.internal)


# --- examples ------------------------------------------------------------------------

@pytest.mark.parametrize("f,argtype,expected", [
    ("+", tuple_type(BOOL, BOOL), NAT),
    ("/", tuple_type(INT, INT), RAT),
    ("//", tuple_type(NAT, NAT), NAT),
    ("-", tuple_type(NAT, NAT), INT),
    ("*", tuple_type(BOOL, BOOL), BOOL),
    ("min", tuple_type(BOOL, NAT), NAT),
    ("+", tuple_type(coll(Shape.LIST, Mode.POS, NAT), coll(Shape.LIST, Mode.OPT, INT)), coll(Shape.LIST, Mode.POS, INT)),
    ("+", tuple_type(coll(Shape.BAG, Mode.OPT, NAT), coll(Shape.BAG, Mode.OPT, BOOL)), coll(Shape.BAG, Mode.OPT, NAT)),
    ("<=", tuple_type(coll(Shape.BAG, Mode.OPT, NAT), coll(Shape.BAG, Mode.POS, RAT)), BOOL),
    ("abs", INT, NAT),
    ("even", NAT, BOOL),
    ("mults", coll(Shape.BAG, Mode.POS, RAT), coll(Shape.BAG, Mode.POS, NAT)),
    ("size", coll(Shape.SET, Mode.OPT, ANY), NAT),
    ("+", coll(Shape.BAG, Mode.OPT, BOOL), NAT),
    ("max", coll(Shape.SET, Mode.POS, INT), INT),
    ("max", coll(Shape.SET, Mode.OPT, BOOL), BOOL),
    ("+", coll(Shape.LIST, Mode.OPT, coll(Shape.LIST, Mode.POS, NAT)), coll(Shape.LIST, Mode.OPT, NAT)),
])
def test_resolve_examples(f, argtype, expected):
    assert resolve(f, argtype) == expected


@pytest.mark.parametrize("f,argtype", [
    ("-", tuple_type(RAT, coll(Shape.SET, Mode.OPT, RAT))),
    ("//", tuple_type(RAT, RAT)),
    ("+", tuple_type(coll(Shape.LIST, Mode.OPT, NAT), coll(Shape.BAG, Mode.OPT, NAT))),
    ("-", coll(Shape.BAG, Mode.POS, NAT)),
    ("+", coll(Shape.BAG, Mode.POS, coll(Shape.LIST, Mode.POS, NAT))),
    ("*", coll(Shape.SET, Mode.POS, NAT)),
    ("max", coll(Shape.SET, Mode.OPT, NAT)),
    ("even", RAT),
])
def test_resolve_rejects(f, argtype):
    with pytest.raises(AleaTypeError):
        resolve(f, argtype)


def test_apply_examples():
    assert apply("even", 4) == 1
    assert apply("max", pair(2, 7)) == 7
    assert apply("mults", Bag([6] * 5)) == Bag([5])
    assert apply("+", Bag([1, 2, 2]), 0) == 5
    assert apply("max", Set([3, 9, 1])) == 9
    assert apply("abs", NAN) is NAN
    assert apply("sgn", Fraction(-1, 2)) == -1
    assert apply("size", Bag([1, 1, 2])) == 3
    assert apply("+", List([]), 0) == 0
    assert apply("+", pair(List([1]), List([2]))) == List([1, 2])


def test_reduce_counts_successes():
    dice = Bag([3, 6, 6, 9, 10])
    assert reduce("+", Bag(int(d > 5) for d in dice.instances()), 0) == 4


def test_make_dist_examples():
    d = make_dist("uniform", Set(range(1, 7)))
    assert d == Dist({i: Fraction(1, 6) for i in range(1, 7)})
    assert make_dist("bernoulli", Fraction(2, 3)) == Dist({1: Fraction(2, 3), 0: Fraction(1, 3)})
    assert make_dist("uniform", Bag([1, 1, 2])) == Dist({1: Fraction(2, 3), 2: Fraction(1, 3)})
    assert make_dist("uniform", List([1, 2, 1, 1])) == Dist({1: Fraction(3, 4), 2: Fraction(1, 4)})
    with pytest.raises(EvalError):
        make_dist("uniform", Set())
    with pytest.raises(EvalError):
        make_dist("bernoulli", 2)


def test_uniform_commutes_with_conversion():
    lst = List([1, 2, 1, 3])
    assert make_dist("uniform", lst) == make_dist("uniform", Bag(lst.items))


def test_dist_signatures():
    assert resolve_dist("uniform", coll(Shape.BAG, Mode.POS, NAT)) == NAT
    assert resolve_dist("bernoulli", RAT) == BOOL
    with pytest.raises(AleaTypeError):
        resolve_dist("uniform", coll(Shape.BAG, Mode.OPT, NAT))
    with pytest.raises(AleaTypeError):
        resolve_dist("bernoulli", coll(Shape.BAG, Mode.POS, NAT))


# --- signature soundness and coherence ---------------------------------------------

def _apply_typed(f, v):
    """Resolve ``f`` at the least type of ``v`` and apply it; None if ill-typed."""
    t = least_type_of(v)
    try:
        r = resolve(f, t)
    except AleaTypeError:
        return None
    neutral = reduce_info(f, t)[1] if isinstance(t, CollType) and lookup(f).flags else None
    return apply(f, v, neutral), r


@pytest.mark.parametrize("f", USER_FUNCTIONS)
def test_results_inhabit_resolved_type(f):
    for v in VALUES:
        out = _apply_typed(f, v)
        if out is not None:
            value, t = out
            assert inhabits(value, t), (f, v, value, t)


@pytest.mark.parametrize("f", USER_FUNCTIONS)
def test_fixed_signatures_sound_on_their_extension(f):
    """Every value in a signature's argument type, NaN included, lands in its result type."""
    for sig in FUNCTIONS[f].signatures:
        if not isinstance(sig, Fixed):
            continue
        for v in VALUES:
            if inhabits(v, sig.arg):
                assert inhabits(apply(f, v), sig.result), (f, sig.doc, v)


@pytest.mark.parametrize("f", USER_FUNCTIONS)
def test_overlapping_signatures_agree(f):
    """One implementation serves all signatures, so results on an overlap coincide."""
    sigs = FUNCTIONS[f].signatures
    for s1, s2 in itertools.combinations(sigs, 2):
        for v in VALUES:
            t = least_type_of(v)
            i1, i2 = s1(t), s2(t)
            if i1 and i2 and inhabits(v, i1[0]) and inhabits(v, i2[0]):
                r = apply(f, v)
                assert inhabits(r, i1[1]) and inhabits(r, i2[1])
                assert meta_equal(r, apply(f, v))


def _arg_types(rnd: random.Random):
    r = rnd.randrange(4)
    if r == 0:
        return rnd.choice(NUM_TYPES)
    if r == 1:
        return tuple_type(rnd.choice(NUM_TYPES), rnd.choice(NUM_TYPES))
    shape = rnd.choice(list(Shape))
    c1 = coll(shape, rnd.choice(list(Mode)), rnd.choice(NUM_TYPES))
    if r == 2:
        return c1
    return tuple_type(c1, coll(shape, rnd.choice(list(Mode)), rnd.choice(NUM_TYPES)))


def test_resolve_monotone():
    rnd = random.Random(12)
    checked = 0
    for _ in range(5000):
        t1 = _arg_types(rnd)
        t2 = widen(rnd, t1)
        assert subtype(t1, t2)
        for f in USER_FUNCTIONS:
            try:
                r1, r2 = resolve(f, t1), resolve(f, t2)
            except AleaTypeError:
                continue
            assert subtype(r1, r2), (f, t1, t2, r1, r2)
            checked += 1
    assert checked > 1000


# --- reduce ----------------------------------------------------------------------

FOLD_OPS = ["+", "*", "min", "max"]


@given(st.sampled_from(FOLD_OPS), st.lists(st.sampled_from([0, 1, 2, 3, -1, Fraction(1, 2)]), min_size=1, max_size=8))
def test_bag_reduce_matches_left_fold(f, items):
    bag = Bag(items)
    op = lookup(f).binary
    acc = None
    for x in items:
        acc = x if acc is None else op(acc, x)
    assert meta_equal(reduce(f, bag), acc)
    assert meta_equal(reduce(f, List(items)), acc)


@given(st.lists(st.sampled_from([0, 1, 2, 3, 4]), max_size=8))
def test_bag_sum_by_squaring(items):
    assert reduce("+", Bag(items), 0) == sum(items)
    assert reduce("+", Bag([Bag([x]) for x in items]), Bag()) == Bag(items)


def test_reduce_empty_uses_neutral():
    assert reduce("+", Bag(), 0) == 0
    assert reduce("*", List(), 1) == 1
    assert reduce("min", Set(), 1) == 1
    with pytest.raises(EvalError):
        reduce("max", Set())


def _domain(f):
    if f in ("min", "max"):
        return [0, 1]
    return NUMS


@pytest.mark.parametrize("f", sorted(f for f, b in FUNCTIONS.items() if b.flags))
def test_declared_flags_hold(f):
    b = FUNCTIONS[f]
    op = b.binary
    for t in [BOOL, NAT, INT, RAT]:
        flags = b.flags(t)
        if flags is None:
            continue
        dom = [x for x in NUMS if inhabits(x, t)]
        for x, y, z in itertools.product(dom, repeat=3):
            assert meta_equal(op(op(x, y), z), op(x, op(y, z)))
        for x, y in itertools.product(dom, repeat=2):
            if flags.commutative:
                assert meta_equal(op(x, y), op(y, x))
        for x in dom:
            if flags.idempotent:
                assert meta_equal(op(x, x), x)
            if flags.neutral is not None:
                assert meta_equal(op(flags.neutral, x), x) and meta_equal(op(x, flags.neutral), x)


def test_collection_flags_hold():
    plus = FUNCTIONS["+"]
    rnd = random.Random(3)
    for shape in Shape:
        flags = plus.flags(coll(shape, Mode.OPT, NAT))
        for _ in range(200):
            a, b, c = (make_coll(shape, [rnd.randint(0, 2) for _ in range(rnd.randint(0, 3))]) for _ in range(3))
            op = plus.binary
            assert op(op(a, b), c) == op(a, op(b, c))
            assert op(flags.neutral, a) == a == op(a, flags.neutral)
            assert (op(a, b) == op(b, a)) or not flags.commutative
            if flags.idempotent:
                assert op(a, a) == a
        assert flags.commutative == (shape is not Shape.LIST)


# --- registry documentation ------------------------------------------------------------

def test_docs_table_in_sync():
    text = (ROOT / "docs" / "builtins.md").read_text(encoding="utf-8")
    assert text.rstrip("\n") == builtin_table().rstrip("\n")


def test_every_builtin_documented():
    table = builtin_table()
    for name in list(FUNCTIONS) + [f"~{d}" for d in DISTRIBUTIONS]:
        shown = name.replace("\\", "\\\\").replace("|", "\\|")
        assert f"`{shown}`" in table
