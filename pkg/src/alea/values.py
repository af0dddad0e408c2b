"""Untyped value universe.

Numbers are exact rationals represented as ``int`` when integral and as
:class:`fractions.Fraction` otherwise, plus the singleton :data:`NAN`.
Booleans are the numbers 0 and 1.  Collections, records and tags are
immutable and hashable; equality and hashing implement meta-level identity
(so ``NAN == NAN`` and sets/bags may contain NaN as an ordinary key).  The
object-level, NaN-aware relations live in :func:`star_eq`, :func:`star_subset`
and :func:`star_compare`.
"""

from __future__ import annotations

from collections import Counter
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .errors import InternalError


class Shape(Enum):
    LIST = "list"
    BAG = "bag"
    SET = "set"

    def __str__(self):
        return self.value


class NaNType:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NaN"

    def __hash__(self):
        return 0x4E614E

    def __reduce__(self):
        return (NaNType, ())


NAN = NaNType()
TRUE = 1
FALSE = 0

Number = Union[int, Fraction, NaNType]
FieldId = Union[int, str]  # int >= 1 is positional, str is symbolic


def field_key(fid: FieldId):
    """Canonical ordering of field identifiers: positional first, then by name."""
    return (0, fid, "") if type(fid) is int else (1, 0, fid)


def render_field(fid: FieldId) -> str:
    return f"#{fid}" if type(fid) is int else fid


def is_num(v) -> bool:
    t = type(v)
    return t is int or t is Fraction or v is NAN


def is_integer(v) -> bool:
    return type(v) is int


def num(x) -> Number:
    """Canonical form of a rational: ints stay ints, integral fractions collapse."""
    if type(x) is Fraction:
        return x.numerator if x.denominator == 1 else x
    if type(x) is int or x is NAN:
        return x
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return int(x)
    raise InternalError(f"not a rational: {x!r}")


class _Value:
    __slots__ = ("_hash", "_key", "_nan")

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return render(self)


class Coll(_Value):
    __slots__ = ()
    shape: Shape


class List(Coll):
    __slots__ = ("items",)
    shape = Shape.LIST

    def __init__(self, items: Iterable = ()):
        self.items = tuple(items)
        self._hash = self._key = self._nan = None

    def __eq__(self, other):
        return type(other) is List and self.items == other.items

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("L", self.items))
        return self._hash

    def __len__(self):
        return len(self.items)

    def instances(self) -> Iterator:
        return iter(self.items)


class Bag(Coll):
    """Multiset as a mapping from distinct elements to positive multiplicities."""

    __slots__ = ("counts", "size")
    shape = Shape.BAG

    def __init__(self, items: Iterable = ()):
        self.counts = dict(Counter(items))
        self.size = sum(self.counts.values())
        self._hash = self._key = self._nan = None

    @classmethod
    def from_counts(cls, counts: Mapping) -> "Bag":
        b = cls.__new__(cls)
        b.counts = {k: c for k, c in counts.items() if c > 0}
        b.size = sum(b.counts.values())
        b._hash = b._key = b._nan = None
        return b

    def __eq__(self, other):
        return type(other) is Bag and self.counts == other.counts

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("M", frozenset(self.counts.items())))
        return self._hash

    def __len__(self):
        return self.size

    def distinct(self) -> list:
        return sorted(self.counts, key=sort_key)

    def instances(self) -> Iterator:
        for k in self.distinct():
            for _ in range(self.counts[k]):
                yield k

    def scaled(self, k: int) -> "Bag":
        return Bag.from_counts({v: c * k for v, c in self.counts.items()})


class Set(Coll):
    __slots__ = ("items",)
    shape = Shape.SET

    def __init__(self, items: Iterable = ()):
        self.items = frozenset(items)
        self._hash = self._key = self._nan = None

    def __eq__(self, other):
        return type(other) is Set and self.items == other.items

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("P", self.items))
        return self._hash

    def __len__(self):
        return len(self.items)

    def distinct(self) -> list:
        return sorted(self.items, key=sort_key)

    def instances(self) -> Iterator:
        return iter(self.distinct())


class Record(_Value):
    __slots__ = ("fields",)

    def __init__(self, fields: Mapping[FieldId, object] | Iterable = ()):
        self.fields = dict(fields)
        self._hash = self._key = self._nan = None

    @classmethod
    def tuple(cls, *vals) -> "Record":
        return cls({i: v for i, v in enumerate(vals, 1)})

    def __eq__(self, other):
        return type(other) is Record and self.fields == other.fields

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("R", frozenset(self.fields.items())))
        return self._hash

    def __getitem__(self, fid):
        return self.fields[fid]

    def field_ids(self) -> list:
        return sorted(self.fields, key=field_key)


class Tag(_Value):
    __slots__ = ("case", "payload")

    def __init__(self, case: str, payload=None):
        if not case:
            raise InternalError("empty case identifier")
        self.case = case
        self.payload = UNIT if payload is None else payload
        self._hash = self._key = self._nan = None

    def __eq__(self, other):
        return type(other) is Tag and self.case == other.case and self.payload == other.payload

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("T", self.case, self.payload))
        return self._hash


UNIT = Record()

Val = Union[int, Fraction, NaNType, List, Bag, Set, Record, Tag]


# --- canonical order -------------------------------------------------------

def sort_key(v):
    """Total order on values: numbers by value with NaN last, then by constructor."""
    t = type(v)
    if t is int or t is Fraction:
        return (0, 0, v)
    if v is NAN:
        return (0, 1, 0)
    k = v._key
    if k is None:
        if t is List:
            k = (1, tuple(sort_key(x) for x in v.items))
        elif t is Bag:
            k = (2, tuple((sort_key(x), v.counts[x]) for x in v.distinct()))
        elif t is Set:
            k = (3, tuple(sort_key(x) for x in v.distinct()))
        elif t is Record:
            k = (4, tuple((field_key(f), sort_key(v.fields[f])) for f in v.field_ids()))
        elif t is Tag:
            k = (5, v.case, sort_key(v.payload))
        else:
            raise InternalError(f"not a value: {v!r}")
        v._key = k
    return k


def has_nan(v) -> bool:
    t = type(v)
    if t is int or t is Fraction:
        return False
    if v is NAN:
        return True
    r = v._nan
    if r is None:
        if t is List:
            r = any(has_nan(x) for x in v.items)
        elif t is Bag:
            r = any(has_nan(x) for x in v.counts)
        elif t is Set:
            r = any(has_nan(x) for x in v.items)
        elif t is Record:
            r = any(has_nan(x) for x in v.fields.values())
        else:
            r = has_nan(v.payload)
        v._nan = r
    return r


def check_val(v) -> None:
    """Validate the representation invariants of ``v`` recursively."""
    t = type(v)
    if t is int or v is NAN:
        return
    if t is Fraction:
        if v.denominator == 1:
            raise InternalError(f"integral fraction not collapsed: {v!r}")
        return
    if t is List:
        for x in v.items:
            check_val(x)
    elif t is Bag:
        if any(type(c) is not int or c <= 0 for c in v.counts.values()):
            raise InternalError("bag multiplicities must be positive")
        if v.size != sum(v.counts.values()):
            raise InternalError("bag size out of sync")
        for x in v.counts:
            check_val(x)
    elif t is Set:
        for x in v.items:
            check_val(x)
    elif t is Record:
        for f, x in v.fields.items():
            if type(f) is int and f < 1 or type(f) not in (int, str):
                raise InternalError(f"bad field id {f!r}")
            check_val(x)
    elif t is Tag:
        check_val(v.payload)
    else:
        raise InternalError(f"not a value: {v!r}")


# --- numbers ---------------------------------------------------------------

_CMP_ALIASES = {"≠": "!=", "≤": "<=", "≥": ">=", "==": "="}


def num_arith(op: str, x, y):
    if not (is_num(x) and is_num(y)):
        raise InternalError(f"arithmetic on non-numbers: {x!r} {op} {y!r}")
    if x is NAN or y is NAN:
        return NAN
    if op == "+":
        return num(x + y)
    if op == "-":
        return num(x - y)
    if op == "*":
        return num(x * y)
    if op == "/":
        return NAN if y == 0 else num(Fraction(x) / y)
    if op in ("//", "\\"):
        if type(x) is not int or type(y) is not int:
            raise InternalError(f"integer division on non-integers: {x!r} {op} {y!r}")
        if y == 0:
            return NAN
        return x // y if op == "//" else x % y
    if op == "min":
        return x if x <= y else y
    if op == "max":
        return x if x >= y else y
    raise InternalError(f"unknown arithmetic operator {op!r}")


def num_compare(op: str, x, y) -> int:
    op = _CMP_ALIASES.get(op, op)
    if x is NAN or y is NAN:
        return TRUE if op == "!=" else FALSE
    if op == "=":
        r = x == y
    elif op == "!=":
        r = x != y
    elif op == "<":
        r = x < y
    elif op == "<=":
        r = x <= y
    elif op == ">":
        r = x > y
    elif op == ">=":
        r = x >= y
    else:
        raise InternalError(f"unknown comparison {op!r}")
    return TRUE if r else FALSE


# --- identity and star relations -------------------------------------------

def meta_equal(v, w) -> bool:
    return v == w


def star_eq(v, w) -> int:
    """Object-level equality: structural, except that NaN equals nothing.

    A value containing NaN anywhere cannot be matched (every element,
    position or field of it would have to be), so on NaN-free values the
    relation coincides with meta-identity.
    """
    return TRUE if v == w and not has_nan(v) else FALSE


def _contiguous(a: tuple, b: tuple) -> bool:
    n = len(a)
    return any(b[i:i + n] == a for i in range(len(b) - n + 1))


def star_subset(a, b) -> int:
    if type(a) is not type(b) or not isinstance(a, Coll):
        raise InternalError(f"star comparison needs same-shape collections: {a!r}, {b!r}")
    if isinstance(a, Set):
        r = all(not has_nan(x) and x in b.items for x in a.items)
    elif isinstance(a, Bag):
        r = all(not has_nan(x) and b.counts.get(x, 0) >= c for x, c in a.counts.items())
    else:
        r = not has_nan(a) and _contiguous(a.items, b.items)
    return TRUE if r else FALSE


def star_compare(op: str, a, b) -> int:
    op = _CMP_ALIASES.get(op, op)
    sub = star_subset(a, b)
    sup = star_subset(b, a)
    r = {
        "<=": sub,
        ">=": sup,
        "<": sub and not sup,
        ">": sup and not sub,
        "=": sub and sup,
        "!=": not (sub and sup),
    }.get(op)
    if r is None:
        raise InternalError(f"unknown comparison {op!r}")
    return TRUE if r else FALSE


def compare(op: str, a, b) -> int:
    """Dispatch a comparison to the numeric or collection version."""
    if is_num(a) and is_num(b):
        return num_compare(op, a, b)
    op = _CMP_ALIASES.get(op, op)
    if op in ("=", "!=") and not (isinstance(a, Coll) and type(a) is type(b)):
        eq = star_eq(a, b)
        return eq if op == "=" else TRUE - eq
    return star_compare(op, a, b)


# --- collections -----------------------------------------------------------

_ORDER = {Shape.LIST: 0, Shape.BAG: 1, Shape.SET: 2}


def empty(shape: Shape) -> Coll:
    return EMPTY[shape]


def singleton(shape: Shape, v) -> Coll:
    if shape is Shape.LIST:
        return List((v,))
    if shape is Shape.BAG:
        return Bag.from_counts({v: 1})
    return Set((v,))


def make_coll(shape: Shape, items: Iterable) -> Coll:
    if shape is Shape.LIST:
        return List(items)
    if shape is Shape.BAG:
        return Bag(items)
    return Set(items)


def coll_convert(c: Coll, target: Shape) -> Coll:
    if c.shape is target:
        return c
    if _ORDER[c.shape] > _ORDER[target]:
        raise InternalError(f"cannot convert {c.shape} to {target}")
    if target is Shape.BAG:
        return Bag(c.items)
    if isinstance(c, Bag):
        return Set(c.counts)
    return Set(c.items)


def coll_concat(a: Coll, b: Coll) -> Coll:
    if type(a) is not type(b):
        raise InternalError(f"concatenation of mismatched collections {a!r}, {b!r}")
    if type(a) is List:
        return List(a.items + b.items) if b.items else a
    if type(a) is Bag:
        if not b.counts:
            return a
        if not a.counts:
            return b
        counts = dict(a.counts)
        for k, c in b.counts.items():
            counts[k] = counts.get(k, 0) + c
        r = Bag.__new__(Bag)
        r.counts = counts
        r.size = a.size + b.size
        r._hash = r._key = r._nan = None
        return r
    return Set(a.items | b.items)


def mults(b: Bag) -> Bag:
    if type(b) is not Bag:
        raise InternalError(f"mults needs a bag: {b!r}")
    return Bag(b.counts.values())


def without(c: Coll, v) -> Coll:
    if type(c) is Bag:
        n = c.counts.get(v, 0)
        if n == 0:
            raise InternalError(f"{v!r} does not occur in {c!r}")
        counts = dict(c.counts)
        if n == 1:
            del counts[v]
        else:
            counts[v] = n - 1
        return Bag.from_counts(counts)
    if type(c) is Set:
        if v not in c.items:
            raise InternalError(f"{v!r} does not occur in {c!r}")
        return Set(c.items - {v})
    raise InternalError(f"without needs a bag or set: {c!r}")


def size(c: Coll) -> int:
    return len(c)


EMPTY = {Shape.LIST: List(), Shape.BAG: Bag(), Shape.SET: Set()}


# --- rendering -------------------------------------------------------------

BRACKETS = {Shape.LIST: ("[", "]"), Shape.BAG: ("⟨", "⟩"), Shape.SET: ("{", "}")}
ASCII_BRACKETS = {Shape.LIST: ("[", "]"), Shape.BAG: ("<{", "}>"), Shape.SET: ("{", "}")}


def render(v, ascii: bool = False) -> str:
    """Canonical text form; deterministic because elements are sorted."""
    t = type(v)
    if t is int:
        return str(v)
    if t is Fraction:
        return f"{v.numerator}/{v.denominator}"
    if v is NAN:
        return "NaN"
    if isinstance(v, Coll):
        lo, hi = (ASCII_BRACKETS if ascii else BRACKETS)[v.shape]
        return lo + ", ".join(render(x, ascii) for x in v.instances()) + hi
    if t is Record:
        ids = v.field_ids()
        positional = ids == list(range(1, len(ids) + 1))
        if positional:
            parts = [render(v.fields[i], ascii) for i in ids]
            if len(parts) == 1:
                return f"({parts[0]},)"
            return "(" + ", ".join(parts) + ")"
        return "(" + ", ".join(f"{render_field(i)}: {render(v.fields[i], ascii)}" for i in ids) + ")"
    if t is Tag:
        if v.payload == UNIT:
            return f"@{v.case}"
        inner = render(v.payload, ascii)
        if type(v.payload) is Record:
            return f"@{v.case}{inner}"
        return f"@{v.case}({inner})"
    raise InternalError(f"not a value: {v!r}")
