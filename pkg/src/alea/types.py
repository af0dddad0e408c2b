"""Structural type lattice: membership, emptiness, subtyping, join and meet."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .values import (
    NAN,
    Bag,
    List,
    Record,
    Set,
    Shape,
    Tag,
    field_key,
    render_field,
)


class NumKind(IntEnum):
    BOOL = 0
    NAT = 1
    INT = 2
    RAT = 3

    def __str__(self):
        return self.name.lower()


class Mode(IntEnum):
    POS = 0
    OPT = 1

    def __str__(self):
        return self.name.lower()


@dataclass(frozen=True)
class AnyType:
    def __str__(self):
        return "any"


@dataclass(frozen=True)
class NoneType:
    def __str__(self):
        return "none"


@dataclass(frozen=True)
class NumType:
    kind: NumKind

    def __str__(self):
        return str(self.kind)


@dataclass(frozen=True)
class CollType:
    shape: Shape
    mode: Mode
    elem: "Type"

    def __str__(self):
        mark = "+" if self.mode is Mode.POS else "*"
        elem = str(self.elem)
        if isinstance(self.elem, SumType) and len(self.elem.cases) > 1:
            elem = f"({elem})"
        return f"{self.shape}{mark} of {elem}"


@dataclass(frozen=True)
class ProdType:
    """Record type; ``fields`` is sorted by canonical field order."""

    fields: tuple

    def __str__(self):
        if not self.fields:
            return "()"
        ids = [f for f, _ in self.fields]
        if ids == list(range(1, len(ids) + 1)):
            inner = ", ".join(str(t) for _, t in self.fields)
            return f"({inner},)" if len(ids) == 1 else f"({inner})"
        return "(" + ", ".join(f"{render_field(f)}: {t}" for f, t in self.fields) + ")"

    def get(self, fid):
        for f, t in self.fields:
            if f == fid and type(f) is type(fid):
                return t
        return None

    def as_dict(self) -> dict:
        return dict(self.fields)


@dataclass(frozen=True)
class SumType:
    """Tagged union; ``cases`` is sorted by case name."""

    cases: tuple

    def __str__(self):
        if not self.cases:
            return "@{}"
        parts = []
        for c, t in self.cases:
            parts.append(f"@{c}" if t == UNIT_T else f"@{c}{t}" if isinstance(t, ProdType) else f"@{c}({t})")
        return " | ".join(parts)

    def get(self, case):
        for c, t in self.cases:
            if c == case:
                return t
        return None

    def as_dict(self) -> dict:
        return dict(self.cases)


Type = Union[AnyType, NoneType, NumType, CollType, ProdType, SumType]

ANY = AnyType()
NONE = NoneType()
BOOL = NumType(NumKind.BOOL)
NAT = NumType(NumKind.NAT)
INT = NumType(NumKind.INT)
RAT = NumType(NumKind.RAT)


def prod(fields: Mapping | Iterable = ()) -> ProdType:
    items = dict(fields).items()
    return ProdType(tuple(sorted(items, key=lambda ft: field_key(ft[0]))))


def tuple_type(*types: Type) -> ProdType:
    return prod({i: t for i, t in enumerate(types, 1)})


def sum_type(cases: Mapping | Iterable = ()) -> SumType:
    return SumType(tuple(sorted(dict(cases).items())))


def coll(shape: Shape, mode: Mode, elem: Type) -> CollType:
    return CollType(shape, mode, elem)


UNIT_T = prod()


# --- extensional membership -------------------------------------------------

def inhabits(v, t: Type) -> bool:
    """Membership of a value in the extension of a type."""
    if t is ANY or isinstance(t, AnyType):
        return True
    if isinstance(t, NoneType):
        return False
    if isinstance(t, NumType):
        vt = type(v)
        if v is NAN:
            return t.kind is not NumKind.BOOL
        if vt is int:
            if t.kind is NumKind.BOOL:
                return v == 0 or v == 1
            if t.kind is NumKind.NAT:
                return v >= 0
            return True
        if vt is Fraction:
            return t.kind is NumKind.RAT
        return False
    if isinstance(t, CollType):
        if not isinstance(v, (List, Bag, Set)) or v.shape is not t.shape:
            return False
        if t.mode is Mode.POS and len(v) == 0:
            return False
        elems = v.counts if type(v) is Bag else v.items
        return all(inhabits(x, t.elem) for x in elems)
    if isinstance(t, ProdType):
        if type(v) is not Record:
            return False
        for f, ft in t.fields:
            if f not in v.fields or not inhabits(v.fields[f], ft):
                return False
        return True
    if isinstance(t, SumType):
        if type(v) is not Tag:
            return False
        ct = t.get(v.case)
        return ct is not None and inhabits(v.payload, ct)
    raise TypeError(f"not a type: {t!r}")


# --- emptiness --------------------------------------------------------------

def is_empty(t: Type) -> bool:
    if isinstance(t, NoneType):
        return True
    if isinstance(t, CollType):
        return t.mode is Mode.POS and is_empty(t.elem)
    if isinstance(t, SumType):
        return all(is_empty(ct) for _, ct in t.cases)
    if isinstance(t, ProdType):
        return any(is_empty(ft) for _, ft in t.fields)
    return False


# --- subtyping ---------------------------------------------------------------

def subtype(t1: Type, t2: Type) -> bool:
    if isinstance(t1, NoneType) or isinstance(t2, AnyType):
        return True
    if isinstance(t1, NumType) and isinstance(t2, NumType):
        return t1.kind <= t2.kind
    if isinstance(t1, CollType) and isinstance(t2, CollType):
        return t1.shape is t2.shape and t1.mode <= t2.mode and subtype(t1.elem, t2.elem)
    if isinstance(t1, ProdType) and isinstance(t2, ProdType):
        for f, ft2 in t2.fields:
            ft1 = t1.get(f)
            if ft1 is None or not subtype(ft1, ft2):
                return False
        return True
    if isinstance(t1, SumType) and isinstance(t2, SumType):
        for c, ct1 in t1.cases:
            ct2 = t2.get(c)
            if ct2 is None or not subtype(ct1, ct2):
                return False
        return True
    return False


def join(t1: Type, t2: Type) -> Type:
    if isinstance(t1, AnyType) or isinstance(t2, AnyType):
        return ANY
    if isinstance(t1, NoneType):
        return t2
    if isinstance(t2, NoneType):
        return t1
    if isinstance(t1, NumType) and isinstance(t2, NumType):
        return t1 if t1.kind >= t2.kind else t2
    if isinstance(t1, CollType) and isinstance(t2, CollType):
        if t1.shape is not t2.shape:
            return ANY
        return CollType(t1.shape, max(t1.mode, t2.mode), join(t1.elem, t2.elem))
    if isinstance(t1, ProdType) and isinstance(t2, ProdType):
        d2 = t2.as_dict()
        return prod({f: join(ft, d2[f]) for f, ft in t1.fields if f in d2})
    if isinstance(t1, SumType) and isinstance(t2, SumType):
        cases = t1.as_dict()
        for c, ct in t2.cases:
            cases[c] = join(cases[c], ct) if c in cases else ct
        return sum_type(cases)
    return ANY


def meet(t1: Type, t2: Type) -> Type:
    if isinstance(t1, NoneType) or isinstance(t2, NoneType):
        return NONE
    if isinstance(t1, AnyType):
        return t2
    if isinstance(t2, AnyType):
        return t1
    if isinstance(t1, NumType) and isinstance(t2, NumType):
        return t1 if t1.kind <= t2.kind else t2
    if isinstance(t1, CollType) and isinstance(t2, CollType):
        if t1.shape is not t2.shape:
            return NONE
        return CollType(t1.shape, min(t1.mode, t2.mode), meet(t1.elem, t2.elem))
    if isinstance(t1, ProdType) and isinstance(t2, ProdType):
        fields = t1.as_dict()
        for f, ft in t2.fields:
            fields[f] = meet(fields[f], ft) if f in fields else ft
        return prod(fields)
    if isinstance(t1, SumType) and isinstance(t2, SumType):
        d2 = t2.as_dict()
        return sum_type({c: meet(ct, d2[c]) for c, ct in t1.cases if c in d2})
    return NONE


def join_all(types: Iterable[Type]) -> Type:
    r = NONE
    for t in types:
        r = join(r, t)
    return r


def meet_all(types: Iterable[Type]) -> Type:
    r = ANY
    for t in types:
        r = meet(r, t)
    return r


# --- literals ----------------------------------------------------------------

def least_type_of(v) -> Type:
    """Smallest type whose extension contains ``v``."""
    vt = type(v)
    if vt is int:
        if v == 0 or v == 1:
            return BOOL
        return NAT if v > 1 else INT
    if vt is Fraction or v is NAN:
        return RAT
    if vt in (List, Bag, Set):
        elems = v.counts if vt is Bag else v.items
        mode = Mode.POS if len(v) else Mode.OPT
        return CollType(v.shape, mode, join_all(least_type_of(x) for x in elems))
    if vt is Record:
        return prod({f: least_type_of(x) for f, x in v.fields.items()})
    if vt is Tag:
        return sum_type({v.case: least_type_of(v.payload)})
    raise TypeError(f"not a value: {v!r}")


def render_type(t: Type) -> str:
    return str(t)


def to_sexpr(t: Type) -> str:
    """Unambiguous prefix form used in serialized syntax trees."""
    if isinstance(t, AnyType):
        return "any"
    if isinstance(t, NoneType):
        return "none"
    if isinstance(t, NumType):
        return f"(num {t.kind})"
    if isinstance(t, CollType):
        return f"(coll {t.shape} {t.mode} {to_sexpr(t.elem)})"
    if isinstance(t, ProdType):
        return "(prod" + "".join(f" ({render_field(f)} {to_sexpr(ft)})" for f, ft in t.fields) + ")"
    return "(sum" + "".join(f" ({c} {to_sexpr(ct)})" for c, ct in t.cases) + ")"
