"""Built-in functions and distributions.

Every function has a single untyped implementation plus a list of type
signatures.  A signature is either fixed (``arg -> result``) or a schema that
computes the one relevant instance for a concrete argument type.  Resolution
collects every signature whose formal argument type is a supertype of the
actual one and returns the meet of their result types.

Functions with algebraic flags can also be applied to a whole collection,
which reduces the collection with the binary operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from . import dist as D
from .errors import AleaTypeError, EvalError, InternalError
from .types import (
    ANY,
    BOOL,
    INT,
    NAT,
    RAT,
    CollType,
    Mode,
    ProdType,
    Type,
    coll,
    join,
    join_all,
    least_type_of,
    meet_all,
    subtype,
    tuple_type,
)
from .values import (
    FALSE,
    NAN,
    TRUE,
    Bag,
    Coll,
    List,
    Record,
    Set,
    Shape,
    coll_concat,
    coll_convert,
    compare,
    is_num,
    make_coll,
    mults,
    num_arith,
    without,
)


@dataclass(frozen=True)
class Flags:
    """Algebraic properties of a binary function on one element domain."""

    associative: bool
    commutative: bool
    idempotent: bool
    neutral: object = None


class Fixed:
    def __init__(self, arg: Type, result: Type):
        self.arg, self.result = arg, result
        self.doc = f"{arg} -> {result}"

    def __call__(self, _argtype):
        return self.arg, self.result


class Schema:
    def __init__(self, fn: Callable[[Type], Optional[tuple]], doc: str):
        self.fn, self.doc = fn, doc

    def __call__(self, argtype):
        return self.fn(argtype)


@dataclass
class Builtin:
    name: str
    impl: Callable
    signatures: list
    binary: Optional[Callable] = None
    flags: Optional[Callable[[Type], Optional[Flags]]] = None
    flags_doc: str = ""
    internal: bool = False
    doc: str = ""


@dataclass
class DistBuiltin:
    name: str
    impl: Callable[[object], D.Dist]
    signatures: list
    doc: str = ""


FUNCTIONS: dict[str, Builtin] = {}
DISTRIBUTIONS: dict[str, DistBuiltin] = {}


def _register(b: Builtin) -> Builtin:
    FUNCTIONS[b.name] = b
    return b


def _pair(a: Type, b: Type) -> ProdType:
    return tuple_type(a, b)


def _args(v):
    if type(v) is not Record or 1 not in v.fields or 2 not in v.fields:
        raise InternalError(f"expected a pair, got {v!r}")
    return v.fields[1], v.fields[2]


def _binary_impl(op: Callable) -> Callable:
    def impl(v):
        return op(*_args(v))
    return impl


NUMERIC_KINDS = {"q": RAT, "z": INT, "n": NAT, "b": BOOL}


def _num_sigs(kinds: str, result=None) -> list:
    """``kinds`` lists kinds such as ``"qzn"``; each gives ``k x k -> k`` (or ``-> result``)."""
    out = []
    for k in kinds:
        t = NUMERIC_KINDS[k]
        out.append(Fixed(_pair(t, t), result or t))
    return out


def _pair_colls(argtype):
    if not isinstance(argtype, ProdType):
        return None
    a, b = argtype.get(1), argtype.get(2)
    if isinstance(a, CollType) and isinstance(b, CollType) and a.shape is b.shape:
        return a, b
    return None


def _concat_schema(argtype):
    ab = _pair_colls(argtype)
    if ab is None:
        return None
    a, b = ab
    return _pair(a, b), coll(a.shape, min(a.mode, b.mode), join(a.elem, b.elem))


def _same_shape_schema(result: Type):
    def fn(argtype):
        ab = _pair_colls(argtype)
        if ab is None:
            return None
        s = ab[0].shape
        return _pair(coll(s, Mode.OPT, ANY), coll(s, Mode.OPT, ANY)), result
    return fn


def _plus(x, y):
    if is_num(x) and is_num(y):
        return num_arith("+", x, y)
    if isinstance(x, Coll) and type(x) is type(y):
        return coll_concat(x, y)
    raise InternalError(f"+ on {x!r}, {y!r}")


def _plus_flags(r: Type) -> Optional[Flags]:
    if subtype(r, RAT):
        return Flags(True, True, False, 0)
    if isinstance(r, CollType):
        return {
            Shape.LIST: Flags(True, False, False, List()),
            Shape.BAG: Flags(True, True, False, Bag()),
            Shape.SET: Flags(True, True, True, Set()),
        }[r.shape]
    return None


def _times_flags(r):
    return Flags(True, True, False, 1) if subtype(r, RAT) else None


def _lattice_flags(bool_neutral):
    def flags(r):
        if not subtype(r, RAT):
            return None
        return Flags(True, True, True, bool_neutral if subtype(r, BOOL) else None)
    return flags


def _arith(op):
    return lambda x, y: num_arith(op, x, y)


_register(Builtin(
    "+", _binary_impl(_plus),
    _num_sigs("qzn") + [Schema(_concat_schema, "S(m1, t1) x S(m2, t2) -> S(m1 meet m2, t1 join t2) for each shape S")],
    binary=_plus, flags=_plus_flags,
    flags_doc="numbers: assoc, comm, neutral 0; list: assoc, neutral []; bag: assoc, comm, neutral <{}>; "
              "set: assoc, comm, idem, neutral {}",
    doc="addition; concatenation of lists, disjoint union of bags, union of sets"))
_register(Builtin("-", _binary_impl(_arith("-")), _num_sigs("qz"), doc="subtraction"))
_register(Builtin(
    "*", _binary_impl(_arith("*")), _num_sigs("qznb"), binary=_arith("*"), flags=_times_flags,
    flags_doc="numbers: assoc, comm, neutral 1", doc="multiplication"))
_register(Builtin("/", _binary_impl(_arith("/")), _num_sigs("q"), doc="exact division; x/0 is NaN"))
_register(Builtin("//", _binary_impl(_arith("//")), _num_sigs("zn"), doc="floor division; x//0 is NaN"))
_register(Builtin("\\", _binary_impl(_arith("\\")), _num_sigs("zn"),
                  doc="modulus matching floor division; x\\0 is NaN"))
_register(Builtin(
    "min", _binary_impl(_arith("min")), _num_sigs("bnzq"), binary=_arith("min"), flags=_lattice_flags(1),
    flags_doc="numbers: assoc, comm, idem; neutral 1 on bool", doc="minimum; conjunction on bool"))
_register(Builtin(
    "max", _binary_impl(_arith("max")), _num_sigs("bnzq"), binary=_arith("max"), flags=_lattice_flags(0),
    flags_doc="numbers: assoc, comm, idem; neutral 0 on bool", doc="maximum; disjunction on bool"))


def _cmp(op):
    return lambda v: compare(op, *_args(v))


for _op in ("=", "!=", "<", "<=", ">", ">="):
    _register(Builtin(
        _op, _cmp(_op),
        [Fixed(_pair(RAT, RAT), BOOL),
         Schema(_same_shape_schema(BOOL), "S(opt, any) x S(opt, any) -> bool, star comparison")],
        doc="comparison; false on NaN except !=" if _op != "!=" else "negated comparison"))


def _unary(fn):
    def impl(x):
        if x is NAN:
            return NAN
        return fn(x)
    return impl


def _parity(r):
    def impl(x):
        if x is NAN:
            return FALSE
        return TRUE if x % 2 == r else FALSE
    return impl


def _sgn(x):
    return (x > 0) - (x < 0)


_register(Builtin("not", lambda x: TRUE - x, [Fixed(BOOL, BOOL)], doc="negation on bool"))
_register(Builtin("neg", _unary(lambda x: -x), [Fixed(INT, INT), Fixed(RAT, RAT)], doc="unary minus"))
_register(Builtin("even", _parity(0), [Fixed(INT, BOOL)], doc="parity test; false on NaN"))
_register(Builtin("odd", _parity(1), [Fixed(INT, BOOL)], doc="parity test; false on NaN"))
_register(Builtin("abs", _unary(abs), [Fixed(INT, NAT), Fixed(RAT, RAT)], doc="absolute value"))
_register(Builtin("sgn", _unary(_sgn), [Fixed(RAT, INT)], doc="sign: -1, 0 or 1"))


def _mults_schema(argtype):
    if isinstance(argtype, CollType) and argtype.shape is Shape.BAG:
        return coll(Shape.BAG, argtype.mode, ANY), coll(Shape.BAG, argtype.mode, NAT)
    return None


def _size_schema(argtype):
    if isinstance(argtype, CollType):
        return coll(argtype.shape, Mode.OPT, ANY), NAT
    return None


_register(Builtin("mults", mults, [Schema(_mults_schema, "bag(m, any) -> bag(m, nat)")],
                  doc="bag of the multiplicities of a bag's distinct elements"))
_register(Builtin("size", len, [Schema(_size_schema, "S(opt, any) -> nat")],
                  doc="number of element instances"))


# --- desugaring targets -------------------------------------------------------

def _display_schema(shape):
    def fn(argtype):
        if not isinstance(argtype, ProdType):
            return None
        ids = [f for f, _ in argtype.fields]
        if ids != list(range(1, len(ids) + 1)):
            return None
        if not ids:
            return argtype, coll(shape, Mode.OPT, join_all([]))
        return argtype, coll(shape, Mode.POS, join_all(t for _, t in argtype.fields))
    return fn


def _display_impl(shape):
    def impl(v):
        n = len(v.fields)
        return make_coll(shape, [v.fields[i] for i in range(1, n + 1)])
    return impl


def _convert_schema(target):
    order = {Shape.LIST: 0, Shape.BAG: 1, Shape.SET: 2}

    def fn(argtype):
        if isinstance(argtype, CollType) and order[argtype.shape] <= order[target]:
            return argtype, coll(target, argtype.mode, argtype.elem)
        return None
    return fn


def _range_impl(v):
    lo, hi = _args(v)
    if lo is NAN or hi is NAN:
        return List()
    return List(range(lo, hi + 1))


def _without_schema(argtype):
    if isinstance(argtype, ProdType):
        c = argtype.get(1)
        if isinstance(c, CollType) and c.shape in (Shape.BAG, Shape.SET) and argtype.get(2) is not None:
            return _pair(coll(c.shape, c.mode, c.elem), ANY), coll(c.shape, Mode.OPT, c.elem)
    return None


for _shape in Shape:
    _register(Builtin(f"${_shape}", _display_impl(_shape),
                      [Schema(_display_schema(_shape), f"(t1, ..., tn) -> {_shape}(pos, t1 join ... join tn)")],
                      internal=True, doc=f"{_shape} display"))
_register(Builtin("$asbag", lambda c: coll_convert(c, Shape.BAG),
                  [Schema(_convert_schema(Shape.BAG), "list/bag(m, t) -> bag(m, t)")],
                  internal=True, doc="forget order"))
_register(Builtin("$asset", lambda c: coll_convert(c, Shape.SET),
                  [Schema(_convert_schema(Shape.SET), "list/bag/set(m, t) -> set(m, t)")],
                  internal=True, doc="forget order and multiplicity"))
_register(Builtin("$range", _range_impl,
                  [Fixed(_pair(INT, INT), coll(Shape.LIST, Mode.OPT, INT)),
                   Fixed(_pair(NAT, NAT), coll(Shape.LIST, Mode.OPT, NAT))],
                  internal=True, doc="integers lo..hi; empty when hi < lo or a bound is NaN"))
_register(Builtin("$without", _binary_impl(without),
                  [Schema(_without_schema, "bag/set(m, t) x any -> bag/set(opt, t)")],
                  internal=True, doc="remove one instance of an element"))


# --- resolution ----------------------------------------------------------------

def lookup(f: str) -> Builtin:
    try:
        return FUNCTIONS[f]
    except KeyError:
        raise AleaTypeError("unknown-function", f"no built-in function {f!r}") from None


def reduce_info(f: str, argtype: CollType) -> tuple[Type, object]:
    """Result type and neutral element for reducing a collection with ``f``."""
    b = lookup(f)
    if b.flags is None:
        raise AleaTypeError("reduce", f"{f} cannot reduce a collection (no known algebraic properties)")
    r = argtype.elem
    for _ in range(16):
        u = _resolve_direct(b, _pair(r, r))
        if u is None:
            raise AleaTypeError("reduce", f"{f} is not defined on pairs of {r}")
        r2 = join(r, u)
        if r2 == r:
            break
        r = r2
    else:
        raise AleaTypeError("reduce", f"no stable fold type for {f} over {argtype}")
    flags = b.flags(r)
    if flags is None or not flags.associative:
        raise AleaTypeError("reduce", f"{f} is not known to be associative on {r}")
    if argtype.shape is not Shape.LIST and not flags.commutative:
        raise AleaTypeError("reduce", f"{f} is not known to be commutative on {r}; cannot reduce a {argtype.shape}")
    if argtype.shape is Shape.SET and not flags.idempotent:
        raise AleaTypeError("reduce", f"{f} is not known to be idempotent on {r}; cannot reduce a set")
    if argtype.mode is Mode.OPT:
        if flags.neutral is None:
            raise AleaTypeError("reduce", f"{f} has no neutral element on {r}; the {argtype.shape} may be empty")
        r = join(r, least_type_of(flags.neutral))
    return r, flags.neutral


def _resolve_direct(b: Builtin, argtype: Type) -> Optional[Type]:
    results = []
    for sig in b.signatures:
        inst = sig(argtype)
        if inst is not None and subtype(argtype, inst[0]):
            results.append(inst[1])
    return meet_all(results) if results else None


def resolve(f: str, argtype: Type) -> Type:
    b = lookup(f)
    if isinstance(argtype, CollType) and b.flags is not None:
        return reduce_info(f, argtype)[0]
    r = _resolve_direct(b, argtype)
    if r is None:
        raise AleaTypeError("no-signature", f"{f} cannot be applied to {argtype}")
    return r


def reduce(f: str, c: Coll, neutral=None):
    """Fold ``c`` with the binary operation ``f``; bags use repeated squaring per element."""
    op = lookup(f).binary
    if op is None:
        raise InternalError(f"{f} has no binary operation")
    acc = None
    if type(c) is Bag:
        for k in c.distinct():
            p = _power(op, k, c.counts[k])
            acc = p if acc is None else op(acc, p)
    else:
        for x in (c.items if type(c) is List else c.distinct()):
            acc = x if acc is None else op(acc, x)
    if acc is None:
        if neutral is None:
            raise EvalError(f"reduce of an empty collection with {f} needs a neutral element")
        return neutral
    return acc


def _power(op, x, n: int):
    result = None
    while True:
        if n & 1:
            result = x if result is None else op(result, x)
        n >>= 1
        if not n:
            return result
        x = op(x, x)


def apply(f: str, v, neutral=None):
    b = lookup(f)
    if b.flags is not None and isinstance(v, Coll):
        return reduce(f, v, neutral)
    return b.impl(v)


# --- distributions --------------------------------------------------------------

def _uniform(c) -> D.Dist:
    if type(c) is Bag:
        weights = c.counts
    elif type(c) is Set:
        weights = {x: 1 for x in c.items}
    elif type(c) is List:
        weights = {}
        for x in c.items:
            weights[x] = weights.get(x, 0) + 1
    else:
        raise InternalError(f"uniform over a non-collection {c!r}")
    return D.uniform(weights)


def _uniform_schema(argtype):
    if isinstance(argtype, CollType) and argtype.mode is Mode.POS:
        return argtype, argtype.elem
    return None


DISTRIBUTIONS["uniform"] = DistBuiltin(
    "uniform", _uniform, [Schema(_uniform_schema, "S(pos, t) -> t")],
    doc="equiprobable over element instances (bag multiplicity and list positions count)")
DISTRIBUTIONS["bernoulli"] = DistBuiltin(
    "bernoulli", D.bernoulli, [Fixed(RAT, BOOL)], doc="1 with probability p, else 0; p must lie in [0, 1]")


def resolve_dist(d: str, argtype: Type) -> Type:
    try:
        b = DISTRIBUTIONS[d]
    except KeyError:
        raise AleaTypeError("unknown-distribution", f"no built-in distribution {d!r}") from None
    results = []
    for sig in b.signatures:
        inst = sig(argtype)
        if inst is not None and subtype(argtype, inst[0]):
            results.append(inst[1])
    if not results:
        raise AleaTypeError("no-signature", f"~{d} cannot be applied to {argtype}")
    return meet_all(results)


def make_dist(d: str, param) -> D.Dist:
    try:
        b = DISTRIBUTIONS[d]
    except KeyError:
        raise EvalError(f"no built-in distribution {d!r}") from None
    return b.impl(param)


def builtin_table() -> str:
    """Markdown table of the registry, used to generate docs/builtins.md."""
    lines = ["# Built-in functions", "",
             "| name | signatures | reduce flags | description |", "|---|---|---|---|"]
    for name in sorted(FUNCTIONS):
        b = FUNCTIONS[name]
        sigs = "<br>".join(s.doc.replace("|", "\\|") for s in b.signatures)
        shown = name.replace("\\", "\\\\").replace("|", "\\|")
        tag = " (internal)" if b.internal else ""
        lines.append(f"| `{shown}`{tag} | {sigs} | {b.flags_doc or '-'} | {b.doc} |")
    lines += ["", "# Built-in distributions", "", "| name | signatures | description |", "|---|---|---|"]
    for name in sorted(DISTRIBUTIONS):
        b = DISTRIBUTIONS[name]
        sigs = "<br>".join(s.doc for s in b.signatures)
        lines.append(f"| `~{name}` | {sigs} | {b.doc} |")
    return "\n".join(lines) + "\n"
