"""Recursive-descent parser producing the surface tree.

Precedence, loosest first: ``? :`` and ``? { }``; ``∨``; ``∧``; comparisons
(non-associative); ``+ -``; ``* / // \\``; unary ``- ¬``; postfix selection.
Draws ``~d(...)``, tags ``@c(...)``, calls ``f(...)`` and reduces ``(+)(...)``
are primaries.  The full grammar is in docs/grammar.md.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import ParseError
from ..values import Shape
from . import surface as S
from .lexer import Token, tokenize

COMPARISONS = ("=", "!=", "<", "<=", ">", ">=")
ADDITIVE = ("+", "-")
MULTIPLICATIVE = ("*", "/", "//", "\\\\")
BINARY = COMPARISONS + ADDITIVE + MULTIPLICATIVE + ("/\\", "\\/")
OPEN_SHAPE = {"[": Shape.LIST, "<{": Shape.BAG, "{": Shape.SET}
CLOSE = {"(": ")", "[": "]", "{": "}", "<{": "}>"}
ARG_START = ("(", "[", "{", "<{")


class Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    # --- token helpers ---------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def at(self, *kinds, offset=0) -> bool:
        j = min(self.i + offset, len(self.toks) - 1)
        return self.toks[j].kind in kinds

    def next(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def expect(self, kind: str, what: str | None = None) -> Token:
        if self.tok.kind != kind:
            self.fail(f"unexpected {self.describe(self.tok)}", expected=(what or repr(kind),))
        return self.next()

    def fail(self, message, tok: Token | None = None, expected=()):
        tok = tok or self.tok
        raise ParseError(message, tok.line, tok.col, expected)

    @staticmethod
    def describe(t: Token) -> str:
        if t.kind == "EOF":
            return "end of input"
        if t.kind in ("NUM", "IDENT"):
            return f"{t.kind.lower()} {t.value!s}"
        return repr(t.value)

    @staticmethod
    def pos(t: Token):
        return (t.line, t.col)

    # --- programs and blocks ---------------------------------------------------

    def program(self) -> S.Node:
        node = self.sequence("EOF")
        self.expect("EOF", "end of input")
        return node

    def sequence(self, end: str) -> S.Node:
        """``x := e; ...; result`` up to (not including) ``end``.

        When the sequence ends with a binding, its variable is the result.
        """
        start = self.tok
        bindings = []
        result = None
        while True:
            if self.at("IDENT") and self.at(":=", offset=1):
                name = self.next().value
                self.next()
                bindings.append((name, self.expr()))
            else:
                result = self.expr()
                if self.at(";") and self.at(end, offset=1):
                    self.next()
                elif self.at(";"):
                    self.fail("an expression can only stand at the end of a sequence", expected=(repr(end),))
                break
            if not self.at(";"):
                break
            self.next()
            if self.at(end):
                break
        implicit = result is None
        if implicit:
            if not bindings:
                self.fail("empty program")
            result = S.Name(bindings[-1][0], self.pos(start))
        if not bindings:
            return result
        return S.Block(tuple(bindings), result, self.pos(start), implicit)

    # --- expressions -----------------------------------------------------------

    def expr(self) -> S.Node:
        cond = self.disjunction()
        if not self.at("?"):
            return cond
        q = self.next()
        if self.at("{") and self.switch_ahead():
            return self.switch(cond, q)
        then = self.expr()
        self.expect(":", "':' of a conditional")
        other = self.expr()
        return S.Ternary(cond, then, other, self.pos(q))

    def disjunction(self) -> S.Node:
        left = self.conjunction()
        while self.at("\\/"):
            t = self.next()
            left = S.BinOp("\\/", left, self.conjunction(), self.pos(t))
        return left

    def conjunction(self) -> S.Node:
        left = self.comparison()
        while self.at("/\\"):
            t = self.next()
            left = S.BinOp("/\\", left, self.comparison(), self.pos(t))
        return left

    def comparison(self) -> S.Node:
        left = self.additive()
        if self.at(*COMPARISONS):
            t = self.next()
            left = S.BinOp(t.kind, left, self.additive(), self.pos(t))
            if self.at(*COMPARISONS):
                self.fail("comparisons do not chain; use ∧ to combine them")
        return left

    def additive(self) -> S.Node:
        left = self.multiplicative()
        while self.at(*ADDITIVE):
            t = self.next()
            left = S.BinOp(t.kind, left, self.multiplicative(), self.pos(t))
        return left

    def multiplicative(self) -> S.Node:
        left = self.unary()
        while self.at(*MULTIPLICATIVE):
            t = self.next()
            left = S.BinOp(t.kind, left, self.unary(), self.pos(t))
        return left

    def unary(self) -> S.Node:
        if self.at("-", "!"):
            t = self.next()
            return S.Unary(t.kind, self.unary(), self.pos(t))
        return self.postfix()

    def postfix(self) -> S.Node:
        node = self.primary()
        while self.at("."):
            dot = self.next()
            if self.at("#"):
                self.next()
                n = self.expect("NUM", "field number")
                if not isinstance(n.value, int) or n.value < 1:
                    self.fail("positional fields are numbered from 1", n)
                node = S.SelectS(node, n.value, self.pos(dot))
            elif self.at("IDENT"):
                node = S.SelectS(node, self.next().value, self.pos(dot))
            else:
                self.fail(f"unexpected {self.describe(self.tok)} after '.'",
                          expected=("field name", "'#' field number"))
        return node

    def primary(self) -> S.Node:
        t = self.tok
        p = self.pos(t)
        if t.kind == "NUM":
            self.next()
            return S.Num(t.value, p)
        if t.kind == "IDENT":
            self.next()
            if self.at(*ARG_START):
                if t.value == "E":
                    return S.Expect(self.argument(), p)
                return S.Call(t.value, self.argument(), p)
            return S.Name(t.value, p)
        if t.kind == "~":
            self.next()
            name = self.expect("IDENT", "distribution name")
            if name.value == "choose" and self.at("{"):
                return self.choose(p)
            if not self.at(*ARG_START):
                self.fail(f"distribution ~{name.value} needs a bracketed argument",
                          expected=("'('", "'['", "'{'", "'⟨'"))
            return S.Draw(name.value, self.argument(), p)
        if t.kind == "@":
            self.next()
            case = self.expect("IDENT", "tag name").value
            payload = self.argument() if self.at(*ARG_START) else None
            return S.TagS(case, payload, p)
        if t.kind == "(":
            return self.paren()
        if t.kind in OPEN_SHAPE:
            return self.collection()
        self.fail(f"unexpected {self.describe(t)}", expected=("an expression",))

    def argument(self) -> S.Node:
        """Bracketed argument of a call, draw, tag or reduce."""
        if self.at("("):
            return self.paren()
        return self.collection()

    # --- parentheses: unit, grouping, records, blocks, reduces ------------------

    def paren(self) -> S.Node:
        open_ = self.expect("(")
        p = self.pos(open_)
        if self.at(")"):
            self.next()
            return S.RecordS((), p)
        if self.at(*BINARY) and self.at(")", offset=1):
            op = self.next().kind
            self.next()
            if not self.at(*ARG_START):
                self.fail(f"operator ({op}) must be applied to a bracketed collection", expected=("'('", "'['", "'{'", "'⟨'"))
            return S.Reduce(op, self.argument(), p)
        if self.at("IDENT") and self.at(":=", offset=1):
            node = self.sequence(")")
            self.expect(")", "')'")
            return node
        fields: list = []
        seen = set()
        position = 0
        labelled = False
        trailing = False
        while True:
            label = None
            if self.at("IDENT") and self.at(":", offset=1):
                label = self.next().value
                self.next()
            elif self.at("#") and self.at("NUM", offset=1) and self.at(":", offset=2):
                self.next()
                n = self.next()
                if not isinstance(n.value, int) or n.value < 1:
                    self.fail("positional fields are numbered from 1", n)
                label = n.value
                self.next()
            field_tok = self.tok
            value = self.expr()
            if label is None:
                position += 1
                label = position
            else:
                labelled = True
            if label in seen:
                self.fail(f"duplicate field {label!r}", field_tok)
            seen.add(label)
            fields.append((label, value))
            if self.at(")"):
                break
            self.expect(",", "',' or ')'")
            if self.at(")"):
                trailing = True
                break
        self.expect(")", "')'")
        if len(fields) == 1 and not labelled and not trailing:
            return fields[0][1]
        return S.RecordS(tuple(fields), p)

    # --- collections ----------------------------------------------------------

    def collection(self) -> S.Node:
        open_ = self.next()
        if open_.kind not in OPEN_SHAPE:
            self.fail(f"unexpected {self.describe(open_)}", open_, expected=("a bracket",))
        shape = OPEN_SHAPE[open_.kind]
        close = CLOSE[open_.kind]
        p = self.pos(open_)
        if self.at(close):
            self.next()
            return S.Display(shape, (), p)
        if self.generator_ahead():
            head_gen = self.generator()
            clauses = [head_gen]
            if self.at("|"):
                self.next()
                clauses += self.clauses(close)
            self.expect(close, repr(close))
            return S.Comprehension(shape, None, tuple(clauses), p)
        first = self.expr()
        if self.at("|"):
            self.next()
            clauses = self.clauses(close)
            self.expect(close, repr(close))
            return S.Comprehension(shape, first, tuple(clauses), p)
        items = [self.item_rest(first)]
        while self.at(","):
            self.next()
            items.append(self.item_rest(self.expr()))
        self.expect(close, f"',' or {close!r}")
        return S.Display(shape, tuple(items), p)

    def item_rest(self, lo: S.Node) -> S.Item:
        if self.at(".."):
            self.next()
            return S.Item(lo, self.expr())
        return S.Item(lo)

    def clauses(self, close: str) -> list:
        out = []
        while True:
            if self.generator_ahead():
                out.append(self.generator())
            else:
                out.append(S.Filter(self.expr()))
            if not self.at(";"):
                break
            self.next()
            if self.at(close):
                break
        return out

    def pattern_end(self, j: int):
        """Index just past a generator pattern starting at token ``j``, or None."""
        k = self.toks[j].kind
        if k in ("IDENT", "_", "-"):
            return j + 1
        if k == "{":
            j += 1
            while True:
                if self.toks[j].kind not in ("IDENT", "_"):
                    return None
                j += 1
                if self.toks[j].kind == "}":
                    return j + 1
                if self.toks[j].kind != ",":
                    return None
                j += 1
        return None

    def generator_ahead(self) -> bool:
        end = self.pattern_end(self.i)
        return end is not None and self.toks[end].kind == "<-"

    def pattern(self):
        t = self.next()
        if t.kind == "IDENT":
            return t.value
        if t.kind in ("_", "-"):
            return None
        names = []
        while True:
            n = self.next()
            if n.kind == "_":
                self.fail("draws without replacement need named variables", n)
            if n.value in names:
                self.fail(f"variable {n.value} drawn twice in one pattern", n)
            names.append(n.value)
            if self.next().kind == "}":
                break
        if len(names) < 2:
            self.fail("a draw without replacement needs at least two variables", t)
        return tuple(names)

    def generator(self) -> S.Gen:
        patterns = [self.pattern()]
        self.expect("<-", "'←'")
        while self.generator_ahead():
            patterns.append(self.pattern())
            self.expect("<-", "'←'")
        return S.Gen(tuple(patterns), self.expr())

    # --- switches and choice --------------------------------------------------

    def switch_ahead(self) -> bool:
        """After ``?``: does the brace start a switch (contains a top-level →)?"""
        depth = 0
        j = self.i
        while j < len(self.toks):
            k = self.toks[j].kind
            if k in CLOSE:
                depth += 1
            elif k in (")", "]", "}", "}>"):
                depth -= 1
                if depth == 0:
                    return False
            elif k == "->" and depth == 1:
                return True
            elif k == "EOF":
                return False
            j += 1
        return False

    def switch(self, scrutinee: S.Node, q: Token) -> S.Switch:
        self.expect("{")
        cases = []
        kind = None
        while True:
            if self.at("_"):
                self.next()
                case = "default"
            elif self.at("@"):
                case = self.tag_pattern()
            else:
                case = self.num_patterns()
            self.expect("->", "'→'")
            body = self.expr()
            if case == "default":
                cases.append(("default", body))
            else:
                this = "tag" if isinstance(case, tuple) and len(case) == 2 and isinstance(case[0], str) else "num"
                if kind and kind != this:
                    self.fail("cannot mix tag and number patterns in one switch")
                kind = this
                cases.append((case, body))
            if not self.at(";"):
                break
            self.next()
            if self.at("}"):
                break
        self.expect("}", "';' or '}'")
        if kind is None:
            self.fail("a switch needs at least one explicit case", q)
        defaults = [c for c in cases if c[0] == "default"]
        if len(defaults) > 1:
            self.fail("a switch has at most one default case", q)
        out = []
        for case, body in cases:
            if kind == "tag":
                out.append(S.TagCase(None, None, body) if case == "default" else S.TagCase(case[0], case[1], body))
            else:
                out.append(S.NumCase((), body) if case == "default" else S.NumCase(tuple(case), body))
        return S.Switch(scrutinee, tuple(out), self.pos(q))

    def tag_pattern(self):
        self.expect("@")
        case = self.expect("IDENT", "tag name").value
        var = None
        if self.at("("):
            self.next()
            if self.at("_"):
                self.next()
            else:
                var = self.expect("IDENT", "pattern variable").value
            self.expect(")", "')'")
        return (case, var)

    def num_patterns(self) -> list:
        keys = [self.num_key()]
        while self.at(","):
            self.next()
            keys.append(self.num_key())
        return keys

    def num_key(self):
        sign = 1
        if self.at("-"):
            self.next()
            sign = -1
        n = self.expect("NUM", "number, tag or '_' pattern").value
        if self.at("/"):
            self.next()
            d = self.expect("NUM", "denominator").value
            if d == 0:
                self.fail("zero denominator in a switch key")
            n = Fraction(n) / d
        v = Fraction(n) * sign
        return v.numerator if v.denominator == 1 else v

    def choose(self, p) -> S.ChooseS:
        self.expect("{")
        branches = []
        while True:
            e = self.expr()
            self.expect(":", "':' before the probability")
            branches.append((e, self.expr()))
            if not self.at(";", ","):
                break
            self.next()
            if self.at("}"):
                break
        self.expect("}", "';' or '}'")
        return S.ChooseS(tuple(branches), p)


def parse(text: str) -> S.Node:
    return Parser(tokenize(text)).program()


def parse_expr(text: str) -> S.Node:
    p = Parser(tokenize(text))
    node = p.expr()
    p.expect("EOF", "end of input")
    return node
