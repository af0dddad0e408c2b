"""Reader for the canonical text form of values produced by :func:`values.render`."""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import AleaError
from .values import NAN, Bag, List, Record, Set, Tag, num

_TOKEN = re.compile(
    r"\s*(?:(?P<num>-?\d+(?:/\d+)?)|(?P<nan>NaN)|(?P<tag>@[^\W\d]\w*)|(?P<field>#\d+|[^\W\d]\w*)"
    r"|(?P<punct><\{|\}>|[\[\]{}()⟨⟩,:]))"
)

_CLOSE = {"[": "]", "{": "}", "⟨": "⟩", "<{": "}>"}


class ValueSyntaxError(AleaError):
    pass


def _tokens(text: str) -> list:
    out, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            return out
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueSyntaxError(f"unexpected character {text[pos]!r} at offset {pos}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()


class _Reader:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ValueSyntaxError(f"expected {value or 'a value'}, found {tok[1]!r}")
        self.i += 1
        return tok

    def value(self):
        kind, text = self.take()
        if kind == "num":
            return num(Fraction(text))
        if kind == "nan":
            return NAN
        if kind == "tag":
            if self.peek()[1] == "(":
                return Tag(text[1:], self.paren())
            return Tag(text[1:])
        if kind == "punct" and text in _CLOSE:
            items = self.items(_CLOSE[text])
            if text == "[":
                return List(items)
            if text == "{":
                return Set(items)
            return Bag(items)
        if kind == "punct" and text == "(":
            self.i -= 1
            return self.paren()
        raise ValueSyntaxError(f"unexpected {text!r}")

    def items(self, close: str) -> list:
        out = []
        if self.peek()[1] == close:
            self.take()
            return out
        while True:
            out.append(self.value())
            if self.take()[1] == close:
                return out

    def paren(self):
        """Record, 1-tuple ``(x,)``, unit ``()`` or a parenthesized value."""
        self.take("(")
        fields, pos, trailing = {}, 0, False
        if self.peek()[1] == ")":
            self.take()
            return Record()
        while True:
            kind, text = self.peek()
            if kind == "field" and self.i + 1 < len(self.toks) and self.toks[self.i + 1][1] == ":":
                self.i += 2
                fid = int(text[1:]) if text.startswith("#") else text
                fields[fid] = self.value()
            else:
                pos += 1
                fields[pos] = self.value()
            sep = self.take()[1]
            if sep == ")":
                break
            if sep != ",":
                raise ValueSyntaxError(f"expected , or ), found {sep!r}")
            if self.peek()[1] == ")":
                self.take()
                trailing = True
                break
        if len(fields) == 1 and 1 in fields and not trailing:
            return fields[1]
        return Record(fields)


def read_value(text: str):
    r = _Reader(text)
    v = r.value()
    if r.i != len(r.toks):
        raise ValueSyntaxError(f"trailing input after value: {r.toks[r.i][1]!r}")
    return v
