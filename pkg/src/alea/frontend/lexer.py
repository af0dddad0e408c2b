"""Tokenizer.  Unicode and ASCII operator spellings map to one token kind."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import LexError
from ..values import num


@dataclass(frozen=True)
class Token:
    kind: str  # NUM, IDENT, EOF or the canonical spelling of a symbol
    value: object
    line: int
    col: int

    def __repr__(self):
        return f"{self.kind}({self.value!r})@{self.line}:{self.col}" if self.kind in ("NUM", "IDENT") \
            else f"{self.kind}@{self.line}:{self.col}"


# (spelling, canonical kind); longest spellings first within each leading character
SYMBOLS = [
    ("...", ".."), ("…", ".."), ("..", ".."),
    ("<-", "<-"), ("←", "<-"),
    ("->", "->"), ("→", "->"),
    ("/\\", "/\\"), ("∧", "/\\"),
    ("\\/", "\\/"), ("∨", "\\/"),
    ("\\\\", "\\\\"),
    ("//", "//"),
    ("<=", "<="), ("≤", "<="),
    (">=", ">="), ("≥", ">="),
    ("!=", "!="), ("≠", "!="),
    (":=", ":="),
    ("<{", "<{"), ("⟨", "<{"),
    ("⟩", "}>"),
    ("¬", "!"), ("!", "!"),
    ("−", "-"),
    ("+", "+"), ("-", "-"), ("*", "*"), ("/", "/"),
    ("=", "="), ("<", "<"), (">", ">"),
    ("~", "~"), ("@", "@"), ("#", "#"), ("?", "?"), (":", ":"), ("|", "|"),
    (";", ";"), (",", ","), (".", "."),
    ("(", "("), (")", ")"), ("[", "["), ("]", "]"), ("{", "{"), ("}", "}"),
]

_IDENT = re.compile(r"[^\W\d]\w*")
_NUMBER = re.compile(r"\d+(?:\.\d+)?")

OPENERS = {"(": ")", "[": "]", "{": "}", "<{": "}>"}


def _number(text: str):
    if "." in text:
        whole, frac = text.split(".")
        return num(Fraction(int(whole + frac), 10 ** len(frac)))
    return int(text)


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    stack: list[str] = []  # open brackets, so that "}>" only closes a bag
    i, line, line_start = 0, 1, 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line, line_start = line + 1, i
            continue
        if c.isspace():
            i += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        col = i - line_start + 1
        m = _NUMBER.match(text, i)
        if m:
            out.append(Token("NUM", _number(m.group()), line, col))
            i = m.end()
            continue
        m = _IDENT.match(text, i)
        if m:
            word = m.group()
            out.append(Token("_" if word == "_" else "IDENT", word, line, col))
            i = m.end()
            continue
        for spelling, kind in SYMBOLS:
            if text.startswith(spelling, i):
                break
        else:
            raise LexError(f"illegal character {c!r}", line, col)
        if kind == "}" and text.startswith("}>", i) and stack and stack[-1] == "<{":
            spelling, kind = "}>", "}>"
        if kind in OPENERS:
            stack.append(kind)
        elif kind in (")", "]", "}", "}>") and stack:
            stack.pop()
        out.append(Token(kind, spelling, line, col))
        i += len(spelling)
    col = n - line_start + 1
    out.append(Token("EOF", None, line, col))
    return out
