"""Concrete syntax: tokenizer, parser and desugaring into core expressions."""

from .desugar import desugar
from .lexer import tokenize
from .parser import parse, parse_expr

__all__ = ["tokenize", "parse", "parse_expr", "desugar"]
