"""Alea: exact analysis and simulation of random experiments.

Typical use::

    >>> import alea
    >>> prog = alea.compile("~bernoulli(0.503) ? @head : @ship")
    >>> str(prog.type)
    '@head | @ship'
    >>> alea.analyze(prog).prob(alea.read_value("@head"))
    Fraction(503, 1000)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from . import ast
from .dist import Dist
from .engine import DEFAULT_SEED, check_program, eval_det, eval_dist
from .engine import sample as _sample
from .errors import AleaError, AleaTypeError, EvalError, InternalError, ParseError, SourceError
from .frontend import desugar, parse
from .textio import read_value
from .types import Type
from .values import render

__all__ = [
    "Program", "compile", "analyze", "evaluate", "sample",
    "read_value", "render",
    "AleaError", "AleaTypeError", "EvalError", "InternalError", "ParseError", "SourceError",
    "DEFAULT_SEED",
]


@dataclass(frozen=True)
class Program:
    """A parsed, desugared and type-checked program."""

    expr: ast.Expr
    type: Type
    env_types: Mapping[str, Type] = field(default_factory=dict)

    @property
    def deterministic(self) -> bool:
        return self.expr.det


def compile(text: str, env_types: Mapping[str, Type] | None = None) -> Program:
    """Parse, desugar and type-check ``text``; ``env_types`` declares free variables."""
    env_types = dict(env_types or {})
    core = desugar(parse(text), env_types)
    t, elaborated = check_program(env_types, core)
    return Program(elaborated, t, env_types)


def _program(p) -> Program:
    return compile(p) if isinstance(p, str) else p


def analyze(p: Program | str, env: Mapping | None = None, fast: bool = True) -> Dist:
    """Exact distribution of the program's result."""
    return eval_dist(env or {}, _program(p).expr, fast)


def evaluate(p: Program | str, env: Mapping | None = None):
    """Value of a deterministic program."""
    return eval_det(env or {}, _program(p).expr)


def sample(p: Program | str, trials: int, seed: int = DEFAULT_SEED, env: Mapping | None = None) -> list:
    """``trials`` pseudo-random outcomes from one generator stream."""
    return _sample(env or {}, _program(p).expr, trials, seed)
