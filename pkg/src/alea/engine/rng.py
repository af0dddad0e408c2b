"""Pseudo-random generator: PCG with the RXS-M-XS 64/64 output permutation.

The state is a 64-bit word advanced by a linear congruential step; each step
emits one 64-bit output computed from the state before the step.  Categorical
draws with rational probabilities are exact: an integer is drawn uniformly
from ``[0, L)``, where ``L`` is the least common denominator, by rejection
sampling over as many output words as needed.  See docs/rng.md.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from ..errors import InternalError

MASK = (1 << 64) - 1
MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
OUTPUT_MULTIPLIER = 12605985483714917081

DEFAULT_SEED = 0x5EED


def output(state: int) -> int:
    word = (((state >> ((state >> 59) + 5)) ^ state) * OUTPUT_MULTIPLIER) & MASK
    return (word >> 43) ^ word


def step(state: int) -> tuple[int, int]:
    """Next state and the 64-bit output of the current one."""
    return (state * MULTIPLIER + INCREMENT) & MASK, output(state)


def seed_state(seed: int) -> int:
    return seed & MASK


def uniform_below(state: int, bound: int) -> tuple[int, int]:
    """Uniform integer in ``[0, bound)`` and the new state."""
    if bound < 1:
        raise InternalError("empty range")
    if bound == 1:
        return state, 0
    words = (bound.bit_length() + 63) // 64
    span = 1 << (64 * words)
    limit = span - span % bound
    while True:
        x = 0
        for _ in range(words):
            state, w = step(state)
            x = (x << 64) | w
        if x < limit:
            return state, x % bound


def random(state: int, probs: Sequence[Fraction]) -> tuple[int, int]:
    """Draw a 1-based index with the given exact probabilities."""
    probs = [Fraction(p) for p in probs]
    if not probs or any(p <= 0 for p in probs) or sum(probs) != 1:
        raise InternalError(f"malformed probabilities {list(probs)!r}")
    if len(probs) == 1:
        return state, 1
    common = lcm(*(p.denominator for p in probs))
    state, u = uniform_below(state, common)
    threshold = 0
    for i, p in enumerate(probs, 1):
        threshold += p.numerator * (common // p.denominator)
        if u < threshold:
            return state, i
    raise InternalError("probabilities do not cover the draw")


class Generator:
    """Mutable wrapper threading one state through successive draws."""

    def __init__(self, seed: int = DEFAULT_SEED):
        self.state = seed_state(seed)

    def random(self, probs: Sequence[Fraction]) -> int:
        self.state, k = random(self.state, probs)
        return k

    def next64(self) -> int:
        self.state, w = step(self.state)
        return w
