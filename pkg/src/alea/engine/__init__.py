"""Type inference and the three evaluators."""

from .distribution import DistEvaluator, eval_dist
from .evaluate import DetEvaluator, eval_det
from .infer import check, check_program, elaborate, infer
from .randomized import RandEvaluator, eval_rand, sample
from .rng import DEFAULT_SEED, Generator

__all__ = [
    "check", "check_program", "elaborate", "infer",
    "DetEvaluator", "eval_det",
    "DistEvaluator", "eval_dist",
    "RandEvaluator", "eval_rand", "sample",
    "Generator", "DEFAULT_SEED",
]
