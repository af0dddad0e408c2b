"""Machine-readable output: one JSON object per line.

Every record has the fields ``kind``, ``value`` (canonical text form of the
value), ``numerator`` and ``denominator``.  Kinds:

``support``
    one point of an analyzed distribution with its exact probability;
``trial``
    one sampled outcome, weighted ``1/trials`` (records also carry ``trial``,
    the 1-based trial number);
``frequency``
    one distinct sampled outcome with its exact empirical frequency.

The format is described in docs/formats.md.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Iterator

from ..dist import Dist
from ..textio import read_value
from ..values import render
from .render import frequencies


def record(kind: str, value, prob: Fraction, **extra) -> str:
    prob = Fraction(prob)
    obj = {"kind": kind, "value": render(value), "numerator": prob.numerator, "denominator": prob.denominator}
    obj.update(extra)
    return json.dumps(obj, ensure_ascii=False)


def dist_records(d: Dist) -> list[str]:
    return [record("support", v, p) for v, p in d.items()]


def trial_records(values: list) -> list[str]:
    w = Fraction(1, len(values))
    return [record("trial", v, w, trial=i) for i, v in enumerate(values, 1)]


def frequency_records(values: list) -> list[str]:
    return [record("frequency", v, f) for v, f in frequencies(values)]


def read_records(lines: Iterable[str]) -> Iterator[dict]:
    """Parse records back; ``value`` becomes a value and ``probability`` a Fraction."""
    for line in lines:
        if not line.strip():
            continue
        obj = json.loads(line)
        obj["value"] = read_value(obj["value"])
        obj["probability"] = Fraction(obj["numerator"], obj["denominator"])
        yield obj


def records_to_dist(lines: Iterable[str], kind: str = "support") -> Dist:
    return Dist({r["value"]: r["probability"] for r in read_records(lines) if r["kind"] == kind})
