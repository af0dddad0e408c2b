"""Text rendering of numbers, distributions and frequency tables."""

from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable

from ..dist import Dist, mean
from ..errors import EvalError
from ..values import NAN, is_num, render

APPROX_DIGITS = 15


def _terminating_digits(den: int) -> int | None:
    """Decimal places needed for ``1/den``, or None if the expansion repeats."""
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    return max(twos, fives) if den == 1 else None


def exact_decimal(q) -> str | None:
    """Exact decimal expansion of a rational, or None if it does not terminate."""
    q = Fraction(q)
    places = _terminating_digits(q.denominator)
    if places is None:
        return None
    sign = "-" if q < 0 else ""
    scaled = abs(q.numerator) * 10**places // q.denominator
    if places == 0:
        return f"{sign}{scaled}"
    digits = str(scaled).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def approx_decimal(q, digits: int = APPROX_DIGITS) -> str:
    q = Fraction(q)
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(q.numerator) / Decimal(q.denominator))


def decimal_text(q, ascii: bool = False) -> str:
    """Exact decimal when it terminates, otherwise an approximation marked as such."""
    if q is NAN:
        return "NaN"
    exact = exact_decimal(q)
    if exact is not None:
        return exact
    return ("~" if ascii else "≈") + approx_decimal(q)


def fraction_text(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def number_text(q, ascii: bool = False) -> str:
    """A number as a fraction, followed by its decimal form when that adds information."""
    if q is NAN:
        return "NaN"
    frac = fraction_text(q)
    dec = decimal_text(q, ascii)
    if dec == frac:
        return frac
    if exact_decimal(q) is None:
        return f"{frac} {dec}"
    return f"{frac} = {dec}"


def table(header: Iterable[str], rows: list[list[str]]) -> str:
    header = list(header)
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in [header] + rows]
    return "\n".join(lines)


def dist_table(d: Dist, ascii: bool = False) -> str:
    rows = [[render(v, ascii), fraction_text(p), decimal_text(p, ascii)] for v, p in d.items()]
    return table(["value", "probability", "decimal"], rows)


def numeric_mean(d: Dist):
    """Mean of ``d`` when its support is numeric, else None."""
    if not all(is_num(v) for v in d.pmf):
        return None
    try:
        return mean(d)
    except EvalError:
        return None


def analysis_report(d: Dist, type_text: str, ascii: bool = False) -> str:
    out = [f"type: {type_text}", dist_table(d, ascii)]
    m = numeric_mean(d)
    if m is not None:
        out.append(f"mean: {number_text(m, ascii)}")
    return "\n".join(out)


def frequencies(values: list) -> list[tuple[object, Fraction]]:
    """Empirical distribution of ``values`` in canonical value order."""
    counts: dict = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return [(v, Fraction(n, len(values))) for v, n in Dist._raw(counts).items()]


def frequency_table(values: list, ascii: bool = False) -> str:
    counts: dict = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    rows = []
    for v, f in frequencies(values):
        rows.append([render(v, ascii), str(counts[v]), fraction_text(f), decimal_text(f, ascii)])
    return table(["value", "count", "frequency", "decimal"], rows)
