"""Exact rational helpers: parsing, formatting, integer scaling."""

from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[Fraction, int, float]


def to_fraction(value) -> Fraction:
    """Convert a JSON scalar or string to an exact ``Fraction``.

    Strings may be ``"p/q"`` or decimal literals; floats and ``Decimal`` are
    converted through their decimal expansion, so ``0.1`` becomes ``1/10``
    and not the nearest binary double.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite number {value!r}")
        return Fraction(Decimal(repr(value)))
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def fmt(value: Number) -> str:
    """Render a number as ``"p/q"`` (or ``"p"``); floats use ``repr``."""
    if isinstance(value, float):
        return repr(value)
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out


def scale_to_integers(row: Sequence[Fraction]) -> list[int]:
    """Multiply a row by the lcm of its denominators and return integers."""
    k = lcm_of_denominators(row)
    return [int(Fraction(v) * k) for v in row]


def integer_root(n: int, k: int) -> int | None:
    """Exact integer ``k``-th root of ``n >= 0``, or ``None``."""
    if n < 0:
        return None
    if n in (0, 1):
        return n
    r = int(round(n ** (1.0 / k)))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    # float estimate can be far off for huge n; fall back to bisection
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == n else None


def exact_power(d: Fraction, p: Fraction) -> Fraction | None:
    """``d**p`` as a Fraction when it is rational, else ``None``."""
    if d == 0:
        return Fraction(0)
    num, den = p.numerator, p.denominator
    a = integer_root(d.numerator, den)
    b = integer_root(d.denominator, den)
    if a is None or b is None:
        return None
    return Fraction(a**num, b**num)
