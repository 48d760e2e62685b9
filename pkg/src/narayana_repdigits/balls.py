"""Thin helpers around ``flint.arb`` balls.

Every real in this package is an ``arb`` (midpoint + radius).  A comparison
is only trusted when the two balls are disjoint; anything else raises
:class:`PrecisionError` so that the caller can retry with more bits.
"""

from __future__ import annotations

import contextlib
import os
from fractions import Fraction
from typing import Callable, Iterator, TypeVar

from flint import arb, ctx

DEFAULT_PRECISION = 512
PRECISION_CAP = 16384

T = TypeVar("T")


class PrecisionError(ArithmeticError):
    """A ball was too wide to decide a comparison at the available precision."""

    def __init__(self, message: str, bits: int | None = None):
        super().__init__(message)
        self.bits = bits


def default_precision() -> int:
    env = os.environ.get("NARAYANA_PRECISION")
    return int(env) if env else DEFAULT_PRECISION


@contextlib.contextmanager
def working_precision(bits: int) -> Iterator[int]:
    old = ctx.prec
    ctx.prec = bits
    try:
        yield bits
    finally:
        ctx.prec = old


def escalate(fn: Callable[[int], T], bits: int, cap: int = PRECISION_CAP) -> T:
    """Call ``fn(bits)``, doubling ``bits`` on PrecisionError until ``cap``."""
    cap = max(cap, bits)
    while True:
        try:
            with working_precision(bits):
                return fn(bits)
        except PrecisionError as err:
            if bits >= cap:
                raise PrecisionError(f"{err} (cap {cap} bits reached)", bits) from err
            bits = min(2 * bits, cap)


def to_arb(x) -> arb:
    if isinstance(x, arb):
        return x
    if isinstance(x, Fraction):
        return arb(x.numerator) / x.denominator
    return arb(x)


def exact_fraction(x: arb) -> Fraction:
    man, exp = x.man_exp()
    man, exp = int(man), int(exp)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 1 << -exp)


def endpoints(x: arb) -> tuple[Fraction, Fraction]:
    """Exact rational lower and upper endpoints of a ball.

    Built from the exact midpoint and radius; ``arb.lower()`` would round to
    the ambient precision.
    """
    mid, rad = exact_fraction(x.mid()), exact_fraction(x.rad())
    return mid - rad, mid + rad


def certified_floor(x: arb) -> int:
    f = x.floor().unique_fmpz()
    if f is None:
        raise PrecisionError(f"floor of {x.str(10, radius=True)} is ambiguous")
    return int(f)


def certified_sign(x: arb) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    if x.is_exact() and x == 0:
        return 0
    raise PrecisionError(f"sign of {x.str(10, radius=True)} is undecided")


def nearest_int(x: arb) -> int:
    """Nearest integer to ``x``; the ball must avoid every half-integer."""
    n = certified_floor(x + arb(1) / 2)
    return n


def dist_to_nearest_int(x: arb) -> arb:
    """Ball enclosing ``||x||``, the distance from ``x`` to the nearest integer."""
    n = nearest_int(x)
    return abs(x - n)


def lt(x, y) -> bool:
    """Certified ``x < y``; raises when the balls overlap."""
    x, y = to_arb(x), to_arb(y)
    if x < y:
        return True
    if x >= y:
        return False
    raise PrecisionError(f"cannot order {x.str(10, radius=True)} and {y.str(10, radius=True)}")


def decimal(x: arb, digits: int = 30) -> str:
    """Stable decimal rendering ``[mid +/- rad]`` used on the wire."""
    return x.str(digits, radius=True)


def radius_log2(x: arb) -> float:
    r = x.rad()
    if r == 0:
        return float("-inf")
    man, exp = r.man_exp()
    return int(exp) + int(man).bit_length()
