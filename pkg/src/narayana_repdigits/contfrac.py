"""Certified continued fractions of ball reals.

A partial quotient is accepted only when every point of the ball has the
same floor at that step; the expansion is run on the exact rational
endpoints of the ball.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

from flint import arb

from .balls import PRECISION_CAP, PrecisionError, endpoints, to_arb, working_precision

Source = Union[arb, int, Fraction, Callable[[int], arb]]


def _quotients(lo: Fraction, hi: Fraction, limit: int | None = None, q_target: int | None = None):
    """Common partial quotients of every real in ``[lo, hi]``.

    Returns ``(quotients, exact)`` where ``exact`` is True when the interval
    is a single rational whose expansion terminated.
    """
    a_n, a_d = lo.numerator, lo.denominator
    b_n, b_d = hi.numerator, hi.denominator
    out: list[int] = []
    q1, q0 = 1, 0
    while limit is None or len(out) < limit:
        ga, ra = divmod(a_n, a_d)
        gb, rb = divmod(b_n, b_d)
        if ga != gb:
            return out, False
        if ra == 0 and rb == 0:
            out.append(ga)
            return out, True
        if ra == 0 or rb == 0:
            # one endpoint terminates here; the next complete quotient is unbounded
            return out, False
        out.append(ga)
        q1, q0 = ga * q1 + q0, q1
        # complete quotients 1/(x - g) reverse the orientation
        a_n, a_d, b_n, b_d = b_d, rb, a_d, ra
    return out, False


def _convergents(quotients: list[int]) -> list[tuple[int, int]]:
    out = []
    p1, p0 = 1, 0
    q1, q0 = 0, 1
    for g in quotients:
        p1, p0 = g * p1 + p0, p1
        q1, q0 = g * q1 + q0, q1
        out.append((p1, q1))
    return out


@dataclass
class CFExpansion:
    x: arb
    partial_quotients: list[int]
    convergents: list[tuple[int, int]]
    bits: int | None = None
    exact: bool = False
    source: Callable[[int], arb] | None = field(default=None, repr=False)
    cap: int = PRECISION_CAP

    def __len__(self) -> int:
        return len(self.partial_quotients)

    def index_exceeding(self, bound: int) -> int | None:
        for i, (_, q) in enumerate(self.convergents):
            if q > bound:
                return i
        return None

    def extended(self, q_target: int, extra: int = 0) -> "CFExpansion":
        """A longer expansion (same source, more bits) reaching ``q_target`` plus ``extra`` terms."""
        i = self.index_exceeding(q_target)
        if i is not None and (self.exact or i + extra < len(self)):
            return self
        if self.source is None:
            raise PrecisionError("ball too wide to certify more partial quotients", self.bits)
        return cf_expand(self.source, q_target, extra=extra, bits=2 * (self.bits or 64), cap=self.cap)


def _ball(x: Source, bits: int) -> arb:
    if callable(x):
        with working_precision(bits):
            return x(bits)
    return to_arb(x)


def cf_expand(x: Source, q_target: int, extra: int = 0, bits: int = 512, cap: int = PRECISION_CAP) -> CFExpansion:
    """Expand until some convergent has ``q > q_target``, then ``extra`` more terms.

    ``x`` may be a fixed ball (zero radius for exact rationals) or a callable
    ``bits -> arb``; only callables can be refined by doubling precision.
    """
    source = x if callable(x) else None
    while True:
        ball = _ball(x, bits)
        if isinstance(x, Fraction):
            lo = hi = x
        elif isinstance(x, int):
            lo = hi = Fraction(x)
        else:
            lo, hi = endpoints(ball)
        qs, exact = _quotients(lo, hi)
        convs = _convergents(qs)
        exp = CFExpansion(ball, qs, convs, bits if source else None, exact, source, cap)
        i = exp.index_exceeding(q_target)
        if exact or (i is not None and i + extra < len(qs)):
            return exp
        if source is None or bits >= cap:
            raise PrecisionError(
                f"only {len(qs)} certified partial quotients at {bits} bits (need q > {q_target} plus {extra})",
                bits,
            )
        bits = min(2 * bits, cap)


def convergent_exceeding(exp: CFExpansion, bound: int) -> tuple[int, int]:
    """First convergent ``(p, q)`` with ``q > bound``."""
    i = exp.index_exceeding(bound)
    if i is None:
        exp = exp.extended(bound)
        i = exp.index_exceeding(bound)
        if i is None:
            raise PrecisionError(f"expansion terminates before q > {bound}")
    return exp.convergents[i]


def max_partial_quotient(exp: CFExpansion, K: int) -> int:
    """``max(g_0, ..., g_{K+1})``."""
    if K + 1 >= len(exp.partial_quotients):
        raise IndexError(f"need {K + 2} certified quotients, have {len(exp)}")
    return max(exp.partial_quotients[: K + 2])


def determinant_ok(exp: CFExpansion) -> bool:
    c = exp.convergents
    if c and c[0][1] != 1:
        return False
    prev = (1, 0)
    for k, (p, q) in enumerate(c):
        if p * prev[1] - prev[0] * q != (-1) ** (k - 1 if k >= 1 else 1):
            return False
        prev = (p, q)
    return all(c[k][1] < c[k + 1][1] for k in range(1, len(c) - 1))


@dataclass
class LegendreVerdict:
    distance: arb
    lower_bound_holds: bool
    within_half: bool
    is_convergent: bool | None


def legendre_quality(
    x: arb, p: int, q: int, g: int, exp: CFExpansion | None = None, bits: int = 512
) -> LegendreVerdict:
    """Compare ``|x - p/q|`` with ``1/((g+2) q^2)`` and ``1/(2 q^2)``.

    Any rational with denominator below ``q_{K+1}`` stays farther than
    ``1/((g+2) q^2)`` from ``x`` when ``g`` bounds the quotients up to
    ``K+1``; anything within ``1/(2 q^2)`` is a convergent.
    """
    if q < 1:
        raise ValueError("q must be positive")
    with working_precision(bits):
        x = to_arb(x)
        d = abs(x - arb(p) / q)
        lower = arb(1) / ((g + 2) * q * q)
        half = arb(1) / (2 * q * q)
    if not (d > lower or d < lower):
        raise PrecisionError("distance versus 1/((g+2)q^2) undecided")
    if not (d > half or d < half):
        raise PrecisionError("distance versus 1/(2q^2) undecided")
    member = None
    if exp is not None:
        from math import gcd

        h = gcd(p, q)
        member = (p // h, q // h) in set(exp.convergents)
    return LegendreVerdict(d, bool(d > lower), bool(d < half), member)
