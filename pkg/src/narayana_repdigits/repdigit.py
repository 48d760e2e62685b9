"""Base-b repdigits: values, recognition and two-repdigit factorizations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import isqrt


class RepdigitDomainError(ValueError):
    pass


def repdigit_value(a: int, b: int, l: int) -> int:
    if b < 2 or not 1 <= a <= b - 1 or l < 1:
        raise RepdigitDomainError(f"invalid repdigit (a={a}, b={b}, l={l})")
    return a * (b**l - 1) // (b - 1)


@dataclass(frozen=True)
class Repdigit:
    a: int
    b: int
    l: int

    @property
    def value(self) -> int:
        return repdigit_value(self.a, self.b, self.l)

    def __str__(self) -> str:
        return f"[{self.a}]^{self.l}_{self.b}"


def digits_in_base(x: int, b: int) -> list[int]:
    """Base-``b`` digits of ``x``, least significant first (``[]`` for 0)."""
    if x < 0 or b < 2:
        raise ValueError("need x >= 0 and b >= 2")
    out = []
    while x:
        x, d = divmod(x, b)
        out.append(d)
    return out


def as_repdigit(x: int, b: int) -> tuple[int, int] | None:
    """``(a, l)`` with ``repdigit_value(a, b, l) == x``, or None."""
    if x < 1 or b < 2:
        raise ValueError("need x >= 1 and b >= 2")
    a = x % b
    if a == 0:
        return None
    # x = a (b^l - 1)/(b - 1)  <=>  x (b - 1)/a + 1 = b^l
    y, r = divmod(x * (b - 1), a)
    if r:
        return None
    y += 1
    if b & (b - 1) == 0:
        # power-of-two base: exact bit arithmetic
        k = b.bit_length() - 1
        if y & (y - 1) or (y.bit_length() - 1) % k:
            return None
        return a, (y.bit_length() - 1) // k
    # estimate l from bit lengths, then confirm exactly
    l = max(1, int((y.bit_length() - 1) / math.log2(b)))
    p = b**l
    while p < y:
        p *= b
        l += 1
    while p > y and l > 1:
        p //= b
        l -= 1
    return (a, l) if p == y else None


def repdigit_by_digits(x: int, b: int) -> tuple[int, int] | None:
    """Digit-expansion recognizer; independent of :func:`as_repdigit`."""
    ds = digits_in_base(x, b)
    if ds and ds[0] and all(d == ds[0] for d in ds):
        return ds[0], len(ds)
    return None


def two_repdigit_factorizations(
    x: int,
    b: int,
    l_min: int = 2,
    l1_max: int | None = None,
    l2_max: int | None = None,
) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """All ``((a1, l1), (a2, l2))`` with ``[a1]^l1_b * [a2]^l2_b == x``.

    Ordered by ``l_min <= l1 <= l2`` and ``a1 <= a2``.  Since both orders hold,
    the first factor is at most ``isqrt(x)``.  The repunit of length ``l1``
    must divide ``x`` before any digit is tried.
    """
    if x < 1 or b < 2:
        raise ValueError("need x >= 1 and b >= 2")
    out = []
    root = isqrt(x)
    l1 = l_min
    rep = (b**l1 - 1) // (b - 1)
    while rep <= root and (l1_max is None or l1 <= l1_max):
        if x % rep == 0:
            rest = x // rep
            for a1 in range(1, b):
                if a1 * rep > root:
                    break
                if rest % a1:
                    continue
                cof = as_repdigit(rest // a1, b)
                if cof is None:
                    continue
                a2, l2 = cof
                if l2 < l1 or a2 < a1 or (l2_max is not None and l2 > l2_max):
                    continue
                out.append(((a1, l1), (a2, l2)))
        l1 += 1
        rep = rep * b + 1
    return out
