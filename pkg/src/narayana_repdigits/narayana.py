"""Narayana's cow sequence and certified enclosures of its root constants."""

from __future__ import annotations

import functools
import threading
from dataclasses import dataclass

from flint import arb

from .balls import PRECISION_CAP, PrecisionError, escalate, lt, nearest_int, working_precision


class NarayanaTable:
    """Memoized exact values ``N_0 .. N_max``.

    Extension happens under a lock; readers of already-computed indices never
    block.
    """

    def __init__(self, n_max: int = 16):
        self.values: list[int] = [0, 1, 1]
        self._lock = threading.Lock()
        self.extend(n_max)

    def extend(self, n_max: int) -> None:
        if n_max < len(self.values):
            return
        with self._lock:
            v = self.values
            while len(v) <= n_max:
                v.append(v[-1] + v[-3])

    def __getitem__(self, n: int) -> int:
        if n < 0:
            raise IndexError(n)
        if n >= len(self.values):
            self.extend(max(n, 2 * len(self.values)))
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)

    def check(self) -> bool:
        v = self.values
        return v[:3] == [0, 1, 1] and all(v[i] == v[i - 1] + v[i - 3] for i in range(3, len(v)))


TABLE = NarayanaTable(300)


def narayana(n: int) -> int:
    if n < 0:
        raise ValueError("index must be non-negative")
    return TABLE[n]


@dataclass(frozen=True)
class AlgebraicConstants:
    precision_bits: int
    alpha: arb
    beta_abs: arb
    c_alpha: arb
    c_beta_abs: arb

    @property
    def log_alpha(self) -> arb:
        with working_precision(self.precision_bits):
            return self.alpha.log()


def _intersect(x: arb, y: arb) -> arb:
    lo = x.lower() if x.lower() > y.lower() else y.lower()
    hi = x.upper() if x.upper() < y.upper() else y.upper()
    if lo > hi:
        raise PrecisionError("empty intersection in interval Newton")
    return lo.union(hi)


def interval_newton(coeffs: list[int], lo: str, hi: str, bits: int) -> arb:
    """Isolate the unique root of an integer polynomial inside ``[lo, hi]``.

    ``coeffs`` are highest degree first.  The derivative must not vanish on
    the bracket; containment of the Newton image certifies the root.
    """

    def f(x):
        acc = arb(0)
        for c in coeffs:
            acc = acc * x + c
        return acc

    deg = len(coeffs) - 1
    dcoeffs = [c * (deg - i) for i, c in enumerate(coeffs[:-1])]

    def df(x):
        acc = arb(0)
        for c in dcoeffs:
            acc = acc * x + c
        return acc

    X = arb(lo).union(arb(hi))
    if df(X).contains(0):
        raise ValueError("derivative vanishes on the bracket")
    target = arb(2) ** (8 - bits)
    certified = False
    for _ in range(4 * bits):
        m = X.mid()
        N = m - f(m) / df(X)
        if not certified:
            certified = X.contains_interior(N) or (N.lower() > X.lower() and N.upper() < X.upper())
        X_new = _intersect(X, N)
        if X_new.rad() <= target and certified:
            return X_new
        if X_new.rad() >= X.rad():
            break
        X = X_new
    if certified and X.rad() <= target:
        return X
    raise PrecisionError(f"interval Newton did not reach radius 2^{-bits + 8}", bits)


def _check_constants(k: AlgebraicConstants) -> None:
    if not (lt(1.45, k.alpha.lower()) and lt(k.alpha.upper(), 1.5)):
        raise PrecisionError("alpha enclosure outside (1.45, 1.5)")
    if not (k.beta_abs > arb("0.82") and k.beta_abs < arb("0.83")):
        raise PrecisionError("|beta| enclosure outside (0.82, 0.83)")
    inv = 1 / k.c_alpha
    if not (inv > 5 and inv < arb("5.15")):
        raise PrecisionError("1/c_alpha enclosure outside (5, 5.15)")
    a, c = k.alpha, k.c_alpha
    if not (a**3 - a**2 - 1).contains(0):
        raise PrecisionError("alpha is not a root of x^3 - x^2 - 1")
    if not (31 * c**3 - 31 * c**2 + 10 * c - 1).contains(0):
        raise PrecisionError("c_alpha is not a root of 31x^3 - 31x^2 + 10x - 1")


@functools.lru_cache(maxsize=None)
def compute_constants(precision_bits: int = 512) -> AlgebraicConstants:
    if precision_bits < 64:
        raise ValueError("precision_bits must be at least 64")
    # a few guard bits so that the stored radii meet 2^(-bits+8)
    with working_precision(precision_bits + 16):
        alpha = interval_newton([1, -1, 0, -1], "1.4", "1.6", precision_bits)
        c_alpha = interval_newton([31, -31, 10, -1], "0.19", "0.2", precision_bits)
        # cross-check c_alpha = 1/(alpha^3 + 2)
        if not c_alpha.overlaps(1 / (alpha**3 + 2)):
            raise PrecisionError("c_alpha disagrees with 1/(alpha^3 + 2)")
        # product of the roots is 1 and |beta| = |gamma|, so |beta|^2 = 1/alpha;
        # likewise c_alpha |c_beta|^2 = 1/31
        beta_abs = alpha.rsqrt()
        c_beta_abs = (31 * c_alpha).rsqrt()
        k = AlgebraicConstants(precision_bits, alpha, beta_abs, c_alpha, c_beta_abs)
        _check_constants(k)
    return k


def _pow(x: arb, e: int) -> arb:
    return arb(1) if e == 0 else x**e


def binet_round(n: int, consts: AlgebraicConstants) -> int:
    """Nearest integer to ``c_alpha * alpha^(n+2)``, which equals ``N_n``."""
    if n < 0:
        raise ValueError("index must be non-negative")
    with working_precision(consts.precision_bits):
        v = consts.c_alpha * consts.alpha ** (n + 2)
        if not v.rad() < arb(1) / 4:
            raise PrecisionError(f"c_alpha*alpha^{n + 2} too wide at {consts.precision_bits} bits")
        return nearest_int(v)


def binet_bits(n: int) -> int:
    """Precision that comfortably resolves ``alpha^(n+2)`` to within 1/4."""
    need = int(0.56 * (n + 2)) + 96
    bits = 128
    while bits < need:
        bits *= 2
    return bits


def binet_round_auto(n: int, cap: int = PRECISION_CAP) -> int:
    return escalate(lambda bits: binet_round(n, compute_constants(bits)), binet_bits(n), cap)


def xi_bound(n: int, consts: AlgebraicConstants) -> arb:
    """Triangle-inequality bound ``2 |c_beta| |beta|^(n+2)`` on ``|xi(n)|``."""
    with working_precision(consts.precision_bits):
        return 2 * consts.c_beta_abs * consts.beta_abs ** (n + 2)


def xi_enclosure(n: int, consts: AlgebraicConstants) -> arb:
    """Direct enclosure of ``xi(n) = N_n - c_alpha alpha^(n+2)``."""
    with working_precision(consts.precision_bits):
        return narayana(n) - consts.c_alpha * consts.alpha ** (n + 2)


@dataclass
class GrowthReport:
    n_max: int
    lower_shift: int
    ok: bool
    first_violation: int | None = None
    side: str | None = None

    def as_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "lower_exponent": f"n-{self.lower_shift}",
            "ok": self.ok,
            "first_violation": self.first_violation,
            "side": self.side,
        }


def verify_growth_bounds(n_max: int, lower_shift: int = 2, consts: AlgebraicConstants | None = None) -> GrowthReport:
    """Check ``alpha^(n-lower_shift) <= N_n <= alpha^(n-1)`` for ``1 <= n <= n_max``.

    ``n = 0`` is skipped since ``N_0 = 0``.  Both comparisons must be decided
    by disjoint balls (or exact equality).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    TABLE.extend(n_max)
    k = consts or compute_constants(binet_bits(n_max))
    with working_precision(k.precision_bits):
        a = k.alpha
        inv = 1 / a
        for n in range(1, n_max + 1):
            N = narayana(n)
            e_lo = n - lower_shift
            lo = _pow(a, e_lo) if e_lo >= 0 else _pow(inv, -e_lo)
            hi = _pow(a, n - 1)
            if not (lo <= N):
                if lo > N:
                    return GrowthReport(n_max, lower_shift, False, n, "lower")
                raise PrecisionError(f"growth lower bound undecided at n={n}")
            if not (hi >= N):
                if hi < N:
                    return GrowthReport(n_max, lower_shift, False, n, "upper")
                raise PrecisionError(f"growth upper bound undecided at n={n}")
    return GrowthReport(n_max, lower_shift, True)
