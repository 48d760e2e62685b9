"""Absolute bounds from Matveev's theorem, recomputed from the inequality chains.

Published constants are used only as ceilings to compare against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from flint import arb

from .balls import decimal, working_precision
from .heights import lambda_instance, matveev_constant, matveev_log_lower_bound
from .narayana import compute_constants

BITS = 256
B_RANGE = range(2, 51)

# published ceilings (multiplied by the indicated power of log b where relevant)
PUBLISHED = {
    "c3": "3e14",  # l1 < c3 log l2 log b
    "l2": "1e33",  # l2 < . log^3 b
    "k": "2.3e34",  # k < . log^3 b
    "c1": "1.7e15",  # m < c1 log n log^2 b
    "n": "2.99e33",  # n < . log^5 b
}


def floor_upper(x: arb) -> int:
    """Largest integer that can satisfy ``v < x`` for the true x in the ball."""
    return int(x.upper().floor().unique_fmpz())


def relative_bounds_eq2(n: int) -> int:
    """Largest admissible repdigit length ``l`` given ``n``: ``l < 2n - 1``.

    From ``2^(l-1) <= N_n N_m <= alpha^(2n-2)``.
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    with working_precision(BITS):
        la = compute_constants(BITS).log_alpha
        l_real = (2 * n - 2) * la / arb(2).log() + 1
    l = floor_upper(l_real)
    if not l < 2 * n - 1:
        raise AssertionError("l < 2n - 1 violated")
    return 2 * n - 2


def n_upper_from_l(l: int) -> int:
    """Largest admissible ``n`` given ``l >= 2``: ``n < 11 l + 2``.

    Uses ``alpha^(n-3) <= N_n < 50^l``, so ``n < l log 50 / log alpha + 3``.
    """
    if l < 2:
        raise ValueError("l must be >= 2")
    with working_precision(BITS):
        n_real = l * arb(50).log() / compute_constants(BITS).log_alpha + 3
    if not n_real <= 11 * l + 2:
        raise AssertionError("n < 11 l + 2 violated")
    return 11 * l + 1


def relative_bounds_eq3(k: int, l2: int) -> tuple[int, int]:
    """``(l1_upper, k_upper)`` from ``l1 < k`` and ``k < 22 l2 + 2``.

    ``l1 < (k-1) log alpha / log 2 + 1`` and ``alpha^(k-3) <= N_k < 50^(2 l2)``.
    """
    if k < 3 or l2 < 2:
        raise ValueError("need k >= 3 and l2 >= 2")
    with working_precision(BITS):
        la = compute_constants(BITS).log_alpha
        l1_real = (k - 1) * la / arb(2).log() + 1
        k_real = 2 * l2 * arb(50).log() / la + 3
    if not (l1_real <= k and k_real <= 22 * l2 + 2):
        raise AssertionError("relative bounds violated")
    return k - 1, 22 * l2 + 1


def sanchez_reduce(m: int, T) -> arb:
    """``2^m T log^m T``: if ``x / log^m x < T`` then x is below this."""
    T = arb(T)
    if m < 1 or not T > (4 * m * m) ** m:
        raise ValueError(f"need m >= 1 and T > (4m^2)^m, got m={m}")
    return 2**m * T * T.log() ** m


def verify_log_factor_replacements(x_max: int = 10**40) -> dict[str, bool]:
    """``1 + log(22x+4) < 8 log x`` (x >= 2) and ``1 + log(2x+4) < 5 log x`` (x >= 3).

    Both gaps ``c log x - 1 - log(px+q)`` have derivative ``c/x - p/(px+q) > 0``,
    so the left endpoint decides; a geometric grid up to ``x_max`` is checked too.
    """
    out = {}
    with working_precision(BITS):
        for name, c, p, q, x0 in (("l2", 8, 22, 4, 2), ("n", 5, 2, 4, 3)):
            x = arb(x0)
            ok = True
            while x <= x_max:
                if not 1 + (p * x + q).log() < c * x.log():
                    ok = False
                    break
                if not c * (p * x + q) > p * x:  # derivative sign
                    ok = False
                    break
                x = x * 2 if x > 4 else x + 1
            out[name] = ok
    return out


def verify_lambda_constants() -> dict[str, dict]:
    """Sup over admissible parameters of ``|Lambda| * base^w`` against 5, 2, 39, 11.

    Majorants (n >= m >= 3, l2 >= l1 >= 2, c = c_alpha):
      Lambda3: (b-1)^2 / (2 b^(l2+2)) + 2/b^2           (w = l1 - 2)
      Lambda4: (b-1)^2 / (2 b^2 (b^l1 - 1)) + 1/b^2      (w = l2 - 2)
      Lambda1: 1/(c alpha^2) + 5/(4 c^2 alpha^7)          (w = m)
      Lambda2: (3/2) / (c alpha^2)                        (w = n)
    each decreasing in b, l1, l2, so b = 2, l1 = l2 = 2 is the worst case.
    """
    with working_precision(BITS):
        k = compute_constants(BITS)
        a, c = k.alpha, k.c_alpha
        b = arb(2)
        sups = {
            "lambda3": ((b - 1) ** 2 / (2 * b**4) + 2 / b**2, 5),
            "lambda4": ((b - 1) ** 2 / (2 * b**2 * (b**2 - 1)) + 1 / b**2, 2),
            "lambda1": (1 / (c * a**2) + 5 / (4 * c**2 * a**7), 39),
            "lambda2": (arb(3) / 2 / (c * a**2), 11),
        }
        return {
            name: {"sup": decimal(s, 12), "published": str(p), "ok": bool(s < p), "margin": decimal(p - s, 12)}
            for name, (s, p) in sups.items()
        }


@dataclass
class BoundsEntry:
    equation: str
    b: int
    constants: dict = field(default_factory=dict)
    l1_max: int | None = None
    l2_max: int | None = None
    k_max: int | None = None
    m_max: int | None = None
    n_max: int | None = None
    published_ceiling_ok: bool = False
    published_floor_ok: bool = False

    def as_dict(self) -> dict:
        d = {
            "equation": self.equation,
            "b": str(self.b),
            "constants": {k: decimal(v, 15) for k, v in sorted(self.constants.items())},
            "published_ceiling_ok": self.published_ceiling_ok,
        }
        for key in ("l1_max", "l2_max", "k_max", "m_max", "n_max"):
            v = getattr(self, key)
            if v is not None:
                d[key] = str(v)
        return d


def derive_eq3_bounds(b: int) -> BoundsEntry:
    """Bounds on l1, l2, k for ``N_k = [a1]^l1 [a2]^l2`` in base ``b``.

    Lambda3 gives ``(l1 - 2) log b < log 5 + 8 C log alpha (3 log b)(9 log b) log l2``
    (``1 + log B < 8 log l2`` with ``B = 22 l2 + 4``), so
    ``l1 < c3 log l2 log b``.  Lambda4, with ``A3 = 3 (4 + l1) log b`` and the
    l1 bound substituted, gives ``l2 / log^2 l2 < T``; the x / log^m x lemma (m = 2) closes it.
    """
    if b not in B_RANGE:
        raise ValueError("b must be in 2..50")
    with working_precision(BITS):
        C = matveev_constant(3, 3)
        la = compute_constants(BITS).log_alpha
        lb = arb(b).log()
        l2log = arb(2).log()
        # a representative instance reproduces the A_j choices
        lam3 = lambda_instance("lambda3", b, 100)
        A1, A2, A3 = lam3.A
        main3 = 8 * C * A1 * A2 * A3 / lb  # coefficient of log l2
        # l1 < 2 + log 5 / log b + main3 log l2; absorb the constant using log l2 >= log 2
        c3 = main3 / lb + (2 + arb(5).log() / lb) / (l2log * lb)
        # Lambda4 with A3 = 3 (4 + l1) log b and l1 < c3 log l2 log b
        # (l2 - 2) log b < log 2 + 8 C la (3 lb) (3 (4 + l1) lb) log l2
        coef4 = 72 * C * la * lb
        T = coef4 * (c3 + 4 / (l2log * lb)) * lb + (2 + l2log / lb) / l2log**2
        l2_real = sanchez_reduce(2, T)
        l2_max = floor_upper(l2_real)
        k_max = 22 * l2_max + 1
        l1_max = floor_upper(c3 * arb(l2_max).log() * lb)
        lb3 = lb**3
        consts = {
            "matveev_C": C,
            "c3": c3,
            "T_l2": T,
            "l2_over_log3b": arb(l2_max) / lb3,
            "k_over_log3b": arb(k_max) / lb3,
        }
        ceiling = bool(
            c3 <= arb(PUBLISHED["c3"])
            and arb(l2_max) <= arb(PUBLISHED["l2"]) * lb3
            and arb(k_max) <= arb(PUBLISHED["k"]) * lb3
        )
        floor_ok = bool(c3 >= arb(PUBLISHED["c3"]) / 10)
    return BoundsEntry("eq3", b, consts, l1_max, l2_max, k_max, published_ceiling_ok=ceiling, published_floor_ok=floor_ok)


def derive_eq2_bounds(b: int) -> BoundsEntry:
    """Bounds on m and n for ``N_n N_m = [a]^l`` in base ``b``.

    Lambda1 (A3 = 13.5 log b, ``1 + log(2n+4) < 5 log n``) gives
    ``m < c1 log n log^2 b``; Lambda2 (A3 = 3 (2.3 log b + m log alpha),
    B = 2n + 2) then gives ``n / log^2 n < T``; the x / log^m x lemma (m = 2) closes it.
    """
    if b not in B_RANGE:
        raise ValueError("b must be in 2..50")
    with working_precision(BITS):
        C = matveev_constant(3, 3)
        la = compute_constants(BITS).log_alpha
        lb = arb(b).log()
        l3 = arb(3).log()
        A1, A2, A3 = lambda_instance("lambda1", b, 100).A
        # m log alpha < log 39 + 5 C A1 A2 A3 log n
        c1 = 5 * C * A1 * A2 * A3 / la / lb**2 + arb(39).log() / la / (l3 * lb**2)
        # n log alpha < log 11 + 5 C log alpha (3 log b) 3 (2.3 log b + m log alpha) log n
        # with m < c1 log n log^2 b and log n >= log 3
        inner = la * c1 + arb("2.3") / (l3 * lb)  # (2.3 lb + m la) < inner log n lb^2
        T = 45 * C * inner * lb**3 + arb(11).log() / la / l3**2
        n_real = sanchez_reduce(2, T)
        n_max = floor_upper(n_real)
        m_max = floor_upper(c1 * arb(n_max).log() * lb**2)
        lb5 = lb**5
        consts = {"matveev_C": C, "c1": c1, "T_n": T, "n_over_log5b": arb(n_max) / lb5}
        ceiling = bool(c1 <= arb(PUBLISHED["c1"]) and arb(n_max) <= arb(PUBLISHED["n"]) * lb5)
        floor_ok = bool(c1 >= arb(PUBLISHED["c1"]) / 10)
    return BoundsEntry("eq2", b, consts, m_max=m_max, n_max=n_max, published_ceiling_ok=ceiling, published_floor_ok=floor_ok)


@dataclass
class AbsoluteBounds:
    equation: str
    entries: dict[int, BoundsEntry]
    constants: dict

    def as_dict(self) -> dict:
        return {
            "equation": self.equation,
            "constants": {k: decimal(v, 15) for k, v in sorted(self.constants.items())},
            "per_base": [self.entries[b].as_dict() for b in sorted(self.entries)],
            "published_ceiling_ok": all(e.published_ceiling_ok for e in self.entries.values()),
        }


def absolute_bounds(equation: str, bases=B_RANGE) -> AbsoluteBounds:
    """Per-base bounds plus the global constants in the published shape.

    The global l2 / k / n constants are the smallest ``c`` with
    ``bound(b) <= c log^e b`` for every base considered.
    """
    derive = derive_eq3_bounds if equation == "eq3" else derive_eq2_bounds
    entries = {b: derive(b) for b in bases}
    with working_precision(BITS):
        if equation == "eq3":
            keys = {"c3": "c3", "l2_constant": "l2_over_log3b", "k_constant": "k_over_log3b"}
        else:
            keys = {"c1": "c1", "n_constant": "n_over_log5b"}
        consts = {}
        for out, key in keys.items():
            vals = [e.constants[key] for e in entries.values()]
            best = vals[0]
            for v in vals[1:]:
                best = v if v > best else (best if best > v else best.union(v))
            consts[out] = best
        consts["matveev_C"] = matveev_constant(3, 3)
    return AbsoluteBounds(equation, entries, consts)


def published_comparison(bounds: AbsoluteBounds) -> dict[str, dict]:
    """Each global constant against its published value: ceiling and ceiling/10 floor."""
    names = (
        {"c3": "c3", "l2_constant": "l2", "k_constant": "k"}
        if bounds.equation == "eq3"
        else {"c1": "c1", "n_constant": "n"}
    )
    out = {}
    with working_precision(BITS):
        for ours, theirs in names.items():
            v, p = bounds.constants[ours], arb(PUBLISHED[theirs])
            out[ours] = {"derived": decimal(v, 6), "published": PUBLISHED[theirs], "le_published": bool(v <= p), "ge_published_over_10": bool(v >= p / 10)}
    return out
