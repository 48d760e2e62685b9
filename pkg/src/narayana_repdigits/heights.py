"""Logarithmic heights (upper bounds only) and Matveev's lower bound."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from flint import arb

from .balls import PrecisionError
from .narayana import compute_constants


@dataclass(frozen=True)
class HeightBound:
    value: arb

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("heights are non-negative")

    def __add__(self, other: "HeightBound") -> "HeightBound":
        return HeightBound(self.value + other.value)


def height_rational(p: int, q: int) -> HeightBound:
    if q == 0:
        raise ZeroDivisionError("q must be non-zero")
    if q < 0:
        p, q = -p, -q
    g = gcd(p, q) or 1
    p, q = abs(p) // g, q // g
    return HeightBound(arb(max(p, q)).log())


def combine_heights(kind: str, operands, s: int = 1) -> HeightBound:
    """``sum``: h1+h2+log 2 per addition; ``product``/``quotient``: h1+h2; ``power``: |s| h."""
    vals = [op.value if isinstance(op, HeightBound) else arb(op) for op in operands]
    if kind == "sum":
        return HeightBound(sum(vals, arb(0)) + (len(vals) - 1) * arb(2).log())
    if kind in ("product", "quotient"):
        return HeightBound(sum(vals, arb(0)))
    if kind == "power":
        (v,) = vals
        return HeightBound(abs(s) * v)
    raise ValueError(f"unknown height combination {kind!r}")


def height_c_alpha() -> HeightBound:
    """``h(c_alpha) = log(31)/3``.

    Minimal polynomial 31x^3 - 31x^2 + 10x - 1; every conjugate has modulus
    below 1 (c_alpha ~ 0.194, |c_beta| ~ 0.408), so only the leading
    coefficient contributes.
    """
    k = compute_constants(128)
    if not (k.c_alpha < 1 and k.c_beta_abs < 1):
        raise PrecisionError("conjugates of c_alpha not certified inside the unit disc")
    return HeightBound(arb(31).log() / 3)


def height_alpha() -> HeightBound:
    # x^3 - x^2 - 1 is monic and only alpha lies outside the unit disc
    return HeightBound(compute_constants(128).alpha.log() / 3)


def height_psi3_eq3_l1(b: int, a1: int, a2: int) -> HeightBound:
    """Bound on h(c_alpha (b-1)^2 / (a1 a2)), asserted below 3 log b."""
    chain = height_c_alpha() + height_rational(b - 1, a1) + height_rational(b - 1, a2)
    bound = arb(31).log() / 3 + 2 * arb(b - 1).log()
    if chain.value > bound:
        raise AssertionError("height chain exceeds its stated bound")
    if not bound < 3 * arb(b).log():
        raise AssertionError(f"h(psi_3) bound not below 3 log b for b={b}")
    return HeightBound(bound)


def height_psi3_eq3_l2(b: int, a1: int, a2: int, l1: int) -> HeightBound:
    """Bound on h(c_alpha (b-1)^2 / (a1 a2 (b^l1 - 1))) of the form (3 + l1) log b."""
    chain = height_psi3_eq3_l1(b, a1, a2) + height_rational(b**l1 - 1, 1)
    bound = (3 + l1) * arb(b).log()
    if not chain.value < bound:
        raise AssertionError("h(psi_3) bound (3 + l1) log b fails")
    return HeightBound(bound)


def height_psi3_eq2_m(b: int, a: int) -> HeightBound:
    """Bound on h(a / (c_alpha^2 (b-1))), asserted below 4.5 log b."""
    chain = height_rational(a, b - 1) + combine_heights("power", [height_c_alpha()], s=2)
    bound = 4.5 * arb(b).log()
    if not chain.value < bound:
        raise AssertionError(f"h(psi_3) not below 4.5 log b for b={b}")
    return HeightBound(bound)


def height_psi3_eq2_n(b: int, a: int, m: int) -> HeightBound:
    """Bound on h(a / (N_m c_alpha (b-1))) of the form 2.3 log b + m log alpha."""
    from .narayana import narayana

    chain = height_rational(a, b - 1) + height_c_alpha() + height_rational(narayana(m), 1)
    bound = arb("2.3") * arb(b).log() + m * compute_constants(128).log_alpha
    if not chain.value < bound:
        raise AssertionError(f"h(psi_3) bound fails for b={b}, m={m}")
    return HeightBound(bound)


@dataclass
class LinearFormInstance:
    t: int
    D: int
    A: list
    B: object
    label: str = ""
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.t < 2 or self.D < 1 or len(self.A) != self.t:
            raise ValueError("malformed linear form instance")
        if not all(arb(a) >= arb("0.16") for a in self.A):
            raise ValueError("every A_j must be at least 0.16")
        if not arb(self.B) >= 1:
            raise ValueError("B must be at least 1")


def matveev_constant(t: int, D: int) -> arb:
    """``1.4 * 30^(t+3) * t^4.5 * D^2 * (1 + log D)``."""
    return arb("1.4") * arb(30) ** (t + 3) * arb(t) ** 4 * arb(t).sqrt() * D**2 * (1 + arb(D).log())


def matveev_log_lower_bound(inst: LinearFormInstance) -> arb:
    """Lower bound for ``log |Lambda|`` (valid when Lambda != 0)."""
    prod = arb(1)
    for a in inst.A:
        prod *= arb(a)
    return -matveev_constant(inst.t, inst.D) * (1 + arb(inst.B).log()) * prod



def lambda_instance(label: str, b: int, B, *, l1: int = 0, m: int = 0) -> LinearFormInstance:
    """The t = 3, D = 3 instance for one of the four linear forms.

    ``A1 = log alpha`` and ``A2 = 3 log b`` throughout; ``A3`` is 9 log b,
    3 (4 + l1) log b, 13.5 log b or 3 (2.3 log b + m log alpha).
    """
    k = compute_constants(128)
    la, lb = k.log_alpha, arb(b).log()
    lc = -k.c_alpha.log()  # |log c_alpha|
    if label == "lambda3":
        A3 = 9 * lb
        h = height_psi3_eq3_l1(b, 1, 1).value
        logpsi = max_abs(-lc, -lc + 2 * arb(b - 1).log())
    elif label == "lambda4":
        A3 = 3 * (4 + l1) * lb
        h = height_psi3_eq3_l2(b, 1, 1, l1).value
        logpsi = max_abs(-lc - l1 * lb, -lc + 2 * arb(b - 1).log())
    elif label == "lambda1":
        A3 = arb("13.5") * lb
        h = height_psi3_eq2_m(b, 1).value
        logpsi = max_abs(2 * lc - arb(b - 1).log(), 2 * lc)
    elif label == "lambda2":
        A3 = 3 * (arb("2.3") * lb + m * la)
        h = height_psi3_eq2_n(b, 1, m).value
        logpsi = max_abs(lc - (m - 1) * la - arb(b - 1).log(), lc)
    else:
        raise ValueError(label)
    A = [la, 3 * lb, A3]
    # Matveev's admissibility: A_j >= max(D h(psi_j), |log psi_j|, 0.16).
    # A_1 = 3 h(alpha) and A_2 = 3 h(b) hold with equality, and A_3 is
    # 3 * (height bound) by construction except for lambda4 (3 (4 + l1) log b).
    if A3 < 3 * h or not A3 >= logpsi:
        raise AssertionError(f"A_3 not admissible for {label}, b={b}")
    return LinearFormInstance(3, 3, A, B, label, {"b": b, "l1": l1, "m": m})


def max_abs(*xs: arb) -> arb:
    out = abs(xs[0])
    for x in xs[1:]:
        x = abs(x)
        out = x if x > out else (out if out > x else out.union(x))
    return out.upper()
