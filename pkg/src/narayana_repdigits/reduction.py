"""Dujella-Petho reduction for the four linear forms and the Legendre fallback."""

from __future__ import annotations

import functools
import logging
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from flint import arb

from .balls import (
    DEFAULT_PRECISION,
    PRECISION_CAP,
    PrecisionError,
    certified_floor,
    decimal,
    dist_to_nearest_int,
    escalate,
    working_precision,
)
from .bounds import derive_eq2_bounds, derive_eq3_bounds, relative_bounds_eq3
from .contfrac import CFExpansion, cf_expand, max_partial_quotient
from .narayana import compute_constants, narayana

log = logging.getLogger(__name__)

RETRIES = 10
LEGENDRE_A = 32

# label -> (constant c in |Lambda| < c / B^w, base of B, A after dividing by log B)
LINEAR_FORMS = {
    "eq3-l1": (5, "b", 15),
    "eq3-l2": (2, "b", 6),
    "eq2-m": (39, "alpha", 210),
    "eq2-n": (11, "alpha", 32),
}


@functools.lru_cache(maxsize=None)
def log_int(n: int, bits: int) -> arb:
    with working_precision(bits):
        return arb(n).log()


@functools.lru_cache(maxsize=None)
def log_alpha(bits: int) -> arb:
    return compute_constants(bits).log_alpha


@functools.lru_cache(maxsize=None)
def log_c_alpha(bits: int) -> arb:
    k = compute_constants(bits)
    with working_precision(bits):
        return k.c_alpha.log()


def log_base(base: str, b: int, bits: int) -> arb:
    return log_alpha(bits) if base == "alpha" else log_int(b, bits)


@dataclass
class DPInstance:
    """``0 < |u tau - v + mu| < A B^-w`` with ``u <= M``.

    ``tau``, ``mu`` and ``log_B`` map a precision in bits to a ball; ``key``
    identifies tau so that its continued fraction can be shared.
    """

    label: str
    params: dict
    M: int
    A: int
    tau: Callable[[int], arb]
    mu: Callable[[int], arb]
    log_B: Callable[[int], arb]
    key: tuple = ()

    def __post_init__(self):
        if self.M < 1 or self.A <= 0:
            raise ValueError("need M >= 1 and A > 0")


@dataclass
class DPOutcome:
    status: str  # "reduced" | "fallback_needed"
    epsilon: arb
    q_used: int
    p_used: int
    reduced_w: int | None
    attempts: int
    bits: int
    retries: list = field(default_factory=list)


@dataclass
class LegendreOutcome:
    g: int
    n_bound: int
    K: int
    q_K: int


_CF_CACHE: dict[tuple, CFExpansion] = {}
_CF_LOCK = threading.Lock()


def tau_expansion(inst: DPInstance, bits: int, q_target: int, extra: int) -> CFExpansion:
    """Certified expansion of tau at exactly ``bits`` (no internal escalation)."""
    ck = (inst.key, bits)
    exp = _CF_CACHE.get(ck) if inst.key else None
    if exp is not None:
        i = exp.index_exceeding(q_target)
        if i is not None and i + extra < len(exp):
            return exp
    exp = cf_expand(inst.tau, q_target, extra=extra, bits=bits, cap=bits)
    if inst.key:
        with _CF_LOCK:
            _CF_CACHE[ck] = exp
    return exp


_TAU_DIST: dict[tuple, arb] = {}


def epsilon_at(inst: DPInstance, q: int, bits: int) -> arb:
    """``||mu q|| - M ||tau q||`` as a ball."""
    with working_precision(bits):
        ck = (inst.key, bits, q)
        td = _TAU_DIST.get(ck) if inst.key else None
        if td is None:
            td = dist_to_nearest_int(inst.tau(bits) * q)
            if inst.key:
                _TAU_DIST[ck] = td
        return dist_to_nearest_int(inst.mu(bits) * q) - inst.M * td


def _reduced_w(inst: DPInstance, q: int, eps: arb, bits: int) -> int:
    with working_precision(bits):
        return certified_floor((inst.A * q / eps).log() / inst.log_B(bits))


def dp_reduce(
    inst: DPInstance,
    bits: int = DEFAULT_PRECISION,
    cap: int = PRECISION_CAP,
    retries: int = RETRIES,
    refine: bool = False,
) -> DPOutcome:
    """Dujella-Petho: first convergent with ``q > 6M``, then up to ``retries`` more.

    On ``eps > 0`` no solution has ``w >= log(A q / eps) / log B``; the
    returned ``reduced_w`` is the certified floor of that quantity.  Every
    convergent with ``q > 6M`` and ``eps > 0`` gives a valid bound, so with
    ``refine`` the whole window of ``retries + 1`` convergents is scanned and
    the smallest bound kept.
    """

    def attempt(b: int) -> DPOutcome:
        exp = tau_expansion(inst, b, 6 * inst.M, retries)
        k0 = exp.index_exceeding(6 * inst.M)
        tried = []
        first = best = None
        for j in range(retries + 1):
            p, q = exp.convergents[k0 + j]
            eps = epsilon_at(inst, q, b)
            if eps > 0:
                w = _reduced_w(inst, q, eps, b)
                if best is None or w < best.reduced_w:
                    best = DPOutcome("reduced", eps, q, p, w, j + 1, b, list(tried))
                if not refine:
                    return best
                continue
            if not eps <= 0:
                raise PrecisionError(f"sign of epsilon undecided for {inst.label} {inst.params}")
            tried.append({"q": str(q), "epsilon": decimal(eps, 20)})
            if first is None:
                first = (p, q, eps)
        if best is not None:
            return best
        p, q, eps = first
        return DPOutcome("fallback_needed", eps, q, p, None, retries + 1, b, tried)

    try:
        out = escalate(attempt, bits, cap)
    except PrecisionError as err:
        raise PrecisionError(f"{inst.label} {inst.params}: {err}", err.bits) from err
    if out.retries and out.status == "reduced":
        log.info("%s %s: epsilon > 0 after %d retries", inst.label, inst.params, len(out.retries))
    return out


def w_floor(label: str, b: int, bits: int = 256) -> int:
    """Smallest w from which the reduction's A is valid.

    Needs ``|Lambda| <= 1/2`` and ``|z| <= |Lambda| / (1 - |Lambda|)`` to stay
    below ``A B^-w log B`` when ``|Lambda| < c B^-w``.
    """
    c, base, A = LINEAR_FORMS[label]
    with working_precision(bits):
        lB = log_base(base, b, bits)
        Bv = lB.exp()
        w = 0
        while True:
            lam = c / Bv**w
            if lam <= arb(1) / 2 and lam / (1 - lam) <= A * lB:
                return w
            w += 1


# -- instance builders ---------------------------------------------------------


def _tau_alpha_over_b(b: int):
    return lambda bits: log_alpha(bits) / log_int(b, bits)


def _tau_b_over_alpha(b: int):
    return lambda bits: log_int(b, bits) / log_alpha(bits)


@functools.lru_cache(maxsize=None)
def eq3_M(b: int) -> int:
    """Bound on ``u = k + 2`` from the absolute bounds."""
    return derive_eq3_bounds(b).k_max + 2


@functools.lru_cache(maxsize=None)
def eq2_M(b: int) -> int:
    """``5.98e33 log^5 b`` rounded up; must dominate ``l <= 2 n_max - 2``."""
    with working_precision(256):
        M = int((arb("5.98e33") * arb(b).log() ** 5).upper().ceil().unique_fmpz())
    n_max = derive_eq2_bounds(b).n_max
    if M < 2 * n_max - 2:
        raise AssertionError(f"M={M} does not bound l for b={b}")
    return M


def eq3_l1_instance(b: int, a1: int, a2: int, M: int | None = None) -> DPInstance:
    """``|(k+2) tau - (l1+l2) + mu| < 15 b^-(l1-2)`` with ``tau = log alpha / log b``."""
    P = a1 * a2

    def mu(bits):
        return (2 * log_int(b - 1, bits) + log_c_alpha(bits) - log_int(P, bits)) / log_int(b, bits)

    return DPInstance(
        "eq3-l1", {"b": b, "a1": a1, "a2": a2}, M or eq3_M(b), 15,
        _tau_alpha_over_b(b), mu, lambda bits: log_int(b, bits), ("alpha/b", b),
    )


def eq3_l2_instance(b: int, a1: int, a2: int, l1: int, M: int | None = None) -> DPInstance:
    """``|(k+2) tau - l2 + mu| < 6 b^-(l2-2)``."""
    P = a1 * a2

    def mu(bits):
        return (
            log_c_alpha(bits) + 2 * log_int(b - 1, bits) - log_int(P, bits) - log_int(b**l1 - 1, bits)
        ) / log_int(b, bits)

    return DPInstance(
        "eq3-l2", {"b": b, "a1": a1, "a2": a2, "l1": l1}, M or eq3_M(b), 6,
        _tau_alpha_over_b(b), mu, lambda bits: log_int(b, bits), ("alpha/b", b),
    )


def eq2_m_instance(b: int, a: int, M: int | None = None) -> DPInstance:
    """``|l tau - (n+m+4) + mu| < 210 alpha^-m`` with ``tau = log b / log alpha``."""

    def mu(bits):
        return (log_int(a, bits) - 2 * log_c_alpha(bits) - log_int(b - 1, bits)) / log_alpha(bits)

    return DPInstance(
        "eq2-m", {"b": b, "a": a}, M or eq2_M(b), 210, _tau_b_over_alpha(b), mu, log_alpha, ("b/alpha", b)
    )


def eq2_n_instance(b: int, a: int, m: int, M: int | None = None) -> DPInstance:
    """``|l tau - (n+2) + mu| < 32 alpha^-n``."""
    Nm = narayana(m)

    def mu(bits):
        return (log_int(a, bits) - log_int(Nm, bits) - log_c_alpha(bits) - log_int(b - 1, bits)) / log_alpha(bits)

    return DPInstance(
        "eq2-n", {"b": b, "a": a, "m": m}, M or eq2_M(b), 32, _tau_b_over_alpha(b), mu, log_alpha, ("b/alpha", b)
    )


def reduce_eq3_l1(b, a1, a2, **kw) -> DPOutcome:
    return dp_reduce(eq3_l1_instance(b, a1, a2), **kw)


def reduce_eq3_l2(b, a1, a2, l1, **kw) -> DPOutcome:
    return dp_reduce(eq3_l2_instance(b, a1, a2, l1), **kw)


def reduce_eq2_m(b, a, **kw) -> DPOutcome:
    return dp_reduce(eq2_m_instance(b, a), **kw)


def reduce_eq2_n(b, a, m, **kw) -> DPOutcome:
    return dp_reduce(eq2_n_instance(b, a, m), **kw)


def legendre_n_bound(g: int, l_max: int, A: int = LEGENDRE_A, bits: int = 256) -> int:
    """Certified floor of ``log(A (g+2) l_max) / log alpha``."""

    def go(bt):
        with working_precision(bt):
            return certified_floor((arb(A) * (g + 2) * l_max).log() / log_alpha(bt))

    return escalate(go, bits)


def legendre_fallback(
    b: int, a: int, m: int, l_max: int | None = None, bits: int = DEFAULT_PRECISION, cap: int = PRECISION_CAP
) -> LegendreOutcome:
    """``alpha^n < 32 (g+2) l`` with g the largest quotient of ``log b / log alpha``
    up to index K+1, where ``q_K`` is the first denominator above ``l_max``.
    """
    l_max = l_max or eq2_M(b)
    inst = eq2_n_instance(b, a, m, M=l_max)

    def go(bt):
        exp = tau_expansion(inst, bt, l_max, 1)
        K = exp.index_exceeding(l_max)
        g = max_partial_quotient(exp, K)
        return LegendreOutcome(g, legendre_n_bound(g, l_max, bits=bt), K, exp.convergents[K][1])

    return escalate(go, bits, cap)


# -- certificates ----------------------------------------------------------------


def certificate(inst: DPInstance, out: DPOutcome, fallback: LegendreOutcome | None = None) -> dict:
    c, base, A = LINEAR_FORMS[inst.label]
    cert = {
        "label": inst.label,
        "b": str(inst.params["b"]),
        "tau_precision_bits": str(out.bits),
        "q": str(out.q_used),
        "p": str(out.p_used),
        "epsilon": decimal(out.epsilon, 25),
        "M": str(inst.M),
        "A": str(inst.A),
        "B": "alpha" if base == "alpha" else str(inst.params["b"]),
        "status": out.status,
        "attempts": str(out.attempts),
        "w_floor": str(w_floor(inst.label, inst.params["b"])),
    }
    if "a" in inst.params:
        cert["a"] = str(inst.params["a"])
    else:
        cert["a"] = [str(inst.params["a1"]), str(inst.params["a2"])]
    for key in ("m", "l1"):
        if key in inst.params:
            cert[key] = str(inst.params[key])
    if out.retries:
        cert["retries"] = out.retries
    if out.status == "reduced":
        cert["reduced_w"] = str(out.reduced_w)
    if fallback is not None:
        cert["fallback"] = {"g": str(fallback.g), "n_bound": str(fallback.n_bound), "K": str(fallback.K)}
    return cert


def instance_from_certificate(cert: dict) -> DPInstance:
    b = int(cert["b"])
    M = int(cert["M"])
    if cert["label"] in ("eq3-l1", "eq3-l2"):
        a1, a2 = (int(x) for x in cert["a"])
        if cert["label"] == "eq3-l1":
            return eq3_l1_instance(b, a1, a2, M)
        return eq3_l2_instance(b, a1, a2, int(cert["l1"]), M)
    a = int(cert["a"])
    if cert["label"] == "eq2-m":
        return eq2_m_instance(b, a, M)
    return eq2_n_instance(b, a, int(cert["m"]), M)


def replay_certificate(cert: dict, factor: int = 2) -> bool:
    """Recompute epsilon at ``factor`` times the recorded precision.

    Checks the sign of epsilon and, for reduced instances, the value of
    ``reduced_w``; also that ``q > 6M`` is a convergent denominator of tau.
    """
    inst = instance_from_certificate(cert)
    bits = int(cert["tau_precision_bits"]) * factor
    q = int(cert["q"])
    if q <= 6 * inst.M:
        return False
    exp = tau_expansion(inst, bits, q - 1, 0)
    if (int(cert["p"]), q) not in exp.convergents:
        return False
    eps = epsilon_at(inst, q, bits)
    if cert["status"] == "reduced":
        return bool(eps > 0) and _reduced_w(inst, q, eps, bits) == int(cert["reduced_w"])
    return bool(eps <= 0)


# -- sweeps ------------------------------------------------------------------------


def digit_products(b: int) -> dict[int, tuple[int, int]]:
    """Distinct ``a1 * a2`` (``a1 <= a2 < b``) mapped to the lexicographically first pair."""
    out: dict[int, tuple[int, int]] = {}
    for a1 in range(1, b):
        for a2 in range(a1, b):
            out.setdefault(a1 * a2, (a1, a2))
    return out


def _bound_from(label: str, b: int, out: DPOutcome) -> int:
    """Largest w not excluded: below the reduced bound or below the validity floor."""
    return max(out.reduced_w, w_floor(label, b) - 1)


@dataclass
class SweepResult:
    equation: str
    bases: list
    per_base: dict
    maxima: dict
    fallbacks: list
    certificates: list
    retried: list

    def as_dict(self, with_certificates: bool = True) -> dict:
        d = {
            "equation": self.equation,
            "bases": [str(b) for b in self.bases],
            "maxima": {k: str(v) for k, v in sorted(self.maxima.items())},
            "per_base": {str(b): {k: str(v) for k, v in sorted(pb.items())} for b, pb in sorted(self.per_base.items())},
            "fallbacks": self.fallbacks,
            "retried": [
                {k: c[k] for k in ("label", "b", "a", "l1", "m", "attempts") if k in c} for c in self.retried
            ],
        }
        if with_certificates:
            d["certificates"] = self.certificates
        return d


def sweep_eq3_base(b: int, bits: int = DEFAULT_PRECISION, cap: int = PRECISION_CAP, retries: int = RETRIES, refine: bool = False) -> dict:
    """All eq3 reductions for one base.

    The reductions depend on the digits only through ``a1 a2``, so one
    instance per distinct product is run; the certificate names the first
    digit pair with that product and lists the rest.
    """
    certs, retried = [], []
    l1_max = l2_max = 0
    prods = digit_products(b)
    pairs_by_prod: dict[int, list] = {}
    for a1 in range(1, b):
        for a2 in range(a1, b):
            pairs_by_prod.setdefault(a1 * a2, []).append([str(a1), str(a2)])
    for P, (a1, a2) in sorted(prods.items()):
        inst = eq3_l1_instance(b, a1, a2)
        out = dp_reduce(inst, bits, cap, retries, refine)
        if out.status != "reduced":
            raise PrecisionError(f"eq3-l1 b={b} a1a2={P}: epsilon <= 0 after {retries} retries")
        cert = certificate(inst, out)
        cert["covers"] = pairs_by_prod[P]
        certs.append(cert)
        if out.retries:
            retried.append(cert)
        l1_bound = _bound_from("eq3-l1", b, out) + 2
        l1_max = max(l1_max, l1_bound)
        for l1 in range(2, l1_bound + 1):
            inst2 = eq3_l2_instance(b, a1, a2, l1)
            out2 = dp_reduce(inst2, bits, cap, retries, refine)
            if out2.status != "reduced":
                raise PrecisionError(f"eq3-l2 b={b} a1a2={P} l1={l1}: epsilon <= 0 after {retries} retries")
            cert2 = certificate(inst2, out2)
            cert2["covers"] = pairs_by_prod[P]
            certs.append(cert2)
            if out2.retries:
                retried.append(cert2)
            l2_max = max(l2_max, _bound_from("eq3-l2", b, out2) + 2, l1)
    return {"b": b, "l1_max": l1_max, "l2_max": l2_max, "certificates": certs, "retried": retried}


def sweep_eq2_base(b: int, bits: int = DEFAULT_PRECISION, cap: int = PRECISION_CAP, retries: int = RETRIES, refine: bool = False) -> dict:
    """All eq2 reductions for one base: m first, then n for every m up to its bound."""
    certs, retried, fallbacks = [], [], []
    m_max = n_eps = n_fb = 0
    for a in range(1, b):
        inst = eq2_m_instance(b, a)
        out = dp_reduce(inst, bits, cap, retries, refine)
        if out.status != "reduced":
            raise PrecisionError(f"eq2-m b={b} a={a}: epsilon <= 0 after {retries} retries")
        cert = certificate(inst, out)
        certs.append(cert)
        if out.retries:
            retried.append(cert)
        m_bound = _bound_from("eq2-m", b, out)
        m_max = max(m_max, m_bound)
        for m in range(3, m_bound + 1):
            inst2 = eq2_n_instance(b, a, m)
            out2 = dp_reduce(inst2, bits, cap, retries, refine)
            if out2.status == "reduced":
                cert2 = certificate(inst2, out2)
                n_eps = max(n_eps, _bound_from("eq2-n", b, out2))
            else:
                fb = legendre_fallback(b, a, m, inst2.M, bits, cap)
                cert2 = certificate(inst2, out2, fb)
                n_fb = max(n_fb, fb.n_bound)
                fallbacks.append({"b": str(b), "a": str(a), "m": str(m), "g": str(fb.g), "n_bound": str(fb.n_bound)})
            certs.append(cert2)
            if out2.retries:
                retried.append(cert2)
    return {
        "b": b, "m_max": m_max, "n_max_eps": n_eps, "n_max_fallback": n_fb,
        "certificates": certs, "retried": retried, "fallbacks": fallbacks,
    }


def _run(fn, bases, workers, **kw):
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            futs = [ex.submit(fn, b, **kw) for b in bases]
            return [f.result() for f in futs]
    return [fn(b, **kw) for b in bases]


def _cert_key(c: dict):
    a = c["a"] if isinstance(c["a"], list) else [c["a"]]
    return (c["label"], int(c["b"]), [int(x) for x in a], int(c.get("l1", c.get("m", 0))))


def reduction_sweep(
    equation: str,
    bases=range(2, 51),
    bits: int = DEFAULT_PRECISION,
    cap: int = PRECISION_CAP,
    retries: int = RETRIES,
    workers: int = 1,
    refine: bool = False,
) -> SweepResult:
    bases = sorted(bases)
    if equation == "eq3":
        rows = _run(sweep_eq3_base, bases, workers, bits=bits, cap=cap, retries=retries, refine=refine)
        per_base = {r["b"]: {"l1_max": r["l1_max"], "l2_max": r["l2_max"]} for r in rows}
        l1 = max(r["l1_max"] for r in rows)
        l2 = max(r["l2_max"] for r in rows)
        for pb in per_base.values():
            pb["k_max"] = relative_bounds_eq3(3, max(pb["l2_max"], 2))[1]
        maxima = {"l1_max": l1, "l2_max": l2, "k_max": relative_bounds_eq3(3, l2)[1]}
        fallbacks = []
    elif equation == "eq2":
        rows = _run(sweep_eq2_base, bases, workers, bits=bits, cap=cap, retries=retries, refine=refine)
        per_base = {
            r["b"]: {"m_max": r["m_max"], "n_max_eps": r["n_max_eps"], "n_max_fallback": r["n_max_fallback"]}
            for r in rows
        }
        n_eps = max(r["n_max_eps"] for r in rows)
        n_fb = max(r["n_max_fallback"] for r in rows)
        maxima = {
            "m_max": max(r["m_max"] for r in rows),
            "n_max_eps": n_eps,
            "n_max_fallback": n_fb,
            "n_max": max(n_eps, n_fb),
        }
        fallbacks = [f for r in rows for f in r["fallbacks"]]
    else:
        raise ValueError(f"unknown equation {equation!r}")
    certs = sorted((c for r in rows for c in r["certificates"]), key=_cert_key)
    retried = sorted((c for r in rows for c in r["retried"]), key=_cert_key)
    return SweepResult(equation, bases, per_base, maxima, fallbacks, certs, retried)
