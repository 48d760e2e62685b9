import random

import mpmath
import pytest
from flint import arb

from narayana_repdigits.balls import PrecisionError, working_precision
from narayana_repdigits.narayana import narayana
from narayana_repdigits.reduction import (
    LINEAR_FORMS,
    DPInstance,
    certificate,
    dp_reduce,
    eq2_M,
    eq2_m_instance,
    eq2_n_instance,
    eq3_l1_instance,
    eq3_l2_instance,
    eq3_M,
    legendre_fallback,
    legendre_n_bound,
    reduce_eq2_n,
    reduce_eq3_l1,
    reduction_sweep,
    replay_certificate,
    sweep_eq2_base,
    w_floor,
)
from narayana_repdigits.search import solve_eq2

PRINTED_EXCEPTIONS = [(b, b - 1, 3) for b in range(2, 51)] + [
    (2, 1, 4), (2, 1, 6), (3, 2, 5), (3, 2, 8), (4, 3, 6), (6, 5, 7),
    (9, 8, 8), (13, 12, 9), (19, 18, 10), (28, 27, 11), (41, 40, 12),
]


class Oracle:
    """Dujella-Petho with mpmath at 400 digits, independent of the ball code."""

    def __init__(self):
        mpmath.mp.dps = 400
        self.alpha = mpmath.findroot(lambda x: x**3 - x**2 - 1, mpmath.mpf("1.4655712"))
        self.c = 1 / (self.alpha**3 + 2)
        self.la = mpmath.log(self.alpha)

    @staticmethod
    def convergents(x, n=200):
        p0, q0, p1, q1 = 1, 0, int(mpmath.floor(x)), 1
        out = [(p1, q1)]
        y = x - mpmath.floor(x)
        for _ in range(n):
            y = 1 / y
            a = int(mpmath.floor(y))
            y -= a
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
            out.append((p1, q1))
        return out

    def reduce(self, tau, mu, M, A, logB):
        d = lambda x: abs(x - mpmath.nint(x))  # noqa: E731
        q = next(q for _, q in self.convergents(tau) if q > 6 * M)
        eps = d(mu * q) - M * d(tau * q)
        w = int(mpmath.floor(mpmath.log(A * q / eps) / logB)) if eps > 0 else None
        return eps, q, w

    def eq2_n(self, b, a, m, M):
        lb = mpmath.log(b)
        mu = (mpmath.log(a) - mpmath.log(narayana(m)) - mpmath.log(self.c) - mpmath.log(b - 1)) / self.la
        return self.reduce(lb / self.la, mu, M, 32, self.la)

    def eq3_l1(self, b, a1, a2, M):
        lb = mpmath.log(b)
        mu = (2 * mpmath.log(b - 1) + mpmath.log(self.c) - mpmath.log(a1 * a2)) / lb
        return self.reduce(self.la / lb, mu, M, 15, lb)


@pytest.fixture(scope="module")
def oracle():
    return Oracle()


def test_w_floor_is_least_valid():
    for label, (c, base, A) in LINEAR_FORMS.items():
        for b in (2, 3, 10, 50):
            w = w_floor(label, b)
            with working_precision(256):
                from narayana_repdigits.reduction import log_base

                lB = log_base(base, b, 256)
                B = lB.exp()

                def ok(w):
                    lam = c / B**w
                    return bool(lam <= arb(1) / 2 and lam / (1 - lam) <= A * lB)

                assert ok(w) and all(ok(w + i) for i in range(1, 20))
                assert w == 0 or not ok(w - 1)


def test_eq2_n_examples_against_oracle(oracle):
    # printed as exceptions; at our precision epsilon is certified positive
    for b, a, m in [(3, 2, 5), (2, 1, 3), (2, 1, 4), (13, 12, 9)]:
        out = reduce_eq2_n(b, a, m)
        eps, q, w = oracle.eq2_n(b, a, m, eq2_M(b))
        assert out.status == "reduced"
        assert out.q_used == q
        with working_precision(256):
            assert abs(out.epsilon - arb(mpmath.nstr(eps, 60))) < arb(10) ** -20
        assert out.reduced_w == w


def test_eq3_l1_b2(oracle):
    out = reduce_eq3_l1(2, 1, 1)
    eps, q, w = oracle.eq3_l1(2, 1, 1, eq3_M(2))
    assert out.status == "reduced" and out.attempts == 1
    assert (out.q_used, out.reduced_w) == (q, w) == (q, 121)
    # with the published multiplier 1.3e34 log^3 b the first convergent gives w = 120, l1 <= 122
    M_pub = int(mpmath.ceil(mpmath.mpf("1.3e34") * mpmath.log(2) ** 3))
    alt = dp_reduce(eq3_l1_instance(2, 1, 1, M=M_pub))
    assert alt.reduced_w == oracle.eq3_l1(2, 1, 1, M_pub)[2] == 120


def test_fallback_when_mu_is_trivial():
    # mu = 0 makes ||mu q|| = 0, so epsilon < 0 for every convergent
    inst = DPInstance(
        "eq2-n", {"b": 2, "a": 1, "m": 3}, 1000, 32,
        eq2_n_instance(2, 1, 3).tau, lambda bits: arb(0), eq2_n_instance(2, 1, 3).log_B,
    )
    out = dp_reduce(inst, retries=4)
    assert out.status == "fallback_needed" and out.attempts == 5 and len(out.retries) == 5
    assert out.epsilon < 0


def test_mu_multiple_of_tau_falls_back():
    base = eq2_n_instance(5, 1, 3)
    inst = DPInstance("eq2-n", {"b": 5, "a": 1, "m": 3}, 10**6, 32, base.tau, lambda bits: 3 * base.tau(bits), base.log_B)
    assert dp_reduce(inst).status == "fallback_needed"


def test_legendre_bounds():
    assert legendre_n_bound(1, 64) == 22
    vals = [legendre_n_bound(g, 10**30) for g in range(1, 200, 7)]
    assert vals == sorted(vals)


@pytest.mark.parametrize("triple", PRINTED_EXCEPTIONS)
def test_legendre_on_printed_exceptions(triple, oracle):
    b = triple[0]
    fb = legendre_fallback(*triple)
    M = eq2_M(b)
    # g from an independent expansion: max quotient up to one past the first q > M
    x = mpmath.log(b) / oracle.la
    gs, q0, q1 = [], 1, 0
    while q1 <= M:
        a = int(mpmath.floor(x))
        gs.append(a)
        q0, q1 = q1, a * q1 + q0
        x = 1 / (x - a)
    gs.append(int(mpmath.floor(x)))
    assert fb.g == max(gs) and fb.q_K == q1
    n_real = mpmath.log(32 * (fb.g + 2) * M) / oracle.la
    assert fb.n_bound == int(mpmath.floor(n_real))
    # well inside the eq2 search horizon
    assert 3 <= fb.n_bound <= 290


def test_precision_failure_names_instance():
    with pytest.raises(PrecisionError, match=r"eq2-m.*'b': 7"):
        dp_reduce(eq2_m_instance(7, 3), bits=64, cap=64)


def test_escalation_reaches_answer():
    a = dp_reduce(eq2_m_instance(7, 3), bits=64, cap=1024)
    b = dp_reduce(eq2_m_instance(7, 3), bits=512)
    assert a.bits > 64 and (a.q_used, a.reduced_w) == (b.q_used, b.reduced_w)


def test_refine_never_worse():
    for b, a in [(26, 11), (2, 1), (49, 48)]:
        first = dp_reduce(eq2_m_instance(b, a))
        best = dp_reduce(eq2_m_instance(b, a), refine=True)
        assert best.reduced_w <= first.reduced_w
    assert dp_reduce(eq2_m_instance(26, 11)).reduced_w == 265
    assert dp_reduce(eq2_m_instance(26, 11), refine=True).reduced_w == 253


def test_certificate_fields_and_replay():
    inst = eq3_l2_instance(5, 2, 3, 4)
    cert = certificate(inst, dp_reduce(inst))
    for key in ("label", "b", "a", "l1", "tau_precision_bits", "q", "p", "epsilon", "M", "A", "B", "reduced_w"):
        assert key in cert
    assert all(isinstance(v, (str, list)) for v in cert.values())
    assert replay_certificate(cert)
    bad = dict(cert, reduced_w=str(int(cert["reduced_w"]) + 1))
    assert not replay_certificate(bad)


def test_deterministic():
    a = certificate(eq2_n_instance(11, 4, 17), reduce_eq2_n(11, 4, 17))
    b = certificate(eq2_n_instance(11, 4, 17), reduce_eq2_n(11, 4, 17))
    assert a == b


def test_sweep_replay_sample():
    res = reduction_sweep("eq2", [2, 3, 17])
    rng = random.Random(7)
    for cert in rng.sample(res.certificates, 40):
        assert replay_certificate(cert), cert


def test_sweep_shapes():
    r3 = reduction_sweep("eq3", [2])
    assert set(r3.maxima) == {"l1_max", "l2_max", "k_max"}
    assert r3.maxima["k_max"] == 22 * r3.maxima["l2_max"] + 1
    assert all(c["status"] == "reduced" for c in r3.certificates)
    r2 = reduction_sweep("eq2", [2])
    assert r2.maxima["n_max"] == max(r2.maxima["n_max_eps"], r2.maxima["n_max_fallback"])


def test_toy_completeness_b2():
    row = sweep_eq2_base(2)
    n_max = max(row["n_max_eps"], row["n_max_fallback"])
    sols = solve_eq2([2], n_max + 50)
    assert sols and all(s.n <= n_max for s in sols)
