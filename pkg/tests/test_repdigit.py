from math import isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from narayana_repdigits.repdigit import (
    Repdigit,
    RepdigitDomainError,
    as_repdigit,
    digits_in_base,
    repdigit_by_digits,
    repdigit_value,
    two_repdigit_factorizations,
)


def test_values():
    assert repdigit_value(1, 2, 2) == 3
    assert repdigit_value(1, 2, 6) == 63
    assert repdigit_value(7, 10, 1) == 7
    assert Repdigit(2, 3, 3).value == 26


@pytest.mark.parametrize("a,b,l", [(2, 2, 3), (0, 5, 2), (1, 5, 0), (1, 1, 3)])
def test_domain(a, b, l):
    with pytest.raises(RepdigitDomainError):
        repdigit_value(a, b, l)


def test_digits():
    assert digits_in_base(0, 7) == []
    assert digits_in_base(57, 7) == [1, 1, 1]
    assert digits_in_base(364, 3) == [1] * 6


def test_recognition():
    assert as_repdigit(9, 8) == (1, 2)
    assert as_repdigit(10, 3) is None
    assert as_repdigit(364, 3) == (1, 6)
    assert as_repdigit(5, 7) == (5, 1)


@given(st.integers(2, 50), st.integers(1, 40), st.data())
def test_round_trip(b, l, data):
    a = data.draw(st.integers(1, b - 1))
    assert as_repdigit(repdigit_value(a, b, l), b) == (a, l)


@given(st.integers(0, 2**512), st.integers(2, 50))
def test_digit_round_trip(x, b):
    d = digits_in_base(x, b)
    assert sum(v * b**i for i, v in enumerate(d)) == x
    assert not d or d[-1] != 0


@settings(max_examples=300)
@given(st.integers(1, 10**12), st.integers(2, 50))
def test_recognition_matches_digits(x, b):
    assert as_repdigit(x, b) == repdigit_by_digits(x, b)


@given(st.integers(2, 64))
def test_power_of_two_bases(e):
    for b in (2, 4, 8, 16, 32):
        x = (1 << e) - 1
        assert as_repdigit(x, b) == repdigit_by_digits(x, b)


def test_factorization_examples():
    assert two_repdigit_factorizations(9, 2, 2) == [((1, 2), (1, 2))]
    assert two_repdigit_factorizations(189, 2, 2) == [((1, 2), (1, 6))]
    assert two_repdigit_factorizations(10, 2, 2) == []


def _naive_factorizations(x, b, l_min=2):
    reps = []
    for a in range(1, b):
        l, v = 1, a
        while v <= x:
            if l >= l_min:
                reps.append((v, a, l))
            v, l = v * b + a, l + 1
    out = []
    for v1, a1, l1 in reps:
        for v2, a2, l2 in reps:
            if v1 * v2 == x and l1 <= l2 and a1 <= a2:
                out.append(((a1, l1), (a2, l2)))
    return sorted(out)


def test_factorizations_dual_oracle():
    for b in (2, 3, 5, 10):
        for x in range(1, 3000):
            assert sorted(two_repdigit_factorizations(x, b, 2)) == _naive_factorizations(x, b), (x, b)


@settings(max_examples=200)
@given(st.integers(1, 10**6), st.integers(2, 50))
def test_factorizations_random(x, b):
    assert sorted(two_repdigit_factorizations(x, b, 2)) == _naive_factorizations(x, b)


def test_factorization_caps():
    x = repdigit_value(1, 2, 2) * repdigit_value(1, 2, 6)
    assert two_repdigit_factorizations(x, 2, 2, l2_max=5) == []
    assert two_repdigit_factorizations(x, 2, 3) == []
    assert repdigit_value(1, 2, 2) <= isqrt(x)
