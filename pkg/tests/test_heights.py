import pytest
from flint import arb

from narayana_repdigits.balls import working_precision
from narayana_repdigits.heights import (
    HeightBound,
    LinearFormInstance,
    combine_heights,
    height_c_alpha,
    height_psi3_eq2_m,
    height_psi3_eq2_n,
    height_psi3_eq3_l1,
    height_psi3_eq3_l2,
    height_rational,
    lambda_instance,
    matveev_constant,
    matveev_log_lower_bound,
)
from narayana_repdigits.narayana import compute_constants


@pytest.fixture(autouse=True)
def _precision():
    with working_precision(256):
        yield


def close(x, y, tol="1e-30"):
    return bool(abs(arb(x) - arb(y)) < arb(tol))


def test_height_rational():
    assert height_rational(1, 1).value == 0
    assert close(height_rational(4, 3).value, arb(4).log())
    assert close(height_rational(8, 6).value, arb(4).log())
    assert close(height_rational(50, 1).value, arb(50).log())
    with pytest.raises(ZeroDivisionError):
        height_rational(1, 0)


def test_combine():
    l2, l3 = arb(2).log(), arb(3).log()
    assert close(combine_heights("product", [l2, l3]).value, arb(6).log())
    assert close(combine_heights("power", [HeightBound(l3)], s=-1).value, l3)
    assert close(combine_heights("sum", [0, 0]).value, l2)
    with pytest.raises(ValueError):
        HeightBound(arb(-1))


def test_c_alpha_height():
    assert close(height_c_alpha().value, arb(31).log() / 3)


@pytest.mark.parametrize("b", range(2, 51))
def test_psi3_bounds_all_bases(b):
    h = height_psi3_eq3_l1(b, 1, b - 1)
    assert h.value < 3 * arb(b).log()
    assert h.value >= 0
    assert height_psi3_eq3_l2(b, 1, 1, 5).value.contains(8 * arb(b).log())
    assert height_psi3_eq2_m(b, b - 1).value < 5 * arb(b).log()
    assert height_psi3_eq2_n(b, 1, 40).value > 0


def test_psi3_b2():
    assert close(height_psi3_eq3_l1(2, 1, 1).value, arb(31).log() / 3)


def test_matveev_constant():
    C = matveev_constant(3, 3)
    expected = arb("1.4") * arb(30) ** 6 * arb(3) ** arb("4.5") * 9 * (1 + arb(3).log())
    assert close(C, expected, "1e-3")
    assert arb("2.704e12") < C < arb("2.705e12")


def test_matveev_examples():
    e = arb(1).exp()
    # B = e - 1 gives (1 + log B) ~ 1.54, so about -4.17e12
    v = matveev_log_lower_bound(LinearFormInstance(3, 3, [1, 1, 1], e - 1))
    assert arb("-4.17e12") < v < arb("-4.16e12")
    # the factor 2 in the formula corresponds to B = e: about -5.41e12
    v2 = matveev_log_lower_bound(LinearFormInstance(3, 3, [1, 1, 1], e))
    assert close(v2, -2 * matveev_constant(3, 3), "1e-3")
    assert arb("-5.41e12") < v2 < arb("-5.40e12")


def test_matveev_monotone():
    base = matveev_log_lower_bound(LinearFormInstance(3, 3, [1, 1, 1], 10))
    doubled = matveev_log_lower_bound(LinearFormInstance(3, 3, [2, 1, 1], 10))
    assert close(doubled, 2 * base, "1e-3")
    bigger_B = matveev_log_lower_bound(LinearFormInstance(3, 3, [1, 1, 1], 11))
    assert bigger_B < base
    assert matveev_log_lower_bound(LinearFormInstance(3, 4, [1, 1, 1], 10)) < base


def test_instance_validation():
    with pytest.raises(ValueError):
        LinearFormInstance(3, 3, [1, 1, "0.1"], 10)
    with pytest.raises(ValueError):
        LinearFormInstance(3, 3, [1, 1, 1], "0.5")
    with pytest.raises(ValueError):
        LinearFormInstance(1, 3, [1], 10)


@pytest.mark.parametrize("b", [2, 10, 50])
def test_lambda_instances_reproduce_A3(b):
    la = compute_constants(128).log_alpha
    lb = arb(b).log()
    with working_precision(128):
        cases = {
            "lambda3": (lambda_instance("lambda3", b, 100), 9 * lb),
            "lambda4": (lambda_instance("lambda4", b, 100, l1=7), 3 * (4 + 7) * lb),
            "lambda1": (lambda_instance("lambda1", b, 100), arb("13.5") * lb),
            "lambda2": (lambda_instance("lambda2", b, 100, m=20), 3 * (arb("2.3") * lb + 20 * la)),
        }
        for name, (inst, A3) in cases.items():
            assert inst.t == 3 and inst.D == 3, name
            assert close(inst.A[0], la) and close(inst.A[1], 3 * lb)
            assert close(inst.A[2], A3), name
