import pytest

from narayana_repdigits.search import (
    PUBLISHED_EQ2_TABLE,
    Eq2Solution,
    Eq3Solution,
    diff_against_published_tables,
    naive_eq2,
    naive_eq3,
    solve_eq2,
    solve_eq3,
    verify_solution,
)


@pytest.fixture(scope="module")
def eq2_all():
    return solve_eq2(n_max=290)


def test_eq2_contains(eq2_all):
    got = {s.as_tuple() for s in eq2_all}
    assert (5, 3, 2, 1, 2) in got
    assert (9, 4, 3, 2, 3) in got
    assert Eq2Solution(9, 4, 3, 2, 3).value == 26


def test_eq2_b3_completes_truncated():
    got = {s.as_tuple() for s in solve_eq2([3], 290)}
    assert (9, 3, 3, 1, 3) in got and (11, 9, 6, 1, 3) in got


def test_eq2_duplicate_free_and_verified(eq2_all):
    assert len(eq2_all) == len(set(eq2_all))
    assert all(verify_solution(s) for s in eq2_all)
    assert eq2_all == sorted(eq2_all)


def test_dual_oracle_eq2():
    assert naive_eq2(40) == solve_eq2(n_max=40)


def test_dual_oracle_eq3():
    assert naive_eq3(60) == solve_eq3(k_max=60)


def test_eq3_small():
    sols = solve_eq3(k_max=100)
    assert [s.as_tuple() for s in sols] == [(8, 2, 1, 1, 2, 2), (16, 2, 1, 1, 2, 6)]


def test_n9_has_no_factorization():
    assert not [s for s in solve_eq3(k_max=9) if s.k == 9]


def test_verify_solution():
    assert verify_solution(Eq3Solution(8, 2, 1, 1, 2, 2))
    assert verify_solution(Eq2Solution(5, 3, 2, 1, 2))
    assert not verify_solution(Eq2Solution(5, 3, 3, 1, 2))
    assert not verify_solution(Eq3Solution(8, 2, 1, 1, 2, 3))


def test_parallel_matches_serial():
    assert solve_eq2(range(2, 8), 60, workers=2) == solve_eq2(range(2, 8), 60)


def test_monotone_coverage():
    small = set(solve_eq2(range(2, 20), 40))
    big = set(solve_eq2(range(2, 20), 80))
    assert small <= big


def test_diff(eq2_all):
    d = diff_against_published_tables(eq2_all, equation="eq2")
    corr = dict(d.corrected)
    assert (6, 3, 2, 1, 3) in d.matched
    assert corr[(11, 9, 2, 1, 3)] == (11, 9, 6, 1, 3)
    assert corr[(10, 5, 2, 1, 7)] == (10, 5, 3, 1, 7)
    assert corr[(9, 3, None, 1, 3)] == (9, 3, 3, 1, 3)
    assert corr[(15, 10, 2, 1, 49)] == (15, 10, 3, 1, 49)
    assert d.ok and not d.missing_in_derived
    covered = set(d.matched) | {c for _, c in d.corrected} | set(d.missing_in_published)
    assert covered == {s.as_tuple() for s in eq2_all}
    assert len(d.matched) + len(d.corrected) == len(PUBLISHED_EQ2_TABLE)


def test_diff_detects_missing():
    d = diff_against_published_tables(solve_eq2([2], 10), table=[(5, 3, 2, 1, 2), (6, 6, 2, 1, 2)], equation="eq2")
    assert d.missing_in_derived == [(6, 6, 2, 1, 2)] and not d.ok
    assert "missing in derived set: 1" in d.report()


def test_serialization():
    d = Eq3Solution(16, 2, 1, 1, 2, 6).as_dict()
    assert d["value"] == "189" and all(isinstance(v, str) for v in d.values())
