"""Exhaustive exact searches and comparison with the published tables."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .narayana import TABLE, narayana
from .repdigit import as_repdigit, digits_in_base, repdigit_value, two_repdigit_factorizations

B_RANGE = range(2, 51)


@dataclass(frozen=True, order=True)
class Eq2Solution:
    """``N_n N_m = [a...a]_b`` with ``l`` digits; tuple order follows (n, m, l, a, b)."""

    n: int
    m: int
    l: int
    a: int
    b: int

    @property
    def value(self) -> int:
        return narayana(self.n) * narayana(self.m)

    def as_tuple(self) -> tuple:
        return (self.n, self.m, self.l, self.a, self.b)

    def as_dict(self) -> dict:
        d = {k: str(v) for k, v in asdict(self).items()}
        d["value"] = str(self.value)
        return d


@dataclass(frozen=True, order=True)
class Eq3Solution:
    """``N_k = [a1]^l1_b [a2]^l2_b``."""

    k: int
    b: int
    a1: int
    a2: int
    l1: int
    l2: int

    @property
    def value(self) -> int:
        return narayana(self.k)

    def as_tuple(self) -> tuple:
        return (self.k, self.b, self.a1, self.a2, self.l1, self.l2)

    def as_dict(self) -> dict:
        d = {k: str(v) for k, v in asdict(self).items()}
        d["value"] = str(self.value)
        return d


def _eq2_base(b: int, n_max: int, m_max: int | None) -> list[Eq2Solution]:
    out = []
    for n in range(3, n_max + 1):
        Nn = TABLE[n]
        for m in range(3, min(n, m_max or n) + 1):
            hit = as_repdigit(Nn * TABLE[m], b)
            if hit is not None and hit[1] >= 2:
                out.append(Eq2Solution(n, m, hit[1], hit[0], b))
    return out


def _eq3_base(b: int, k_max: int, l1_max: int | None, l2_max: int | None) -> list[Eq3Solution]:
    out = []
    # nothing with l1 <= l1_max and l2 <= l2_max can exceed this
    ceiling = None
    if l1_max is not None and l2_max is not None:
        ceiling = repdigit_value(b - 1, b, l1_max) * repdigit_value(b - 1, b, l2_max)
    for k in range(3, k_max + 1):
        x = TABLE[k]
        if ceiling is not None and x > ceiling:
            break
        for (a1, l1), (a2, l2) in two_repdigit_factorizations(x, b, 2, l1_max, l2_max):
            out.append(Eq3Solution(k, b, a1, a2, l1, l2))
    return out


def _map_bases(fn, bases, workers, *args):
    TABLE.extend(max(args[0], 3))
    bases = sorted(bases)
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(fn, bases, *([a] * len(bases) for a in args)))
    else:
        parts = [fn(b, *args) for b in bases]
    return sorted(s for part in parts for s in part)


def solve_eq2(b_range=B_RANGE, n_max: int = 290, m_max: int | None = None, workers: int = 1) -> list[Eq2Solution]:
    """All ``3 <= m <= n <= n_max`` (and ``m <= m_max``) with ``N_n N_m`` a repdigit of length >= 2."""
    return _map_bases(_eq2_base, b_range, workers, n_max, m_max)


def solve_eq3(
    b_range=B_RANGE, k_max: int = 1598, l1_max: int | None = None, l2_max: int | None = None, workers: int = 1
) -> list[Eq3Solution]:
    """All ``3 <= k <= k_max`` with ``N_k`` a product of two repdigits of length >= 2.

    Bases are searched independently; ``k`` stops early once ``N_k``
    exceeds the largest product allowed by the length caps.
    """
    return _map_bases(_eq3_base, b_range, workers, k_max, l1_max, l2_max)


# -- independent checks ---------------------------------------------------------


def _is_repdigit_by_digits(x: int, b: int, a: int, l: int) -> bool:
    d = digits_in_base(x, b)
    return len(d) == l and all(v == a for v in d)


def verify_solution(sol) -> bool:
    """Re-check a solution by expanding digits, without the search kernel."""
    if isinstance(sol, Eq2Solution):
        if not (3 <= sol.m <= sol.n and 1 <= sol.a < sol.b and sol.l >= 2):
            return False
        return _is_repdigit_by_digits(narayana(sol.n) * narayana(sol.m), sol.b, sol.a, sol.l)
    if isinstance(sol, Eq3Solution):
        if not (2 <= sol.l1 <= sol.l2 and 1 <= sol.a1 <= sol.a2 < sol.b):
            return False
        x = narayana(sol.k)
        r1 = sum(sol.a1 * sol.b**i for i in range(sol.l1))
        if r1 == 0 or x % r1:
            return False
        return _is_repdigit_by_digits(x // r1, sol.b, sol.a2, sol.l2)
    raise TypeError(type(sol))


def _repdigits_upto(limit: int, b: int):
    """Every ``(value, a, l)`` with ``l >= 2`` and value <= limit, built digit by digit."""
    out = []
    for a in range(1, b):
        v = a + a * b
        l = 2
        while v <= limit:
            out.append((v, a, l))
            v = v * b + a
            l += 1
    return out


def naive_eq2(n_max: int, b_range=B_RANGE) -> list[Eq2Solution]:
    """Match products against a precomputed list of all small repdigits."""
    prods: dict[int, list[tuple[int, int]]] = {}
    for n in range(3, n_max + 1):
        for m in range(3, n + 1):
            prods.setdefault(narayana(n) * narayana(m), []).append((n, m))
    top = max(prods)
    out = []
    for b in b_range:
        for v, a, l in _repdigits_upto(top, b):
            for n, m in prods.get(v, ()):
                out.append(Eq2Solution(n, m, l, a, b))
    return sorted(out)


def naive_eq3(k_max: int, b_range=B_RANGE) -> list[Eq3Solution]:
    """Every pair of small repdigits whose product is a Narayana number."""
    targets: dict[int, list[int]] = {}
    for k in range(3, k_max + 1):
        targets.setdefault(narayana(k), []).append(k)
    top = max(targets)
    out = []
    for b in b_range:
        reps = _repdigits_upto(top, b)
        for v1, a1, l1 in reps:
            for v2, a2, l2 in reps:
                if l1 <= l2 and a1 <= a2 and v1 * v2 in targets:
                    out.extend(Eq3Solution(k, b, a1, a2, l1, l2) for k in targets[v1 * v2])
    return sorted(set(out))


# -- published tables -------------------------------------------------------------

# (n, m, l, a, b); l is None where the printed tuple is truncated to (n, m, b).
PUBLISHED_EQ2_TABLE: list[tuple] = [
    (5, 3, 2, 1, 2), (6, 3, 2, 1, 3), (9, 3, None, 1, 3), (4, 4, 2, 1, 3),
    (11, 9, 2, 1, 3), (7, 3, 2, 1, 5), (5, 4, None, 1, 5), (6, 4, 2, 1, 7),
    (10, 5, 2, 1, 7), (8, 3, 2, 1, 8), (5, 5, 2, 1, 8), (7, 4, 2, 1, 11),
    (6, 5, 2, 1, 11), (9, 3, 2, 1, 12), (19, 6, 2, 1, 13), (6, 6, 2, 1, 15),
    (8, 4, 2, 1, 17), (7, 5, 2, 1, 17), (10, 3, 2, 1, 18), (7, 6, 2, 1, 23),
    (9, 4, 2, 1, 25), (8, 5, 2, 1, 26), (11, 3, 2, 1, 27), (8, 6, 2, 1, 35),
    (7, 7, 2, 1, 35), (10, 4, 2, 1, 37), (9, 5, 2, 1, 38), (12, 3, 2, 1, 40),
    (15, 10, 2, 1, 49),
    (6, 4, 2, 2, 3), (9, 4, 3, 2, 3), (7, 4, 2, 2, 5), (8, 4, 2, 3, 5),
    (6, 5, 2, 2, 5), (7, 5, 2, 3, 5), (7, 6, 2, 4, 5), (11, 3, 2, 4, 6),
    (15, 3, 3, 3, 6), (6, 6, 2, 2, 7), (7, 6, 2, 3, 7), (10, 7, 3, 2, 7),
    (10, 8, 3, 3, 7), (8, 4, 2, 2, 8), (7, 5, 2, 2, 8), (8, 5, 2, 3, 8),
    (8, 6, 2, 4, 8), (7, 7, 2, 4, 8), (8, 7, 2, 6, 8), (13, 3, 2, 6, 9),
    (11, 9, 3, 4, 9), (13, 12, 4, 3, 9), (14, 3, 2, 8, 10), (13, 3, 2, 5, 11),
    (13, 4, 2, 10, 11), (11, 5, 2, 7, 11), (7, 6, 2, 2, 11), (8, 6, 2, 3, 11),
    (7, 7, 2, 3, 11), (11, 10, 3, 4, 11), (9, 4, 2, 2, 12), (9, 5, 2, 3, 12),
    (9, 6, 2, 4, 12), (9, 7, 2, 6, 12), (9, 8, 2, 9, 12), (11, 3, 2, 2, 13),
    (11, 4, 2, 4, 13), (11, 5, 2, 6, 13), (11, 6, 2, 8, 13), (11, 7, 2, 12, 13),
    (19, 11, 4, 7, 13), (13, 3, 2, 4, 14), (13, 4, 2, 8, 14), (13, 5, 2, 12, 14),
    (14, 4, 2, 11, 15), (11, 6, 2, 7, 15), (16, 9, 3, 9, 16), (13, 5, 2, 10, 17),
    (8, 6, 2, 2, 17), (7, 7, 2, 2, 17), (8, 7, 2, 3, 17), (11, 8, 2, 14, 17),
    (10, 4, 2, 2, 18), (10, 5, 2, 3, 18), (10, 6, 2, 4, 18), (10, 7, 2, 6, 18),
    (10, 8, 2, 9, 18), (10, 9, 2, 13, 18), (13, 3, 2, 3, 19), (13, 4, 2, 6, 19),
    (13, 5, 2, 9, 19), (13, 6, 2, 12, 19), (13, 7, 2, 18, 19), (16, 3, 2, 9, 20),
    (16, 4, 2, 18, 20), (11, 5, 2, 4, 20), (11, 7, 2, 8, 20), (11, 8, 2, 12, 20),
    (14, 3, 2, 4, 21), (14, 4, 2, 8, 21), (14, 5, 2, 12, 21), (14, 6, 2, 16, 21),
    (13, 4, 2, 5, 23), (14, 5, 2, 11, 23), (13, 6, 2, 10, 23), (11, 7, 2, 7, 23),
    (13, 7, 2, 15, 23), (14, 7, 2, 22, 23), (9, 6, 2, 2, 25), (9, 7, 2, 3, 25),
    (11, 9, 2, 14, 25), (16, 3, 2, 7, 26), (16, 4, 2, 14, 26), (16, 5, 2, 21, 26),
    (8, 7, 2, 2, 26), (8, 8, 2, 3, 26), (13, 8, 2, 20, 26), (11, 4, 2, 2, 27),
    (11, 5, 2, 3, 27), (11, 6, 2, 4, 27), (11, 7, 2, 6, 27), (11, 8, 2, 9, 27),
    (11, 9, 2, 13, 27), (11, 10, 2, 19, 27), (18, 3, 2, 14, 28), (13, 3, 2, 2, 29),
    (13, 4, 2, 4, 29), (13, 5, 2, 6, 29), (13, 6, 2, 8, 29), (13, 7, 2, 12, 29),
    (13, 8, 2, 18, 29), (13, 9, 2, 26, 29), (14, 6, 2, 11, 31), (14, 5, 2, 8, 32),
    (14, 7, 2, 16, 32), (14, 8, 2, 24, 32), (20, 19, 4, 14, 33), (19, 3, 2, 17, 34),
    (13, 5, 2, 5, 35), (16, 6, 2, 21, 35), (13, 7, 2, 10, 35), (11, 8, 2, 7, 35),
    (13, 8, 2, 15, 35), (14, 8, 2, 22, 35), (10, 6, 2, 2, 37), (10, 7, 2, 3, 37),
    (11, 10, 2, 14, 37), (13, 10, 2, 30, 37), (9, 7, 2, 2, 38), (9, 8, 2, 3, 38),
    (13, 9, 2, 20, 38), (13, 4, 2, 3, 39), (13, 6, 2, 6, 39), (13, 7, 2, 9, 39),
    (12, 4, 2, 2, 40), (12, 5, 2, 3, 40), (12, 6, 2, 4, 40), (12, 7, 2, 6, 40),
    (12, 8, 2, 9, 40), (12, 9, 2, 13, 40), (12, 10, 2, 19, 40), (12, 11, 2, 28, 40),
    (16, 4, 2, 9, 41), (11, 5, 2, 2, 41), (18, 5, 2, 29, 41), (16, 6, 2, 18, 41),
    (11, 7, 2, 4, 41), (16, 7, 2, 27, 41), (11, 8, 2, 6, 41), (13, 11, 2, 40, 41),
    (15, 3, 2, 3, 42), (15, 4, 2, 6, 42), (15, 5, 2, 9, 42), (15, 6, 2, 12, 42),
    (15, 7, 2, 18, 42), (15, 8, 2, 27, 42), (15, 9, 2, 39, 42), (14, 3, 2, 2, 43),
    (14, 4, 2, 4, 43), (14, 5, 2, 6, 43), (14, 6, 2, 8, 43), (14, 7, 2, 12, 43),
    (14, 8, 2, 18, 43), (14, 9, 2, 26, 43), (14, 10, 2, 38, 43), (13, 5, 2, 4, 44),
    (13, 7, 2, 8, 44), (13, 8, 2, 12, 44), (20, 10, 3, 8, 45), (13, 6, 2, 5, 47),
    (14, 7, 2, 11, 47), (13, 11, 2, 35, 47), (11, 11, 2, 16, 48), (19, 5, 2, 35, 50),
]

# (k, b, a1, a2, l1, l2)
PUBLISHED_EQ3_TABLE: list[tuple] = [(8, 2, 1, 1, 2, 2), (16, 2, 1, 1, 2, 6)]


@dataclass
class TableDiff:
    matched: list = field(default_factory=list)
    corrected: list = field(default_factory=list)  # (printed, derived)
    missing_in_published: list = field(default_factory=list)
    missing_in_derived: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.missing_in_derived

    def as_dict(self) -> dict:
        fmt = lambda t: [("?" if v is None else str(v)) for v in t]  # noqa: E731
        return {
            "matched": [fmt(t) for t in self.matched],
            "corrected": [{"published": fmt(p), "derived": fmt(d)} for p, d in self.corrected],
            "missing_in_published": [fmt(t) for t in self.missing_in_published],
            "missing_in_derived": [fmt(t) for t in self.missing_in_derived],
            "ok": self.ok,
        }

    def report(self) -> str:
        fmt = lambda t: "(" + ",".join("?" if v is None else str(v) for v in t) + ")"  # noqa: E731
        lines = [
            f"matched: {len(self.matched)}",
            f"corrected: {len(self.corrected)}",
        ]
        lines += [f"  {fmt(p)} -> {fmt(d)}" for p, d in self.corrected]
        lines.append(f"missing in printed table: {len(self.missing_in_published)}")
        lines += [f"  {fmt(t)}" for t in self.missing_in_published]
        lines.append(f"missing in derived set: {len(self.missing_in_derived)}")
        lines += [f"  {fmt(t)}" for t in self.missing_in_derived]
        return "\n".join(lines)


def diff_against_published_tables(derived, table=None, equation: str | None = None) -> TableDiff:
    """Classify printed tuples against a derived solution list.

    Eq2 tuples are keyed on (n, m, a, b) so that a wrong or missing length
    becomes a correction; eq3 tuples must match exactly.
    """
    derived = sorted(derived)
    if equation is None:
        equation = "eq3" if derived and isinstance(derived[0], Eq3Solution) else "eq2"
    eq2 = equation == "eq2"
    if table is None:
        table = PUBLISHED_EQ2_TABLE if eq2 else PUBLISHED_EQ3_TABLE
    got = {s.as_tuple() for s in derived}
    diff = TableDiff()
    used = set()
    if eq2:
        by_key = {}
        for t in got:
            by_key.setdefault((t[0], t[1], t[3], t[4]), []).append(t)
        for p in table:
            if p in got:
                diff.matched.append(p)
                used.add(p)
                continue
            cands = sorted(by_key.get((p[0], p[1], p[3], p[4]), []))
            if cands:
                diff.corrected.append((p, cands[0]))
                used.update(cands)
            else:
                diff.missing_in_derived.append(p)
    else:
        for p in table:
            if p in got:
                diff.matched.append(p)
                used.add(p)
            else:
                diff.missing_in_derived.append(p)
    diff.missing_in_published = sorted(got - used)
    return diff
