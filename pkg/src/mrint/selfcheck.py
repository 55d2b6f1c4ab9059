"""Self-verification suites run by ``mrint selfcheck``.

Each suite returns a :class:`SuiteResult`; suites run in a fixed order and
do not stop at the first failure.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .basis import basis_pair, epsilon_closed_form, ode_residual, recurrence_residual_P, rodrigues
from .exact import ArcElement, Poly, T
from .gamma import closed_form_f_limit, jordan_closed_form, s11_even_closed_form
from .residues import s_double_zero, s_jordan, s_poly, s_zero_index, recurrence_residual
from .table import a_crosscheck


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0


def perturbed_family(i: int) -> Poly:
    """Rodrigues family with P_3 deliberately corrupted (detector test)."""
    P = rodrigues(i)
    return P + T ** (i - 1) if i == 3 else P


def suite_ode(max_index: int = 30, family: Callable[[int], Poly] | None = None) -> SuiteResult:
    fails, n = [], 0
    for i in range(1, max_index + 1):
        b = basis_pair(i)
        P = ArcElement.poly(family(i)) if family else b.p
        for name, y in (("P", P), ("Q/eps", b.q_normalized())):
            n += 1
            if ode_residual(y, i):
                fails.append(f"{name}_{i} does not solve the ODE")
    for i in range(1, min(max_index, 28) + 1):
        n += 1
        if recurrence_residual_P(i, family):
            fails.append(f"P-recurrence fails at n = {i}")
    return SuiteResult("ode", not fails, n, fails)


def suite_epsilon(max_index: int = 15) -> SuiteResult:
    fails = []
    for i in range(1, max_index + 1):
        e = basis_pair(i).epsilon
        if e == 0:
            fails.append(f"eps_{i} = 0")
        elif e != epsilon_closed_form(i):
            fails.append(f"eps_{i} = {e} != {epsilon_closed_form(i)}")
    if basis_pair(0).epsilon != 0:
        fails.append("eps_0 != 0")
    return SuiteResult("epsilon", not fails, max_index + 1, fails)


def suite_recurrence(max_index: int = 12) -> SuiteResult:
    fails, n = [], 0
    for i in range(3, max_index + 1):
        for j in range(2, max_index + 1):
            for k in range(2, max_index + 1):
                n += 1
                r = recurrence_residual(i, j, k)
                if any(r):
                    fails.append(f"({i},{j},{k}): residual {tuple(map(str, r))}")
    return SuiteResult("recurrence", not fails, n, fails)


def suite_table(max_index: int = 12, jobs: int = 1) -> SuiteResult:
    bad = a_crosscheck(max_index, jobs=jobs)
    n = (max_index + 1) * (max_index + 2) * (max_index + 3) // 6
    return SuiteResult("table", not bad, n, [f"A{t} disagrees with the residue oracle" for t in bad])


def _positive_triples(max_index: int):
    for i in range(1, max_index + 1):
        for j in range(i, max_index + 1):
            for k in range(j, max_index + 1):
                yield i, j, k


def suite_constant_term(max_index: int = 12) -> SuiteResult:
    fails, n = [], 0
    for t in _positive_triples(max_index):
        n += 1
        if s_poly(*t)[0]:
            fails.append(f"c0 of S{t} = {s_poly(*t)[0]}")
    return SuiteResult("constant-term", not fails, n, fails)


def suite_cubic(max_index: int = 12) -> SuiteResult:
    fails, n = [], 0
    for i in range(max_index + 1):
        for j in range(i, max_index + 1):
            for k in range(j, max_index + 1):
                for v in s_poly(i, j, k).variants():
                    n += 1
                    if v[3]:
                        fails.append(f"c3 of S{(i, j, k)} [{v.weight}] = {v[3]}")
    return SuiteResult("alpha-cubed", not fails, n, fails)


def suite_anchors(max_index: int = 12) -> SuiteResult:
    fails, n = [], 0

    def check(label: str, got, want) -> None:
        nonlocal n
        n += 1
        if got != want:
            fails.append(f"{label}: got {got}, expected {want}")

    check("c2 of S(1,1,1)", s_poly(1, 1, 1)[2], Fraction(8, 5))
    check("c1 of S(1,1,4)", s_poly(1, 1, 4)[1], Fraction(-64, 15))
    for k in range(9):
        check(f"c1 of S(1,1,{2 + 2 * k})", s_poly(1, 1, 2 + 2 * k)[1], s11_even_closed_form(k))
    for t in _positive_triples(min(max_index, 8)):
        a = 2 if sum(t) % 2 else 1
        check(f"closed form at {t}", s_poly(*t)[a], closed_form_f_limit(*t))
    check("Jordan at 0", s_jordan(0)[1], 0)
    for i in range(1, max_index + 1):
        check(f"Jordan alpha-coefficient at {i}", s_jordan(i)[1], jordan_closed_form(i))
        n += 2
        if not s_zero_index(i, 0, 0) or not s_zero_index(i, 1, 1):
            fails.append(f"zero-index sequence vanishes at i = {i}")
        check(f"S1 companion at {i}", s_zero_index(i, 1, 0), 0)
        check(f"S2 companion at {i}", s_zero_index(i, 0, 1), 0)
    check("S3_1", s_double_zero(1, 2), Fraction(-2, 3))
    for i in range(2, max_index + 1):
        for m in range(3):
            check(f"double-zero S{m + 1}_{i}", s_double_zero(i, m), 0)
    return SuiteResult("anchors", not fails, n, fails)


def run_all(max_index: int = 12, jobs: int = 1, perturb: bool = False) -> list[SuiteResult]:
    ode_max = 30 if max_index >= 12 else max(2 * max_index, 4)
    steps: list[Callable[[], SuiteResult]] = [
        lambda: suite_ode(ode_max, perturbed_family if perturb else None),
        lambda: suite_epsilon(15 if max_index >= 12 else max(max_index, 2)),
        lambda: suite_recurrence(max_index),
        lambda: suite_table(max_index, jobs),
        lambda: suite_constant_term(max_index),
        lambda: suite_cubic(max_index),
        lambda: suite_anchors(max_index),
    ]
    out = []
    for step in steps:
        t0 = time.perf_counter()
        r = step()
        r.seconds = time.perf_counter() - t0
        out.append(r)
    return out
