from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from keuler.linalg import RMatrix


def small_rationals():
    return st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def rmatrices(draw, max_rows=5, max_cols=5, min_rows=0, min_cols=0):
    r = draw(st.integers(min_rows, max_rows))
    c = draw(st.integers(min_cols, max_cols))
    rows = draw(st.lists(st.lists(small_rationals(), min_size=c, max_size=c), min_size=r, max_size=r))
    return RMatrix.from_rows(rows, ncols=c)


def random_int_matrix(rng, rows, cols, lo=-3, hi=3):
    return RMatrix.from_rows(rng.integers(lo, hi + 1, size=(rows, cols)).tolist(), ncols=cols)


def random_invertible(rng, n):
    while True:
        M = random_int_matrix(rng, n, n, -2, 2)
        from keuler.linalg import rank

        if rank(M) == n:
            return M


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def as_sympy(M):
    import sympy

    return sympy.Matrix(M.nrows, M.ncols, lambda i, j: sympy.Rational(M[i, j].numerator, M[i, j].denominator))


def frac(x):
    return Fraction(x)


# ---- acceptance summary ----------------------------------------------------

_CRITERIA = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        if hasattr(rep, "wasxfail"):
            status = "FAIL (expected, see ledger)"
        elif rep.skipped:
            status = "SKIP"
        else:
            status = "PASS" if rep.passed else "FAIL"
        _CRITERIA.append((str(mark.args[0]), mark.args[1], status, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    key = lambda c: (int("".join(ch for ch in c[0] if ch.isdigit())), c[0])
    for num, title, status, dur in sorted(_CRITERIA, key=key):
        tr.write_line(f"criterion {num:<3} {status:<28} {dur:7.2f}s  {title}")
