import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_int_matrix
from keuler.core.forms import random_integer_map
from keuler.koszul import (
    ChainComplexSlices,
    ComplexError,
    TwoTermComplex,
    cohomology_dims,
    ext_complex,
    prop26_expected,
    sym_complex,
    sym_expected,
)
from keuler.linalg import RMatrix


def test_two_term_basics():
    F = TwoTermComplex(2, 3, RMatrix.from_rows([[1, 0], [0, 0], [0, 0]]))
    assert (F.rank_d, F.h1, F.h0) == (1, 1, 2)
    assert F.dual().d == F.d.T
    G = F.direct_sum(TwoTermComplex.zero(1, 1))
    assert (G.rank1, G.rank0, G.h1, G.h0) == (3, 4, 2, 3)
    with pytest.raises(ValueError):
        TwoTermComplex(2, 2, RMatrix.zeros(3, 2))


def test_ext_complex_examples():
    C = ext_complex(TwoTermComplex.zero(2, 0), 2)
    assert C.dims == [1, 0, 0]
    assert all(D.is_zero() for D in C.differentials)
    C = ext_complex(TwoTermComplex(1, 1, RMatrix.identity(1)), 1)
    assert C.dims == [1, 1]
    assert C.differentials[0].to_rows() == [[1]]
    assert cohomology_dims(C) == [0, 0]


def test_sym_complex_examples():
    n = 3
    C = sym_complex(TwoTermComplex.zero(0, n), 2)
    # V0 = 0: only Lambda^2 V1 survives
    assert C.dims == [0, 0, 3]
    C = sym_complex(TwoTermComplex(1, 1, RMatrix.identity(1)), 2)
    assert C.dims == [1, 1, 0]
    assert cohomology_dims(C) == [0, 0, 0]
    C = sym_complex(TwoTermComplex.zero(n, 0), 1)
    assert C.dims == [n, 0]


def test_exterior_expected_examples():
    assert prop26_expected(0, 3, 2) == [3, 0, 0]
    assert prop26_expected(1, 0, 2) == [0, 0, 1]
    assert prop26_expected(2, 2, 2) == [1, 4, 3]
    W = TwoTermComplex.zero(2, 2)
    assert cohomology_dims(ext_complex(W, 2)) == [1, 4, 3]


def test_cohomology_dims_plain():
    C = ChainComplexSlices([0, 1], [2, 3], [RMatrix.zeros(3, 2)])
    assert cohomology_dims(C) == [2, 3]
    C = ChainComplexSlices([0, 1], [2, 2], [RMatrix.identity(2)])
    assert cohomology_dims(C) == [0, 0]


def test_check_detects_non_complex():
    C = ChainComplexSlices([0, 1, 2], [1, 1, 1], [RMatrix.identity(1), RMatrix.identity(1)])
    with pytest.raises(ComplexError) as exc:
        C.check()
    assert exc.value.position == 1


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 3), st.integers(0, 3), st.integers(0, 4))
def test_exterior_power_cohomology_random(seed, r1, r0, N):
    rng = np.random.default_rng(seed)
    r = int(rng.integers(0, min(r0, r1) + 1))
    W = TwoTermComplex(r1, r0, random_integer_map(rng, r0, r1, r))
    C = ext_complex(W, N)
    C.check()
    assert cohomology_dims(C) == prop26_expected(W.h0, W.h1, N)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 3), st.integers(0, 3), st.integers(0, 4))
def test_sym_complex_matches_dual_statement(seed, n0, n1, N):
    rng = np.random.default_rng(seed)
    r = int(rng.integers(0, min(n0, n1) + 1))
    V = TwoTermComplex(n0, n1, random_integer_map(rng, n1, n0, r))
    C = sym_complex(V, N)
    C.check()
    assert cohomology_dims(C) == sym_expected(V, N)


def test_sym_complex_dual_of_ext(rng):
    """Sym^N(V) and Lambda^N of the dual data have mirrored cohomology."""
    for _ in range(10):
        d = random_int_matrix(rng, 3, 2, -1, 1)
        V = TwoTermComplex(2, 3, d)
        W = V.dual()
        for N in range(4):
            C, E = sym_complex(V, N), ext_complex(W, N)
            # position k of Sym^N(V) is dual to position N - k of Lambda^N(V^dual)
            assert C.dims == E.dims[::-1]
            a, b = cohomology_dims(C), cohomology_dims(E)
            assert a == b[::-1]
            assert a == sym_expected(V, N)
