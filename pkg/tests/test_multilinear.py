from fractions import Fraction
from math import comb, factorial, prod

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import as_sympy, random_int_matrix
from keuler.guard import SizeGuardError, cell_dim_limit
from keuler.linalg import RMatrix
from keuler.multilinear import (
    ext_basis,
    ext_coproduct_matrix,
    ext_dim,
    ext_index,
    ext_power_matrix,
    ext_product_matrix,
    sym_basis,
    sym_coproduct_matrix,
    sym_dim,
    sym_index,
    sym_power_matrix,
    sym_product_matrix,
)


def test_basis_sizes():
    assert len(sym_basis(1, 5)) == 1
    assert len(sym_basis(2, 2)) == 3
    assert list(sym_basis(0, 0)) == [()] and len(sym_basis(0, 3)) == 0
    assert len(ext_basis(3, 2)) == 3
    assert len(ext_basis(2, 3)) == 0
    assert len(ext_basis(4, 0)) == 1


@pytest.mark.parametrize("n,h", [(1, 3), (2, 4), (3, 3), (4, 2)])
def test_sym_basis_is_complete_and_indexed(n, h):
    B = sym_basis(n, h)
    assert len(B) == sym_dim(n, h) == comb(n + h - 1, h)
    assert len(set(B)) == len(B)
    assert all(sum(a) == h for a in B)
    idx = sym_index(n, h)
    assert all(idx[a] == t for t, a in enumerate(B))


def test_bases_guarded_even_when_cached():
    sym_basis(5, 4), ext_basis(7, 3)
    with cell_dim_limit(10):
        with pytest.raises(SizeGuardError):
            sym_basis(5, 4)
        with pytest.raises(SizeGuardError):
            ext_basis(7, 3)
        assert len(ext_basis(7, 1)) == 7


def test_ext_index_roundtrip():
    for n in range(5):
        for k in range(n + 1):
            B = ext_basis(n, k)
            assert len(B) == ext_dim(n, k)
            assert all(ext_index(n, k)[J] == t for t, J in enumerate(B))


# ---- induced maps ---------------------------------------------------------


def _sym_oracle(M, h):
    """Expand prod_j (sum_i M_ij y_i)^alpha_j with sympy."""
    nt, ns = M.shape
    ys = sympy.symbols(f"y0:{max(nt, 1)}")
    lin = [sum(sympy.Rational(M[i, j].numerator, M[i, j].denominator) * ys[i] for i in range(nt)) for j in range(ns)]
    tgt = sym_basis(nt, h)
    cols = []
    for alpha in sym_basis(ns, h):
        poly = sympy.Poly(sympy.expand(prod((lin[j] ** e for j, e in enumerate(alpha)), start=sympy.Integer(1))), *ys[:nt]) if nt else None
        col = []
        for beta in tgt:
            c = poly.coeff_monomial(prod((ys[i] ** b for i, b in enumerate(beta)), start=sympy.Integer(1))) if nt else 1
            col.append(Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q)))
        cols.append(col)
    return RMatrix.from_columns(cols, len(tgt))


def test_sym_power_examples(rng):
    for n in range(4):
        for h in range(4):
            assert sym_power_matrix(RMatrix.identity(n), h) == RMatrix.identity(sym_dim(n, h))
    assert sym_power_matrix(RMatrix.from_rows([[2]]), 2).to_rows() == [[4]]
    for _ in range(5):
        M = random_int_matrix(rng, 2, 2)
        assert sym_power_matrix(M, 2) == _sym_oracle(M, 2)


@pytest.mark.parametrize("shape,h", [((3, 2), 3), ((2, 3), 2), ((3, 3), 2), ((1, 2), 4)])
def test_sym_power_oracle_rectangular(rng, shape, h):
    M = random_int_matrix(rng, *shape)
    assert sym_power_matrix(M, h) == _sym_oracle(M, h)


def test_ext_power_minors(rng):
    for _ in range(5):
        M = random_int_matrix(rng, 3, 3)
        L = ext_power_matrix(M, 2)
        S = as_sympy(M)
        for a, I in enumerate(ext_basis(3, 2)):
            for b, J in enumerate(ext_basis(3, 2)):
                assert L[a, b] == S.extract(list(I), list(J)).det()
    for n in range(1, 5):
        M = random_int_matrix(rng, n, n)
        assert ext_power_matrix(M, n).to_rows() == [[as_sympy(M).det()]]
        for k in range(n + 1):
            assert ext_power_matrix(RMatrix.identity(n), k) == RMatrix.identity(comb(n, k))


def test_ext_power_rectangular_minors(rng):
    M = random_int_matrix(rng, 4, 3)
    S = as_sympy(M)
    L = ext_power_matrix(M, 2)
    for a, I in enumerate(ext_basis(4, 2)):
        for b, J in enumerate(ext_basis(3, 2)):
            assert L[a, b] == S.extract(list(I), list(J)).det()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 3), st.integers(1, 3), st.integers(1, 3), st.integers(1, 3))
def test_functoriality(seed, h, a, b, c):
    import numpy as np

    rng = np.random.default_rng(seed)
    A = random_int_matrix(rng, a, b, -2, 2)
    B = random_int_matrix(rng, b, c, -2, 2)
    assert sym_power_matrix(A @ B, h) == sym_power_matrix(A, h) @ sym_power_matrix(B, h)
    assert ext_power_matrix(A @ B, h) == ext_power_matrix(A, h) @ ext_power_matrix(B, h)


# ---- products and coproducts ----------------------------------------------


def test_sym_product_examples():
    assert sym_product_matrix(3, 0, 2) == RMatrix.identity(sym_dim(3, 2))
    assert sym_product_matrix(1, 2, 3).to_rows() == [[1]]
    P = sym_product_matrix(2, 1, 1)
    xy = sym_index(2, 2)[(1, 1)]
    x, y = sym_index(2, 1)[(1, 0)], sym_index(2, 1)[(0, 1)]
    assert P[xy, x * 2 + y] == P[xy, y * 2 + x] == 1


def test_ext_product_examples():
    P = ext_product_matrix(2, 1, 1)
    assert P[0, 0 * 2 + 1] == 1 and P[0, 1 * 2 + 0] == -1
    assert P[0, 0] == 0 and P[0, 3] == 0
    Q = ext_product_matrix(3, 2, 1)
    I = ext_index(3, 2)[(0, 2)]
    assert Q[0, I * 3 + 1] == -1


def _sym_weights(n, h):
    return [Fraction(prod(factorial(e) for e in a)) for a in sym_basis(n, h)]


@pytest.mark.parametrize("n,h", [(1, 2), (2, 3), (3, 2), (3, 4)])
def test_sym_coproduct_is_weighted_transpose_of_product(n, h):
    """<s(x^alpha), x^beta (x) e_j> = <x^alpha, x^beta x_j> with <x^a, x^b> = a! delta."""
    s = sym_coproduct_matrix(n, h)
    sigma = sym_product_matrix(n, h - 1, 1)
    w_src = _sym_weights(n, h)
    w_tgt = [w for w in _sym_weights(n, h - 1) for _ in range(n)]  # V has weight 1
    lhs = RMatrix(s.nrows, s.ncols, {(r, c): w_tgt[r] * v for (r, c), v in s.items()})
    rhs = RMatrix(sigma.ncols, sigma.nrows, {(c, r): v * w_src[r] for (r, c), v in sigma.items()})
    assert lhs == rhs


def test_sym_coproduct_example():
    assert sym_coproduct_matrix(1, 2).to_rows() == [[2]]


@pytest.mark.parametrize("n,k", [(2, 1), (2, 2), (3, 2), (4, 3)])
def test_ext_coproduct_is_transpose_of_product(n, k):
    assert ext_coproduct_matrix(n, k) == ext_product_matrix(n, 1, k - 1).T


def test_ext_coproduct_examples():
    assert ext_coproduct_matrix(3, 1) == RMatrix.identity(3)
    l = ext_coproduct_matrix(2, 2)
    # e1^e2 -> e1 (x) e2 - e2 (x) e1 in the V (x) Lambda^1 layout
    assert l.column(0) == [0, 1, -1, 0]


def test_coproduct_degree_checks():
    with pytest.raises(ValueError):
        sym_coproduct_matrix(2, 0)
    with pytest.raises(ValueError):
        ext_coproduct_matrix(2, 0)
