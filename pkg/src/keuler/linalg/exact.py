"""Exact elimination over the rationals on sparse rows.

Every routine here is plain Gaussian elimination with ``Fraction`` entries.
It is the reference implementation; the modular kernels in
:mod:`keuler.linalg.modular` only decide ranks faster and always certify
their answer against this arithmetic's semantics.
"""

from fractions import Fraction

from keuler.linalg.rmatrix import RMatrix, as_rational

# above this many entries the rank is routed through the modular path
SMALL_ENTRIES = 4096


def _sub_scaled(target, src, f):
    """target -= f * src, in place, dropping zeros."""
    for j, v in src.items():
        w = target.get(j, 0) - f * v
        if w:
            target[j] = w
        else:
            target.pop(j, None)


def echelon(rows, reduced=True):
    """Sparse row echelon form.

    ``rows`` is an iterable of dicts ``col -> Fraction``.  Returns a dict
    ``pivot_col -> row`` where each row has coefficient 1 at its pivot and no
    entries left of it.  With ``reduced`` the pivot columns are also cleared
    from every other pivot row.
    """
    pivots = {}
    for src in rows:
        r = dict(src)
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                inv = 1 / Fraction(r[c])
                pivots[c] = {j: v * inv for j, v in r.items()}
                break
            _sub_scaled(r, p, r[c])
    if reduced:
        order = sorted(pivots)
        for idx in range(len(order) - 1, -1, -1):
            c = order[idx]
            prow = pivots[c]
            for c2 in order[:idx]:
                row2 = pivots[c2]
                f = row2.get(c)
                if f:
                    _sub_scaled(row2, prow, f)
    return pivots


def _row_dicts(M):
    return [dict(r) for r in M._rows.values()]


def rref(M):
    """Reduced row echelon form as ``(RMatrix, pivot_columns)``."""
    piv = echelon(_row_dicts(M), reduced=True)
    cols = sorted(piv)
    R = RMatrix._raw(M.nrows, M.ncols, {i: piv[c] for i, c in enumerate(cols)})
    return R, cols


def rank_fraction(M):
    """Rank by direct elimination (used for small matrices and as oracle)."""
    if M.nrows <= M.ncols:
        rows = _row_dicts(M)
    else:
        rows = _row_dicts(M.T)
    return len(echelon(rows, reduced=False))


def rank(M):
    """Exact rank of ``M`` over the rationals."""
    if M.is_zero():
        return 0
    if M.nrows * M.ncols <= SMALL_ENTRIES:
        return rank_fraction(M)
    from keuler.linalg.modular import exact_rank

    return exact_rank(M)


def kernel_basis(M):
    """Basis of ker(M) as a list of column vectors (lists of Fractions).

    Each vector carries a 1 at its own free column and zeros at the other free
    columns, so the list is independent by construction.
    """
    piv = echelon(_row_dicts(M), reduced=True)
    free = [j for j in range(M.ncols) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.ncols
        v[f] = Fraction(1)
        for c, row in piv.items():
            x = row.get(f)
            if x:
                v[c] = -x
        basis.append(v)
    return basis


def image_basis(M):
    """Independent columns of ``M`` spanning its column space."""
    piv = echelon(_row_dicts(M), reduced=False)
    return [M.column(c) for c in sorted(piv)]


def nullity(M):
    return M.ncols - rank(M)


def solve(M, b):
    """Return one rational ``x`` with ``M x = b``, or ``None`` if inconsistent."""
    if len(b) != M.nrows:
        raise ValueError("right-hand side has the wrong length")
    n = M.ncols
    rows = []
    for i in range(M.nrows):
        r = dict(M._rows.get(i, {}))
        bi = as_rational(b[i])
        if bi:
            r[n] = bi
        rows.append(r)
    piv = echelon(rows, reduced=True)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for c, row in piv.items():
        x[c] = row.get(n, Fraction(0))
    return x


def independent_columns(vectors, length):
    """Indices of a maximal independent subfamily, greedy in order."""
    pivots = {}
    keep = []
    for idx, vec in enumerate(vectors):
        r = {j: as_rational(v) for j, v in enumerate(vec) if v}
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                inv = 1 / r[c]
                pivots[c] = {j: v * inv for j, v in r.items()}
                keep.append(idx)
                break
            _sub_scaled(r, p, r[c])
    return keep


def complement_basis(vectors, length):
    """Standard basis vectors completing ``vectors`` (assumed independent)
    to a basis of Q^length; returned as indices of unit vectors."""
    piv = echelon([{j: as_rational(v) for j, v in enumerate(vec) if v} for vec in vectors], reduced=False)
    return [j for j in range(length) if j not in piv]


def inverse(M):
    """Inverse of a square invertible matrix."""
    if M.nrows != M.ncols:
        raise ValueError("inverse of a non-square matrix")
    n = M.nrows
    rows = []
    for i in range(n):
        r = dict(M._rows.get(i, {}))
        r[n + i] = Fraction(1)
        rows.append(r)
    piv = echelon(rows, reduced=True)
    if any(c not in piv for c in range(n)):
        raise ZeroDivisionError("matrix is singular")
    out = {}
    for c in range(n):
        inv_row = {j - n: v for j, v in piv[c].items() if j >= n}
        if inv_row:
            out[c] = inv_row
    return RMatrix._raw(n, n, out)
