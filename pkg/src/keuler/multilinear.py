"""Ordered bases of symmetric and exterior powers and the maps between them.

Conventions (frozen, so serialized matrices are reproducible):

* A basis vector of ``Sym^h`` of an ``n``-dimensional space is an exponent
  tuple ``alpha`` of length ``n`` summing to ``h``.  The order is
  descending lexicographic: ``x^2, xy, y^2`` for ``n = h = 2``.
* A basis vector of ``Lambda^k`` is a strictly increasing tuple of 0-based
  indices, ordered as ``itertools.combinations``.
* Tensor products ``A (x) B`` are indexed ``a * dim(B) + b``.
* ``s: Sym^h -> Sym^{h-1} (x) V`` is polarization,
  ``x^alpha -> sum_j alpha_j x^{alpha - e_j} (x) e_j``; it is the adjoint of
  the product ``Sym^{h-1} (x) V -> Sym^h`` for the pairing
  ``<x^alpha, x^beta> = alpha! delta``.
* ``l: Lambda^k -> V (x) Lambda^{k-1}`` is
  ``e_{j_0} ^ ... ^ e_{j_{k-1}} -> sum_t (-1)^t e_{j_t} (x) (omit j_t)``, the
  plain transpose of the wedge product ``V (x) Lambda^{k-1} -> Lambda^k``.
"""

from functools import lru_cache
from itertools import combinations
from math import comb

from keuler.guard import check_dim
from keuler.linalg.rmatrix import RMatrix


def sym_dim(n, h):
    """dim Sym^h of an n-dimensional space (1 for n = h = 0)."""
    if h < 0 or n < 0:
        return 0
    if n == 0:
        return 1 if h == 0 else 0
    return comb(n + h - 1, h)


def ext_dim(n, k):
    if k < 0 or k > n:
        return 0
    return comb(n, k)


def _sym_rec(n, h):
    if n == 0:
        if h == 0:
            yield ()
        return
    if n == 1:
        yield (h,)
        return
    for first in range(h, -1, -1):
        for rest in _sym_rec(n - 1, h - first):
            yield (first,) + rest


def sym_basis(n, h):
    """Exponent tuples of Sym^h in descending lexicographic order."""
    if n < 0 or h < 0:
        raise ValueError("n and h must be nonnegative")
    # the guard sits outside the cache so a lowered limit still applies to cached bases
    check_dim(sym_dim(n, h), f"Sym^{h} of a {n}-dimensional space")
    return _sym_basis(n, h)


@lru_cache(maxsize=None)
def _sym_basis(n, h):
    return tuple(_sym_rec(n, h))


@lru_cache(maxsize=None)
def sym_index(n, h):
    return {a: i for i, a in enumerate(sym_basis(n, h))}


def ext_basis(n, k):
    """Increasing 0-based index tuples of Lambda^k."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    check_dim(comb(n, k), f"Lambda^{k} of a {n}-dimensional space")
    return _ext_basis(n, k)


@lru_cache(maxsize=None)
def _ext_basis(n, k):
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def ext_index(n, k):
    return {J: i for i, J in enumerate(ext_basis(n, k))}


def add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


def unit_exp(n, j):
    e = [0] * n
    e[j] = 1
    return tuple(e)


def wedge_sign_insert(J, i):
    """Sign and result of e_i ^ e_J (e_i placed first, then sorted); (0, None) if i in J."""
    if i in J:
        return 0, None
    below = sum(1 for x in J if x < i)
    new = J[:below] + (i,) + J[below:]
    return (-1 if below % 2 else 1), new


def shuffle_sign(I, J):
    """Sign of the permutation sorting the concatenation I + J (both increasing, disjoint)."""
    inv = 0
    for a in I:
        for b in J:
            if a > b:
                inv += 1
    return -1 if inv % 2 else 1


def _poly_mul(p, q):
    out = {}
    for a, x in p.items():
        for b, y in q.items():
            c = add_exp(a, b)
            v = out.get(c, 0) + x * y
            if v:
                out[c] = v
            else:
                out.pop(c, None)
    return out


def sym_power_matrix(M, h):
    """Matrix of Sym^h(M): Sym^h(source) -> Sym^h(target) in the canonical bases."""
    nt, ns = M.shape
    src = sym_basis(ns, h)
    tgt_index = sym_index(nt, h)
    images = [{unit_exp(nt, i): v for i, v in enumerate(M.column(j)) if v} for j in range(ns)]
    zero = tuple([0] * nt)
    powers = {}

    def power(j, e):
        key = (j, e)
        if key not in powers:
            powers[key] = {zero: 1} if e == 0 else _poly_mul(power(j, e - 1), images[j])
        return powers[key]

    entries = {}
    for col, alpha in enumerate(src):
        poly = {zero: 1}
        for j, e in enumerate(alpha):
            if e:
                poly = _poly_mul(poly, power(j, e))
        for mono, v in poly.items():
            entries[(tgt_index[mono], col)] = v
    return RMatrix(len(tgt_index), len(src), entries)


def ext_power_matrix(M, k):
    """Matrix of Lambda^k(M) in the canonical bases (entries are k x k minors)."""
    nt, ns = M.shape
    src = ext_basis(ns, k)
    tgt_index = ext_index(nt, k)
    cols = [[(i, v) for i, v in enumerate(M.column(j)) if v] for j in range(ns)]
    entries = {}
    for c, J in enumerate(src):
        acc = {(): 1}
        for j in J:
            nxt = {}
            for I, x in acc.items():
                for i, v in cols[j]:
                    if i in I:
                        continue
                    # e_I ^ e_i: move e_i left past the larger entries of I
                    above = sum(1 for a in I if a > i)
                    sgn = -1 if above % 2 else 1
                    new = tuple(sorted(I + (i,)))
                    w = nxt.get(new, 0) + sgn * x * v
                    if w:
                        nxt[new] = w
                    else:
                        nxt.pop(new, None)
            acc = nxt
        for I, v in acc.items():
            entries[(tgt_index[I], c)] = v
    return RMatrix(len(tgt_index), len(src), entries)


def sym_product_matrix(n, h, m):
    """sigma: Sym^h (x) Sym^m -> Sym^{h+m}, (mu, nu) -> x^{mu+nu} with coefficient 1."""
    A, B = sym_basis(n, h), sym_basis(n, m)
    tgt = sym_index(n, h + m)
    entries = {}
    for a, mu in enumerate(A):
        for b, nu in enumerate(B):
            entries[(tgt[add_exp(mu, nu)], a * len(B) + b)] = 1
    return RMatrix(len(tgt), len(A) * len(B), entries)


def ext_product_matrix(n, h, k):
    """lambda: Lambda^h (x) Lambda^k -> Lambda^{h+k} with the shuffle sign."""
    A, B = ext_basis(n, h), ext_basis(n, k)
    tgt = ext_index(n, h + k)
    entries = {}
    for a, I in enumerate(A):
        for b, J in enumerate(B):
            if set(I) & set(J):
                continue
            entries[(tgt[tuple(sorted(I + J))], a * len(B) + b)] = shuffle_sign(I, J)
    return RMatrix(len(tgt), len(A) * len(B), entries)


def sym_coproduct_matrix(n, h):
    """s: Sym^h -> Sym^{h-1} (x) V (polarization, with multiplicities)."""
    if h < 1:
        raise ValueError("coproduct needs h >= 1")
    src = sym_basis(n, h)
    tgt = sym_index(n, h - 1)
    entries = {}
    for c, alpha in enumerate(src):
        for j, e in enumerate(alpha):
            if e:
                beta = list(alpha)
                beta[j] -= 1
                entries[(tgt[tuple(beta)] * n + j, c)] = e
    return RMatrix(len(tgt) * n, len(src), entries)


def ext_coproduct_matrix(n, k):
    """l: Lambda^k -> V (x) Lambda^{k-1}, alternating expansion."""
    if k < 1:
        raise ValueError("coproduct needs k >= 1")
    src = ext_basis(n, k)
    tgt = ext_index(n, k - 1)
    width = len(tgt)
    entries = {}
    for c, J in enumerate(src):
        for t, j in enumerate(J):
            rest = J[:t] + J[t + 1:]
            entries[(j * width + tgt[rest], c)] = -1 if t % 2 else 1
    return RMatrix(n * width, len(src), entries)


def cell_dim(rank0, rank1, h, k):
    """dim Sym^h F0 (x) Lambda^k F1."""
    return sym_dim(rank0, h) * ext_dim(rank1, k)
