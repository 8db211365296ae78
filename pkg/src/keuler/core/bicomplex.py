"""The double complex L^{h,k} = Sym^h F0 (x) Lambda^k F1 and its total complexes K_i.

Bidegree bookkeeping: K_i^{p,q} = L^{h,k} with h = p + m q - i and
k = q - p, so a cell of K_i^n (n = p + q) is fixed by its exterior degree k
(k = n mod 2).  d~ moves (h, k) to (h+1, k-1) and a~ moves it to
(h+m, k+1); both raise n by one and keep i.
"""

from dataclasses import dataclass, field

from keuler.guard import check_dim
from keuler.koszul import ChainComplexSlices, contraction_matrix
from keuler.linalg import RMatrix
from keuler.multilinear import (
    add_exp,
    cell_dim,
    ext_basis,
    ext_index,
    sym_basis,
    sym_index,
    wedge_sign_insert,
)


def dtilde_matrix(F, h, k):
    """d~: L^{h,k} -> L^{h+1,k-1}."""
    return contraction_matrix(F.d, h, k)


def atilde_matrix(inst, h, k):
    """a~: L^{h,k} -> L^{h+m,k+1}, left multiplication by a(1)."""
    F, m = inst.F, inst.m
    return _multiplication_matrix(F.rank0, F.rank1, inst.a.coefficients.items(), m, 1, h, k, _insert_one)


def htilde_matrix(F, h_form, h, k):
    """h~: L^{h,k} -> L^{h+m-1,k+2}, left multiplication by an element of Sym^{m-1} F0 (x) Lambda^2 F1.

    ``h_form`` is a :class:`HomotopyForm`.
    """
    return _multiplication_matrix(
        F.rank0, F.rank1, h_form.coefficients.items(), h_form.m - 1, 2, h, k, _insert_two
    )


def _insert_one(J, key):
    return wedge_sign_insert(J, key)


def _insert_two(J, key):
    j1, j2 = key
    s2, J2 = wedge_sign_insert(J, j2)
    if not s2:
        return 0, None
    s1, J1 = wedge_sign_insert(J2, j1)
    if not s1:
        return 0, None
    return s1 * s2, J1


def _integral(c):
    return c.numerator if c.denominator == 1 else c


def _multiplication_matrix(rank0, rank1, terms, sdeg, edeg, h, k, insert):
    src_s = sym_basis(rank0, h)
    src_e = ext_basis(rank1, k)
    tgt_s = sym_index(rank0, h + sdeg)
    tgt_e = ext_index(rank1, k + edeg)
    ns, ne, width = len(src_s), len(src_e), len(tgt_e)
    entries = {}
    terms = list(terms)
    if terms and len(tgt_s) and width:
        # index maps shared by all terms with the same monomial / wedge factor
        smaps, emaps = {}, {}
        for (beta, key), _ in terms:
            if beta not in smaps:
                smaps[beta] = [tgt_s[add_exp(alpha, beta)] * width for alpha in src_s]
            if key not in emaps:
                em = []
                for b, J in enumerate(src_e):
                    sgn, new = insert(J, key)
                    if sgn:
                        em.append((b, sgn, tgt_e[new]))
                emaps[key] = em
        for (beta, key), c in terms:
            c = _integral(c)
            sm, em = smaps[beta], emaps[key]
            for a in range(ns):
                rbase, cbase = sm[a], a * ne
                for b, sgn, ei in em:
                    pos = (rbase + ei, cbase + b)
                    v = sgn * c
                    if pos in entries:
                        entries[pos] += v
                    else:
                        entries[pos] = v
    return RMatrix.from_accumulated(len(tgt_s) * width, ns * ne, entries)


@dataclass(frozen=True)
class HomotopyForm:
    """An element of Sym^{m-1} F0 (x) Lambda^2 F1 as {(alpha, (j1, j2)): Fraction}, j1 < j2."""

    m: int
    rank0: int
    rank1: int
    coefficients: dict = field(default_factory=dict)

    def vector(self):
        si = sym_index(self.rank0, self.m - 1)
        ei = ext_index(self.rank1, 2)
        v = [0] * (len(si) * len(ei))
        for (alpha, J), c in self.coefficients.items():
            v[si[tuple(alpha)] * len(ei) + ei[tuple(J)]] = c
        return v


def cell_h(m, i, n, k):
    """Symmetric degree of the K_i^n cell with exterior degree k (None if off the lattice)."""
    if (n - k) % 2:
        return None
    p = (n - k) // 2
    q = p + k
    return p + m * q - i


def cells(rank0, rank1, m, i, n):
    """Nonzero cells (h, k, dim) of K_i^n, ordered by k."""
    out = []
    for k in range(n % 2, rank1 + 1, 2):
        h = cell_h(m, i, n, k)
        if h is None or h < 0:
            continue
        dim = cell_dim(rank0, rank1, h, k)
        if dim:
            out.append((h, k, dim))
    return out


def n_min(rank0, rank1, m, i):
    """Lowest total degree with h >= 0 for some admissible k (a lower bound for nonzero K_i^n)."""
    best = None
    for k in range(rank1 + 1):
        # (m+1) p + m k - i >= 0
        p = -((-(i - m * k)) // (m + 1))
        n = 2 * p + k
        best = n if best is None else min(best, n)
    return best


def total_differential(inst, i, n, src_cells=None, tgt_cells=None):
    """D_n = d~ + a~ : K_i^n -> K_i^{n+1} assembled over cells."""
    F, m = inst.F, inst.m
    if src_cells is None:
        src_cells = cells(F.rank0, F.rank1, m, i, n)
    if tgt_cells is None:
        tgt_cells = cells(F.rank0, F.rank1, m, i, n + 1)
    col_off = _offsets(src_cells)
    row_off = _offsets(tgt_cells)
    tpos = {(h, k): t for t, (h, k, _) in enumerate(tgt_cells)}
    blocks = {}
    for s, (h, k, _) in enumerate(src_cells):
        t = tpos.get((h + 1, k - 1))
        if t is not None and not F.d.is_zero():
            blocks[(t, s)] = dtilde_matrix(F, h, k)
        t = tpos.get((h + m, k + 1))
        if t is not None and not inst.a.is_zero():
            B = atilde_matrix(inst, h, k)
            blocks[(t, s)] = blocks[(t, s)] + B if (t, s) in blocks else B
    nrows, ncols = row_off[-1], col_off[-1]
    check_dim(nrows, f"K_{i}^{n + 1}")
    return RMatrix.assemble(row_off, col_off, nrows, ncols, blocks)


def _offsets(cell_list):
    off = [0]
    for c in cell_list:
        off.append(off[-1] + c[2])
    return off


def block_diagonal_on_cells(cell_list, block_fn):
    """Degree-preserving operator given per cell as block_fn(h, k) -> {(h', k'): RMatrix}."""
    off = _offsets(cell_list)
    pos = {(h, k): t for t, (h, k, _) in enumerate(cell_list)}
    blocks = {}
    for s, (h, k, _) in enumerate(cell_list):
        for key, B in block_fn(h, k).items():
            t = pos.get(key)
            if t is not None:
                blocks[(t, s)] = B
    return RMatrix.assemble(off, off, off[-1], off[-1], blocks)


@dataclass
class TotalComplexSlice:
    """K_i^n for n_start <= n <= n_max + 1 with D_n for n_start <= n <= n_max."""

    i: int
    n_start: int
    n_max: int
    cells: dict
    dims: dict
    D: dict

    def as_chain(self):
        ns = list(range(self.n_start, self.n_max + 2))
        return ChainComplexSlices(
            ns,
            [self.dims[n] for n in ns],
            [self.D[n] for n in ns[:-1]],
            bounded_below=True,
            bounded_above=False,
        )

    def check(self):
        return self.as_chain().check()


def total_complex(inst, i, n_max):
    F, m = inst.F, inst.m
    if not 0 <= i <= m:
        raise ValueError(f"i must lie in 0..{m}")
    start = min(n_min(F.rank0, F.rank1, m, i), n_max + 1)
    cell_map, dims, D = {}, {}, {}
    for n in range(start, n_max + 2):
        cell_map[n] = cells(F.rank0, F.rank1, m, i, n)
        dims[n] = check_dim(sum(c[2] for c in cell_map[n]), f"K_{i}^{n}")
    for n in range(start, n_max + 1):
        D[n] = total_differential(inst, i, n, cell_map[n], cell_map[n + 1])
    return TotalComplexSlice(i, start, n_max, cell_map, dims, D)
