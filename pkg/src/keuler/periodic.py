"""Parity regrouping of L into a 2-periodic complex and its virtual rank.

W+ collects the cells with even exterior degree and W- the odd ones; d+ and
d- are the restrictions of d~ + a~.  The Euler-characteristic map sends W to
dim H+ - dim H-, which we evaluate on the merged total complex
(+)_i K_i^n, truncated below n0 where all cohomology lives.
"""

from dataclasses import dataclass

from keuler.core.bicomplex import cells, n_min, total_differential
from keuler.core.euler import DEFAULT_MARGIN, VanishingError, n0_bound
from keuler.core.forms import DegenerateFormError, NotClosedError, check_closed, is_nondegenerate
from keuler.guard import check_dim
from keuler.linalg import RMatrix, chain_ranks


@dataclass
class TwoPeriodicSlice:
    n_max: int
    plus_cells: list  # [(i, n, h, k, dim)] with k even
    minus_cells: list  # same with k odd
    d_plus: RMatrix  # W+ -> W-
    d_minus: RMatrix  # W- -> W+

    @property
    def plus_dim(self):
        return self.d_plus.ncols

    @property
    def minus_dim(self):
        return self.d_minus.ncols

    def check(self):
        return (self.d_minus @ self.d_plus).is_zero() and (self.d_plus @ self.d_minus).is_zero()

    def cell_multiset(self):
        return sorted((h, k, dim) for (_, _, h, k, dim) in self.plus_cells + self.minus_cells)


def _window_cells(inst, n_max):
    F, m = inst.F, inst.m
    out = []
    for i in range(m + 1):
        for n in range(n_min(F.rank0, F.rank1, m, i), n_max + 1):
            for h, k, dim in cells(F.rank0, F.rank1, m, i, n):
                out.append((i, n, h, k, dim))
    return out


def periodic_from_instance(inst, n_max=None):
    """Assemble d+ and d- on all L cells with total degree n <= n_max (all i)."""
    if not check_closed(inst):
        raise NotClosedError("periodic complex needs a closed form")
    if n_max is None:
        n_max = n0_bound(inst.F, inst.m) + DEFAULT_MARGIN
    allc = _window_cells(inst, n_max)
    plus = [c for c in allc if c[3] % 2 == 0]
    minus = [c for c in allc if c[3] % 2 == 1]
    check_dim(sum(c[4] for c in plus), "W+ window")
    check_dim(sum(c[4] for c in minus), "W- window")
    return TwoPeriodicSlice(n_max, plus, minus, _parity_map(inst, plus, minus, n_max), _parity_map(inst, minus, plus, n_max))


def _parity_map(inst, src, tgt, n_max):
    """Restriction of D from the src cells to the tgt cells (cells beyond the window dropped)."""
    soff, toff = _offsets(src), _offsets(tgt)
    spos = {(c[0], c[1]): [] for c in src}
    for t, c in enumerate(src):
        spos[(c[0], c[1])].append(t)
    tpos = {}
    for t, c in enumerate(tgt):
        tpos.setdefault((c[0], c[1]), []).append(t)
    blocks = {}
    for (i, n), s_idx in spos.items():
        t_idx = tpos.get((i, n + 1))
        if n + 1 > n_max or not t_idx:
            continue
        scells = [src[s][2:] for s in s_idx]
        tcells = [tgt[t][2:] for t in t_idx]
        D = total_differential(inst, i, n, scells, tcells)
        # cut D into per-cell blocks and place them
        ro = 0
        for t in t_idx:
            co = 0
            for s in s_idx:
                blk = D.submatrix(range(ro, ro + tgt[t][4]), range(co, co + src[s][4]))
                if not blk.is_zero():
                    blocks[(t, s)] = blk
                co += src[s][4]
            ro += tgt[t][4]
    return RMatrix.assemble(toff, soff, toff[-1], soff[-1], blocks)


def _offsets(cl):
    off = [0]
    for c in cl:
        off.append(off[-1] + c[4])
    return off


def merged_total_complex(inst, n_max):
    """(+)_i K_i^n with block-diagonal D, for n from the lowest degree to n_max + 1."""
    F, m = inst.F, inst.m
    start = min(n_min(F.rank0, F.rank1, m, i) for i in range(m + 1))
    start = min(start, n_max + 1)
    dims, maps = [], []
    cell_cache = {}
    for n in range(start, n_max + 2):
        cell_cache[n] = [cells(F.rank0, F.rank1, m, i, n) for i in range(m + 1)]
        dims.append(check_dim(sum(c[2] for cl in cell_cache[n] for c in cl), f"merged degree {n}"))
    for n in range(start, n_max + 1):
        blocks = [total_differential(inst, i, n, cell_cache[n][i], cell_cache[n + 1][i]) for i in range(m + 1)]
        maps.append(RMatrix.diagonal_blocks(blocks))
    return start, dims, maps


def periodic_cohomology(inst, n_max=None):
    """{n: dim H^n((+)_i K_i)} on the window."""
    if n_max is None:
        n_max = n0_bound(inst.F, inst.m) + DEFAULT_MARGIN
    start, dims, maps = merged_total_complex(inst, n_max)
    rk = chain_ranks(maps, dims, bounded_below=True, bounded_above=False)
    H = {}
    for t in range(len(maps)):
        H[start + t] = dims[t] - (rk[t - 1] if t else 0) - rk[t]
    return H


def periodic_virtual_rank(inst, margin=DEFAULT_MARGIN):
    """dim H+ - dim H- summed over all i (even minus odd total degree below n0)."""
    if not check_closed(inst):
        raise NotClosedError("periodic virtual rank needs a closed form")
    if not is_nondegenerate(inst):
        raise DegenerateFormError("the induced linear system has base points")
    n0 = n0_bound(inst.F, inst.m)
    H = periodic_cohomology(inst, n0 + margin)
    for n in range(n0, n0 + margin + 1):
        if H.get(n, 0):
            raise VanishingError(-1, n, H[n])
    plus = sum(h for n, h in H.items() if n < n0 and n % 2 == 0)
    minus = sum(h for n, h in H.items() if n < n0 and n % 2 == 1)
    return plus - minus
