"""The bound n0, total-complex cohomology and the K-theory Euler class over a point."""

from dataclasses import dataclass, field

from keuler.core.bicomplex import total_complex
from keuler.core.forms import DegenerateFormError, NotClosedError, check_closed, is_nondegenerate
from keuler.linalg import chain_ranks
from keuler.multilinear import sym_dim

DEFAULT_MARGIN = 2


class VanishingError(RuntimeError):
    """Nonzero cohomology at or beyond n0."""

    def __init__(self, i, n, dim):
        self.i, self.n, self.dim = i, n, dim
        super().__init__(f"H^{n}(K_{i}) has dimension {dim} at or beyond n0")


def sign_of(n):
    """(-1)^n as an int, also for negative n."""
    return -1 if n % 2 else 1


def n0_bound(F, m):
    """ceil((4m + 2 dim Sym^m F0) / (m + 1))."""
    if m < 1:
        raise ValueError("m must be at least 1")
    num = 4 * m + 2 * sym_dim(F.rank0, m)
    return -(-num // (m + 1))


def _cohomology(tc):
    ns = list(range(tc.n_start, tc.n_max + 1))
    maps = [tc.D[n] for n in ns]
    dims = [tc.dims[n] for n in ns] + [tc.dims[tc.n_max + 1]]
    ranks = chain_ranks(maps, dims, bounded_below=True, bounded_above=False)
    rk = dict(zip(ns, ranks))
    H = {}
    for n in ns:
        H[n] = tc.dims[n] - rk.get(n - 1, 0) - rk[n]
    return H, rk


def cohomology_of_total(inst, i, n_max=None, strict=True):
    """dims of H^n(K_i) for n <= n_max; strict mode refuses nonvanishing at n >= n0."""
    n0 = n0_bound(inst.F, inst.m)
    if n_max is None:
        n_max = n0 + DEFAULT_MARGIN
    tc = total_complex(inst, i, n_max)
    H, _ = _cohomology(tc)
    if strict:
        for n in range(n0, n_max + 1):
            if H.get(n, 0):
                raise VanishingError(i, n, H[n])
    return H


@dataclass
class PerIRecord:
    i: int
    dims: dict  # n -> dim K_i^n for n < n0
    cells: dict  # n -> [(h, k, dim)] for n < n0
    residue_rank: int  # rank of D_{n0-1}, i.e. dim of the image I_i in K_i^{n0}
    truncated: int
    total: int
    cohomology: dict  # n -> dim H^n(K_i) for n in the window
    euler_characteristic: int
    vanishing_ok: bool
    consistent: bool


@dataclass
class EulerClass:
    n0: int
    n_max: int
    m: int
    per_i: list
    formal_terms: list  # [(h, k, coefficient)] of [Sym^h F0 (x) Lambda^k F1]
    residues: list  # [(i, sign, rank)]
    virtual_rank: int
    canonical: bool = True
    notes: list = field(default_factory=list)

    def cohomology_total(self):
        return sum(r.euler_characteristic for r in self.per_i)


def ke_class(inst, force=False, margin=DEFAULT_MARGIN):
    """Ke(F, a) over a point: per-i truncated sums, residue ranks and the virtual rank.

    ``force`` skips the nondegeneracy requirement and the vanishing check and
    labels the result non-canonical.
    """
    if not check_closed(inst):
        raise NotClosedError("Ke needs a closed form")
    canonical = True
    notes = []
    if not is_nondegenerate(inst):
        if not force:
            raise DegenerateFormError("the induced linear system has base points")
        canonical = False
        notes.append("degenerate form: truncated data computed on request, not a canonical class")
    F, m = inst.F, inst.m
    n0 = n0_bound(F, m)
    n_max = n0 + margin
    per_i = []
    coeffs = {}
    residues = []
    for i in range(m + 1):
        tc = total_complex(inst, i, n_max)
        H, rk = _cohomology(tc)
        low = [n for n in range(tc.n_start, n0)]
        dims = {n: tc.dims[n] for n in low}
        trunc = sum(sign_of(n) * d for n, d in dims.items())
        residue = rk.get(n0 - 1, 0)
        sign = sign_of(n0)
        total = trunc + sign * residue
        chi = sum(sign_of(n) * h for n, h in H.items())
        vanish = all(H.get(n, 0) == 0 for n in range(n0, n_max + 1))
        if not vanish and canonical:
            bad = next(n for n in range(n0, n_max + 1) if H.get(n, 0))
            raise VanishingError(i, bad, H[bad])
        consistent = total == sum(sign_of(n) * h for n, h in H.items() if n < n0)
        if canonical and not (consistent and total == chi):
            raise AssertionError(f"truncated sum and cohomology disagree for i={i}")
        for n in low:
            for h, k, _ in tc.cells[n]:
                coeffs[(h, k)] = coeffs.get((h, k), 0) + sign_of(n)
        residues.append((i, sign, residue))
        per_i.append(
            PerIRecord(
                i=i,
                dims=dims,
                cells={n: tc.cells[n] for n in low},
                residue_rank=residue,
                truncated=trunc,
                total=total,
                cohomology=H,
                euler_characteristic=chi,
                vanishing_ok=vanish,
                consistent=consistent,
            )
        )
    terms = sorted((h, k, c) for (h, k), c in coeffs.items() if c)
    virtual = sum(r.total for r in per_i)
    return EulerClass(n0, n_max, m, per_i, terms, residues, virtual, canonical, notes)
