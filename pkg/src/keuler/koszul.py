"""Two-term complexes and their symmetric/exterior power (Koszul) complexes.

Everything is indexed cohomologically: position ``t`` maps to ``t + 1``.
"""

from dataclasses import dataclass, field
from functools import cached_property

from keuler.linalg import RMatrix, chain_ranks, rank
from keuler.multilinear import (
    ext_basis,
    ext_dim,
    ext_index,
    sym_basis,
    sym_dim,
    sym_index,
    wedge_sign_insert,
)


class ComplexError(ValueError):
    """Consecutive differentials fail to compose to zero."""

    def __init__(self, position, message=None):
        self.position = position
        super().__init__(message or f"D∘D != 0 at position {position}")


@dataclass(frozen=True)
class TwoTermComplex:
    """A map d: F1 -> F0, viewed as a complex in degrees 1 and 0.

    When the same record stands for a cohomological complex V^0 -> V^1, the
    source (``rank1`` columns) plays V^0 and the target plays V^1.
    """

    rank1: int
    rank0: int
    d: RMatrix = field(default=None)

    def __post_init__(self):
        if self.rank0 < 0 or self.rank1 < 0:
            raise ValueError("ranks must be nonnegative")
        if self.d is None:
            object.__setattr__(self, "d", RMatrix(self.rank0, self.rank1))
        if self.d.shape != (self.rank0, self.rank1):
            raise ValueError(f"d has shape {self.d.shape}, expected {(self.rank0, self.rank1)}")

    @classmethod
    def zero(cls, rank1, rank0):
        return cls(rank1, rank0, RMatrix(rank0, rank1))

    @cached_property
    def rank_d(self):
        return rank(self.d)

    @property
    def h1(self):
        return self.rank1 - self.rank_d

    @property
    def h0(self):
        return self.rank0 - self.rank_d

    def dual(self):
        """The transposed map F0^* -> F1^*."""
        return TwoTermComplex(self.rank0, self.rank1, self.d.T)

    def direct_sum(self, other):
        d = RMatrix.diagonal_blocks([self.d, other.d])
        return TwoTermComplex(self.rank1 + other.rank1, self.rank0 + other.rank0, d)


@dataclass
class ChainComplexSlices:
    """A finite window of a cochain complex.

    ``differentials[t]`` maps position ``positions[t]`` to ``positions[t] + 1``.
    ``bounded_below`` / ``bounded_above`` say whether the complex is zero just
    outside the window.
    """

    positions: list
    dims: list
    differentials: list
    bounded_below: bool = True
    bounded_above: bool = True

    def check(self):
        for t in range(len(self.differentials) - 1):
            comp = self.differentials[t + 1] @ self.differentials[t]
            if not comp.is_zero():
                raise ComplexError(self.positions[t + 1])
        return True

    def ranks(self):
        return chain_ranks(self.differentials, self.dims, self.bounded_below, self.bounded_above)


def cohomology_dims(C, check=True):
    """dim H at every position of the window (the last one only if bounded above)."""
    if check:
        C.check()
    rk = C.ranks()
    out = []
    L = len(C.differentials)
    for t in range(len(C.dims)):
        r_in = rk[t - 1] if t > 0 else 0
        r_out = rk[t] if t < L else 0
        out.append(C.dims[t] - r_in - r_out)
    if not C.bounded_above and L == len(C.dims) - 1:
        # the outgoing map of the last position is unknown
        out.pop()
    return out


def contraction_matrix(d, h, k):
    """Contraction L^{h,k} -> L^{h+1,k-1} of Sym^h F0 (x) Lambda^k F1 against d.

    c (x) e_J -> sum_t (-1)^t (c * d(e_{j_t})) (x) e_{J minus j_t}.
    """
    rank0, rank1 = d.shape
    src_s = sym_basis(rank0, h)
    src_e = ext_basis(rank1, k)
    ncols = len(src_s) * len(src_e)
    if k == 0 or h < 0:
        return RMatrix(sym_dim(rank0, h + 1) * ext_dim(rank1, k - 1), ncols)
    tgt_s = sym_index(rank0, h + 1)
    tgt_e = ext_index(rank1, k - 1)
    width = len(tgt_e)
    dcols = [[(i, _integral(v)) for i, v in enumerate(d.column(j)) if v] for j in range(rank1)]
    # contraction part on the exterior factor, shared by every monomial
    epart = []
    for b, J in enumerate(src_e):
        for t, j in enumerate(J):
            if dcols[j]:
                epart.append((b, -1 if t % 2 else 1, tgt_e[J[:t] + J[t + 1:]], j))
    # multiplication by x_i on the symmetric factor
    raise_idx = [
        [tgt_s[alpha[:i] + (alpha[i] + 1,) + alpha[i + 1:]] * width for i in range(rank0)]
        for alpha in src_s
    ]
    entries = {}
    ne = len(src_e)
    for a in range(len(src_s)):
        ra = raise_idx[a]
        for b, sgn, rest, j in epart:
            col = a * ne + b
            for i, v in dcols[j]:
                key = (ra[i] + rest, col)
                if key in entries:
                    entries[key] += sgn * v
                else:
                    entries[key] = sgn * v
    return RMatrix.from_accumulated(len(tgt_s) * width, ncols, entries)


def _integral(c):
    return c.numerator if c.denominator == 1 else c


def koszul_sym_matrix(d, a_deg, k):
    """Differential Sym^{a_deg} V0 (x) Lambda^k V1 -> Sym^{a_deg-1} V0 (x) Lambda^{k+1} V1.

    x^alpha (x) e_J -> sum_j alpha_j sum_i d[i][j] x^{alpha - e_j} (x) e_i ^ e_J.
    """
    n1, n0 = d.shape  # target V1 has n1 = rank0 rows, source V0 has n0 columns
    src_s = sym_basis(n0, a_deg)
    src_e = ext_basis(n1, k)
    ncols = len(src_s) * len(src_e)
    if a_deg == 0:
        return RMatrix(0, ncols)
    tgt_s = sym_index(n0, a_deg - 1)
    tgt_e = ext_index(n1, k + 1)
    width = len(tgt_e)
    dcols = [[(i, v) for i, v in enumerate(d.column(j)) if v] for j in range(n0)]
    entries = {}
    ne = len(src_e)
    for a, alpha in enumerate(src_s):
        for b, J in enumerate(src_e):
            col = a * ne + b
            for j, e in enumerate(alpha):
                if not e:
                    continue
                beta = list(alpha)
                beta[j] -= 1
                row_s = tgt_s[tuple(beta)]
                for i, v in dcols[j]:
                    sgn, new = wedge_sign_insert(J, i)
                    if not sgn:
                        continue
                    key = (row_s * width + tgt_e[new], col)
                    entries[key] = entries.get(key, 0) + sgn * e * v
    return RMatrix(len(tgt_s) * width, ncols, entries)


def ext_complex(W, N):
    """Lambda^N(W): position h carries Sym^h W0 (x) Lambda^{N-h} W1, differential = contraction."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    dims = [sym_dim(W.rank0, h) * ext_dim(W.rank1, N - h) for h in range(N + 1)]
    maps = [contraction_matrix(W.d, h, N - h) for h in range(N)]
    return ChainComplexSlices(list(range(N + 1)), dims, maps)


def sym_complex(V, N):
    """Sym^N(V): position k carries Sym^{N-k} V0 (x) Lambda^k V1 (V0 = source, V1 = target)."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    n0, n1 = V.rank1, V.rank0
    dims = [sym_dim(n0, N - k) * ext_dim(n1, k) for k in range(N + 1)]
    maps = [koszul_sym_matrix(V.d, N - k, k) for k in range(N)]
    return ChainComplexSlices(list(range(N + 1)), dims, maps)


def prop26_expected(h0, h1, N):
    """Cohomology of Lambda^N(W) predicted from H0, H1: position h has Sym^h H0 (x) Lambda^{N-h} H1."""
    return [sym_dim(h0, h) * ext_dim(h1, N - h) for h in range(N + 1)]


def sym_expected(V, N):
    """Cohomology of Sym^N(V): position k has Sym^{N-k}(ker d) (x) Lambda^k(coker d)."""
    return prop26_expected(V.h1, V.h0, N)[::-1]
