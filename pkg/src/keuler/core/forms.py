"""Forms a(1) in Sym^m F0 (x) F1, closedness, the induced linear system and
base-point-freeness."""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from keuler.koszul import TwoTermComplex, contraction_matrix
from keuler.linalg import (
    RMatrix,
    as_rational,
    complement_basis,
    image_basis,
    inverse,
    kernel_basis,
    rank,
)
from keuler.multilinear import sym_basis, sym_dim, sym_index, sym_power_matrix


class NotClosedError(ValueError):
    """The form is not killed by the contraction into Sym^{m+1} F0."""


class DegenerateFormError(ValueError):
    """The induced linear system has base points."""


@dataclass(frozen=True)
class Form:
    """a(1) = sum coeff * x^alpha (x) f_j, stored as {(alpha, j): Fraction}."""

    m: int
    rank0: int
    rank1: int
    coefficients: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("the form degree m must be at least 1")
        clean = {}
        for (alpha, j), c in self.coefficients.items():
            alpha = tuple(int(x) for x in alpha)
            if len(alpha) != self.rank0 or any(x < 0 for x in alpha) or sum(alpha) != self.m:
                raise ValueError(f"exponent {alpha} is not a degree-{self.m} monomial in {self.rank0} variables")
            if not 0 <= j < self.rank1:
                raise ValueError(f"F1 index {j} out of range")
            c = as_rational(c)
            if c:
                clean[(alpha, int(j))] = c
        object.__setattr__(self, "coefficients", clean)

    @classmethod
    def zero(cls, m, rank0, rank1):
        return cls(m, rank0, rank1, {})

    @classmethod
    def from_vector(cls, m, rank0, rank1, vec):
        """Inverse of :meth:`vector` (layout: monomial major, F1 index minor)."""
        basis = sym_basis(rank0, m)
        coeffs = {}
        for idx, c in enumerate(vec):
            if c:
                coeffs[(basis[idx // rank1], idx % rank1)] = c
        return cls(m, rank0, rank1, coeffs)

    def vector(self):
        idx = sym_index(self.rank0, self.m)
        v = [Fraction(0)] * (len(idx) * self.rank1)
        for (alpha, j), c in self.coefficients.items():
            v[idx[alpha] * self.rank1 + j] = c
        return v

    def table(self):
        """Coefficients as an RMatrix with rows Sym^m F0 and columns F1."""
        idx = sym_index(self.rank0, self.m)
        return RMatrix(len(idx), self.rank1, {(idx[a], j): c for (a, j), c in self.coefficients.items()})

    def __sub__(self, other):
        out = dict(self.coefficients)
        for key, c in other.coefficients.items():
            out[key] = out.get(key, 0) - c
        return Form(self.m, self.rank0, self.rank1, out)

    def __add__(self, other):
        out = dict(self.coefficients)
        for key, c in other.coefficients.items():
            out[key] = out.get(key, 0) + c
        return Form(self.m, self.rank0, self.rank1, out)

    def is_zero(self):
        return not self.coefficients


@dataclass(frozen=True)
class Instance:
    F: TwoTermComplex
    a: Form

    def __post_init__(self):
        if (self.a.rank0, self.a.rank1) != (self.F.rank0, self.F.rank1):
            raise ValueError("form and complex have different ranks")

    @property
    def m(self):
        return self.a.m


@dataclass
class ClosedCheck:
    closed: bool
    witness: list = None

    def __bool__(self):
        return self.closed


def closedness_matrix(F, m):
    """The contraction Sym^m F0 (x) F1 -> Sym^{m+1} F0."""
    return contraction_matrix(F.d, m, 1)


def check_closed(inst):
    """Closed iff the contraction of a(1) against d vanishes; otherwise return that image."""
    img = closedness_matrix(inst.F, inst.m).apply(inst.a.vector())
    if any(img):
        return ClosedCheck(False, img)
    return ClosedCheck(True, None)


def _rng(seed):
    return np.random.default_rng(seed)


def random_closed_form(F, m, seed, coeff_range=2):
    """Seeded random integer combination of a kernel basis of the closedness map."""
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = _rng(seed)
    basis = kernel_basis(closedness_matrix(F, m))
    n = sym_dim(F.rank0, m) * F.rank1
    vec = [Fraction(0)] * n
    for b in basis:
        c = int(rng.integers(-coeff_range, coeff_range + 1))
        if c:
            for t, x in enumerate(b):
                if x:
                    vec[t] += c * x
    return Form.from_vector(m, F.rank0, F.rank1, vec)


@dataclass
class CohomologySplitting:
    """Bases adapted to F1 = ker d (+) C1 and F0 = d(C1) (+) C0."""

    P1: RMatrix  # columns: kernel basis then complement of F1
    P0: RMatrix  # columns: d(C1) then complement of F0
    h1: int
    h0: int
    rank_d: int


def cohomology_splitting(F):
    K = kernel_basis(F.d)
    C1 = complement_basis(K, F.rank1)
    unit = lambda n, j: [Fraction(1) if t == j else Fraction(0) for t in range(n)]
    cols1 = K + [unit(F.rank1, j) for j in C1]
    V = [F.d.apply(unit(F.rank1, j)) for j in C1]
    C0 = complement_basis(V, F.rank0)
    cols0 = V + [unit(F.rank0, j) for j in C0]
    P1 = RMatrix.from_columns(cols1, F.rank1)
    P0 = RMatrix.from_columns(cols0, F.rank0)
    return CohomologySplitting(P1, P0, len(K), len(C0), len(C1))


def induced_system(inst):
    """Matrix of S: H1^dual -> Sym^m H0 (rows: monomials in H0, columns: basis of ker d)."""
    if not check_closed(inst):
        raise NotClosedError("induced system needs a closed form")
    F, m = inst.F, inst.m
    sp = cohomology_splitting(F)
    A = inst.a.table()
    if F.rank0:
        A = sym_power_matrix(inverse(sp.P0), m) @ A
    if F.rank1:
        A = A @ inverse(sp.P1).T
    rows_h0 = sym_basis(sp.h0, m)
    full_index = sym_index(F.rank0, m)
    r = sp.rank_d
    entries = {}
    for b, beta in enumerate(rows_h0):
        src = full_index[(0,) * r + beta]
        for l in range(sp.h1):
            v = A[src, l]
            if v:
                entries[(b, l)] = v
        # closedness forces the complement part of F1 to vanish after projection
        for l in range(sp.h1, F.rank1):
            if A[src, l]:
                raise AssertionError("closed form has a nonzero component off ker d")
    return RMatrix(len(rows_h0), sp.h1, entries)


def macaulay_degree(h0, m):
    return h0 * (m - 1) + 1


def multiplication_matrix(forms, h0, m, D):
    """Sym^{D-m} H0 (x) span(forms) -> Sym^D H0 (forms given as coefficient columns)."""
    mons = sym_basis(h0, D - m)
    src = sym_basis(h0, m)
    tgt = sym_index(h0, D)
    entries = {}
    col = 0
    for mu in mons:
        for g in forms:
            for t, c in enumerate(g):
                if c:
                    key = (tgt[tuple(x + y for x, y in zip(mu, src[t]))], col)
                    entries[key] = entries.get(key, 0) + c
            col += 1
    return RMatrix(len(tgt), col, entries)


def is_nondegenerate(inst, S=None):
    """Base-point-freeness of the image of S, decided at the Macaulay degree."""
    if S is None:
        S = induced_system(inst)
    h0 = inst.F.h0
    if h0 == 0:
        return True
    forms = image_basis(S)
    if not forms:
        return False
    m = inst.m
    D = macaulay_degree(h0, m)
    mult = multiplication_matrix(forms, h0, m, D)
    return rank(mult) == sym_dim(h0, D)


def validate(inst):
    """(closed check, nondegenerate or None) without raising."""
    cc = check_closed(inst)
    nd = is_nondegenerate(inst) if cc else None
    return cc, nd


def random_integer_map(rng, rows, cols, r, coeff_range=2):
    """A rows x cols integer matrix of rank exactly r (sampled as a product, retried)."""
    if r == 0 or rows == 0 or cols == 0:
        return RMatrix(rows, cols)
    while True:
        A = rng.integers(-coeff_range, coeff_range + 1, size=(rows, r))
        B = rng.integers(-coeff_range, coeff_range + 1, size=(r, cols))
        M = RMatrix.from_rows((A @ B).tolist(), ncols=cols)
        if rank(M) == r:
            return M


def random_instance(seed, max_rank=3, max_m=3, attempts=40):
    """Seeded random closed nondegenerate instance with rank0 <= rank1 <= max_rank, m <= max_m."""
    rng = _rng(seed)
    while True:
        rank1 = int(rng.integers(0, max_rank + 1))
        rank0 = int(rng.integers(0, rank1 + 1))
        m = int(rng.integers(1, max_m + 1))
        r = int(rng.integers(0, min(rank0, rank1) + 1))
        d = random_integer_map(rng, rank0, rank1, r)
        F = TwoTermComplex(rank1, rank0, d)
        for _ in range(attempts):
            a = random_closed_form(F, m, int(rng.integers(2**31)))
            inst = Instance(F, a)
            if is_nondegenerate(inst):
                return inst
