"""Homotopy and stabilization invariance of Ke.

For h in Sym^{m-1} F0 (x) Lambda^2 F1, multiplication h~ is even and
commutes with a~, while [d~, h~] is multiplication by d~(h).  Hence
e^{h~} D e^{-h~} = D' with a' = a - d~(h), i.e.

    e^{-h~} o D' = D o e^{-h~}    (the intertwining that holds),

whereas e^{-h~} o D = D' o e^{-h~} corresponds to a' = a + d~(h).  Both
orientations are reported; only the first is expected to hold.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from keuler.core.bicomplex import (
    HomotopyForm,
    block_diagonal_on_cells,
    cells,
    htilde_matrix,
    total_differential,
)
from keuler.core.euler import ke_class, n0_bound
from keuler.core.forms import Form, Instance, closedness_matrix, is_nondegenerate
from keuler.koszul import TwoTermComplex, contraction_matrix
from keuler.linalg import RMatrix, kernel_basis, vstack
from keuler.multilinear import ext_basis, sym_basis, sym_power_matrix


def random_homotopy_form(F, m, seed, coeff_range=2):
    rng = np.random.default_rng(seed)
    coeffs = {}
    for alpha in sym_basis(F.rank0, m - 1):
        for J in ext_basis(F.rank1, 2):
            c = int(rng.integers(-coeff_range, coeff_range + 1))
            if c:
                coeffs[(alpha, J)] = Fraction(c)
    return HomotopyForm(m, F.rank0, F.rank1, coeffs)


def d_of_h(F, h_form):
    """d~(h) in Sym^m F0 (x) F1, as a Form."""
    vec = contraction_matrix(F.d, h_form.m - 1, 2).apply(h_form.vector())
    return Form.from_vector(h_form.m, F.rank0, F.rank1, vec)


def htilde_on_slice(inst, h_form, i, n):
    F, m = inst.F, inst.m
    cl = cells(F.rank0, F.rank1, m, i, n)
    return block_diagonal_on_cells(cl, lambda h, k: {(h + m - 1, k + 2): htilde_matrix(F, h_form, h, k)}), cl


def exp_neg_htilde(inst, h_form, i, n, sign=-1):
    """e^{sign * h~} on K_i^n as a finite sum (h~ raises k by 2, so it is nilpotent)."""
    H, cl = htilde_on_slice(inst, h_form, i, n)
    dim = H.nrows
    out = RMatrix.identity(dim)
    term = RMatrix.identity(dim)
    j = 1
    while True:
        term = term @ H
        if term.is_zero():
            break
        out = out + term.scale(Fraction(sign**j, factorial(j)))
        j += 1
    return out


@dataclass
class HomotopyReport:
    ok: bool
    intertwining_ok: bool
    literal_ok: bool
    ke_equal: bool
    virtual_rank: int
    virtual_rank_prime: int
    first_failure: tuple = None
    literal_first_failure: tuple = None
    checked_slices: int = 0
    notes: list = field(default_factory=list)


def verify_homotopy_invariance(inst, h_form, n_max=None, compare_ke=True):
    """Check slice by slice that a' = a - d~(h) gives a conjugate total differential,
    and that Ke(F, a) = Ke(F, a')."""
    F, m = inst.F, inst.m
    a_prime = inst.a - d_of_h(F, h_form)
    inst2 = Instance(F, a_prime)
    if n_max is None:
        n_max = n0_bound(F, m) + 2
    inter_ok = literal_ok = True
    first = lit_first = None
    count = 0
    from keuler.core.bicomplex import n_min

    for i in range(m + 1):
        E = {}
        for n in range(n_min(F.rank0, F.rank1, m, i), n_max + 2):
            E[n] = exp_neg_htilde(inst, h_form, i, n)
        for n in range(n_min(F.rank0, F.rank1, m, i), n_max + 1):
            D = total_differential(inst, i, n)
            D2 = total_differential(inst2, i, n)
            count += 1
            if E[n + 1] @ D2 != D @ E[n]:
                inter_ok = False
                first = first or (i, n)
            if E[n + 1] @ D != D2 @ E[n]:
                literal_ok = False
                lit_first = lit_first or (i, n)
    ke_eq = True
    vr = vr2 = None
    if compare_ke:
        k1, k2 = ke_class(inst), ke_class(inst2)
        vr, vr2 = k1.virtual_rank, k2.virtual_rank
        ke_eq = vr == vr2 and [(r.total, r.residue_rank, r.cohomology) for r in k1.per_i] == [
            (r.total, r.residue_rank, r.cohomology) for r in k2.per_i
        ]
    return HomotopyReport(
        ok=inter_ok and ke_eq,
        intertwining_ok=inter_ok,
        literal_ok=literal_ok,
        ke_equal=ke_eq,
        virtual_rank=vr,
        virtual_rank_prime=vr2,
        first_failure=first,
        literal_first_failure=lit_first,
        checked_slices=count,
    )


@dataclass
class Stabilization:
    instance: Instance
    f0: RMatrix  # projection Phi_0 -> F0
    f1: RMatrix  # projection Phi_1 -> F1
    s: int


def pushforward_matrix(f0, f1, m):
    """f_* = Sym^m(f0) (x) f1 on Sym^m Phi_0 (x) Phi_1 (monomial major layout)."""
    S = sym_power_matrix(f0, m)
    entries = {}
    for (r, c), v in S.items():
        for (r2, c2), w in f1.items():
            entries[(r * f1.nrows + r2, c * f1.ncols + c2)] = v * w
    return RMatrix(S.nrows * f1.nrows, S.ncols * f1.ncols, entries)


def stabilize(inst, s, seed=0, coeff_range=1):
    """Phi = F (+) (Q^s --id--> Q^s) with a closed form alpha pushing forward to a.

    alpha = (inclusion of a) + a random element of ker d~_Phi meeting ker f_*.
    """
    F, m = inst.F, inst.m
    if s == 0:
        return Stabilization(inst, RMatrix.identity(F.rank0), RMatrix.identity(F.rank1), 0)
    Phi = F.direct_sum(TwoTermComplex(s, s, RMatrix.identity(s)))
    r0, r1 = Phi.rank0, Phi.rank1
    f0 = RMatrix(F.rank0, r0, {(j, j): 1 for j in range(F.rank0)})
    f1 = RMatrix(F.rank1, r1, {(j, j): 1 for j in range(F.rank1)})
    # inclusion of a: pad the exponent vectors and keep F1 indices
    incl = {(tuple(alpha) + (0,) * s, j): c for (alpha, j), c in inst.a.coefficients.items()}
    alpha = Form(m, r0, r1, incl)
    both = vstack([closedness_matrix(Phi, m), pushforward_matrix(f0, f1, m)])
    basis = kernel_basis(both)
    rng = np.random.default_rng(seed)
    vec = alpha.vector()
    for b in basis:
        c = int(rng.integers(-coeff_range, coeff_range + 1))
        if c:
            vec = [x + c * y for x, y in zip(vec, b)]
    alpha = Form.from_vector(m, r0, r1, vec)
    out = Instance(Phi, alpha)
    return Stabilization(out, f0, f1, s)


def pushforward_form(stab):
    """f_*(alpha) as a Form on the original complex."""
    inst = stab.instance
    m = inst.m
    P = pushforward_matrix(stab.f0, stab.f1, m)
    return Form.from_vector(m, stab.f0.nrows, stab.f1.nrows, P.apply(inst.a.vector()))


def check_stabilization(inst, s, seed=0):
    stab = stabilize(inst, s, seed)
    k1 = ke_class(inst)
    k2 = ke_class(stab.instance)
    return {
        "pushforward_ok": pushforward_form(stab) == inst.a,
        "nondegenerate": is_nondegenerate(stab.instance),
        "virtual_rank": k1.virtual_rank,
        "virtual_rank_stabilized": k2.virtual_rank,
        "cohomology_euler": [r.euler_characteristic for r in k1.per_i],
        "cohomology_euler_stabilized": [r.euler_characteristic for r in k2.per_i],
        "ok": k1.virtual_rank == k2.virtual_rank
        and [r.euler_characteristic for r in k1.per_i] == [r.euler_characteristic for r in k2.per_i],
    }
