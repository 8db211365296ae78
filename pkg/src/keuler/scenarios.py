"""Ready-made instances for the spin scenarios and the bundle-case closed form.

All scenarios start at the cohomology level: the complex has zero
differential, F0 plays the dual of H^0(C, L) and F1 the dual of H^1(C, L),
and the form is the (r-1)-fold Serre-type pairing.
"""

from dataclasses import dataclass, field
from math import comb

import numpy as np

from keuler.core.forms import Form, Instance, check_closed, is_nondegenerate
from keuler.koszul import TwoTermComplex
from keuler.linalg import RMatrix, rank
from keuler.multilinear import sym_basis, sym_dim


def _unit_exp(n, j, deg=1):
    return tuple(deg if t == j else 0 for t in range(n))


def theta_instance(h, pairing=None):
    """r = 2, F0 = F1 = Q^h, d = 0, a = sum_{ij} P_ij x_i (x) f_j (identity by default)."""
    if h < 0:
        raise ValueError("h must be nonnegative")
    if pairing is None:
        coeffs = {(_unit_exp(h, j), j): 1 for j in range(h)}
    else:
        P = pairing if isinstance(pairing, RMatrix) else RMatrix.from_rows(pairing, ncols=h)
        if P.shape != (h, h) or rank(P) != h:
            raise ValueError("pairing must be an invertible h x h matrix")
        coeffs = {(_unit_exp(h, i), j): v for (i, j), v in P.items()}
    return Instance(TwoTermComplex.zero(h, h), Form(1, h, h, coeffs))


def genus_one_instance(r, nontrivial=False):
    """F0 = F1 = Q, d = 0, m = r - 1, a = x^{r-1} (x) f.

    ``nontrivial`` gives the case where L is not trivial, so h^0 = h^1 = 0.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    if nontrivial:
        return Instance(TwoTermComplex.zero(0, 0), Form.zero(r - 1, 0, 0))
    return Instance(TwoTermComplex.zero(1, 1), Form(r - 1, 1, 1, {((r - 1,), 0): 1}))


def witten_instance(h1, r=2):
    """F0 = 0, F1 = Q^{h1}, a = 0 (H0 = 0, so the condition is vacuous)."""
    if h1 < 0:
        raise ValueError("h1 must be nonnegative")
    if r < 2:
        raise ValueError("r must be at least 2")
    return Instance(TwoTermComplex.zero(h1, 0), Form.zero(r - 1, 0, h1))


def bundle_case_t0(h1, r):
    return r - 1 + comb(h1 - 1 + r - 1, r - 1)


def bundle_case_closed_form(h0, h1, r):
    """sum_{k=0}^{h1} (-1)^k C(h1,k) sum_{h=0}^{(r-1)k+t0} dim Sym^h Q^{h0}."""
    if r < 2:
        raise ValueError("r must be at least 2")
    t0 = bundle_case_t0(h1, r)
    total = 0
    for k in range(h1 + 1):
        inner = sum(sym_dim(h0, h) for h in range((r - 1) * k + t0 + 1))
        total += (-1) ** k * comb(h1, k) * inner
    return total


def random_pairing_form(h0, h1, m, rng, coeff_range=3):
    coeffs = {}
    for alpha in sym_basis(h0, m):
        for j in range(h1):
            c = int(rng.integers(-coeff_range, coeff_range + 1))
            if c:
                coeffs[(alpha, j)] = c
    return Form(m, h0, h1, coeffs)


def bundle_case_instance(h0, h1, r, seed=0, attempts=200):
    """d = 0 with a random nondegenerate form in Sym^{r-1} Q^{h0} (x) Q^{h1}."""
    if r < 2:
        raise ValueError("r must be at least 2")
    rng = np.random.default_rng(seed)
    F = TwoTermComplex.zero(h1, h0)
    for _ in range(attempts):
        inst = Instance(F, random_pairing_form(h0, h1, r - 1, rng))
        if is_nondegenerate(inst):
            return inst
    raise ValueError(f"no nondegenerate pairing found for h0={h0}, h1={h1}, r={r}")


@dataclass
class SpinScenario:
    kind: str
    r: int = 2
    h0: int = 0
    h1: int = 0
    params: dict = field(default_factory=dict)

    KINDS = ("witten", "bundle-case", "theta", "genus-one")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        if self.r < 2:
            raise ValueError("r must be at least 2")
        if self.kind == "theta" and (self.r != 2 or self.h0 != self.h1):
            raise ValueError("theta needs r = 2 and h0 = h1")
        if self.kind == "genus-one" and (self.h0, self.h1) not in ((1, 1), (0, 0)):
            raise ValueError("genus one needs h0 = h1 = 1 (or 0 for nontrivial L)")
        if self.kind == "witten" and self.h0 != 0:
            raise ValueError("the witten scenario has h0 = 0")

    def instance(self):
        if self.kind == "theta":
            return theta_instance(self.h0, self.params.get("pairing"))
        if self.kind == "genus-one":
            return genus_one_instance(self.r, nontrivial=self.h0 == 0)
        if self.kind == "witten":
            return witten_instance(self.h1, self.r)
        return bundle_case_instance(self.h0, self.h1, self.r, self.params.get("seed", 0))

    def expected(self):
        """The known c_W for the scenario (closed form for the bundle case)."""
        if self.kind == "theta":
            return (-1) ** self.h0
        if self.kind == "genus-one":
            return 1 if self.h0 == 0 else -(self.r - 1)
        if self.kind == "witten":
            return 1 if self.h1 == 0 else 0
        return bundle_case_closed_form(self.h0, self.h1, self.r)


def validated(inst):
    if not check_closed(inst) or not is_nondegenerate(inst):
        raise AssertionError("scenario instance failed validation")
    return inst
