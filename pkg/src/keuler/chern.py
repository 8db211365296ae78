"""Truncated power series in formal Chern roots.

Used to check c_top(V) = ch(lambda_{-1}(V^dual)) * td(V) on the universal
split case, and to realize c_W over a point, where ch is the rank and the
Todd classes are 1.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial


@lru_cache(maxsize=None)
def bernoulli(n):
    """B_n with B_1 = -1/2, from sum_{j=0}^{n} C(n+1, j) B_j = 0."""
    if n == 0:
        return Fraction(1)
    return -sum(comb(n + 1, j) * bernoulli(j) for j in range(n)) / Fraction(n + 1)


@dataclass
class TruncatedSeries:
    nvars: int
    cap: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for e, c in self.terms.items():
            e = tuple(e)
            if len(e) != self.nvars:
                raise ValueError("exponent vector has the wrong length")
            if sum(e) <= self.cap and c:
                clean[e] = Fraction(c)
        self.terms = clean

    @classmethod
    def constant(cls, nvars, cap, c=1):
        return cls(nvars, cap, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars, cap, j):
        e = [0] * nvars
        e[j] = 1
        return cls(nvars, cap, {tuple(e): 1})

    def _same(self, other):
        if (self.nvars, self.cap) != (other.nvars, other.cap):
            raise ValueError("series live in different truncated rings")

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(self.nvars, self.cap, other)
        self._same(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return TruncatedSeries(self.nvars, self.cap, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.nvars, self.cap, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = Fraction(other)
            return TruncatedSeries(self.nvars, self.cap, {e: v * c for e, v in self.terms.items()})
        self._same(other)
        out = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if d1 + sum(e2) > self.cap:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return TruncatedSeries(self.nvars, self.cap, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.nvars, self.cap) == (other.nvars, other.cap) and self.terms == other.terms

    def degree_part(self, d):
        return {e: c for e, c in self.terms.items() if sum(e) == d}

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def __repr__(self):
        parts = [f"{c}*x^{e}" for e, c in sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]))]
        return f"TruncatedSeries({self.nvars}, cap={self.cap}, " + (" + ".join(parts) or "0") + ")"


def exp_linear(coeffs, cap):
    """exp(sum_j coeffs[j] x_j) truncated at total degree cap."""
    n = len(coeffs)
    terms = {}
    for e in product(range(cap + 1), repeat=n):
        if sum(e) > cap:
            continue
        c = Fraction(1)
        for a, k in zip(coeffs, e):
            c *= Fraction(a) ** k / factorial(k)
        if c:
            terms[e] = c
    return TruncatedSeries(n, cap, terms)


def ch_of_roots(roots, nvars, cap):
    """ch of a bundle with Chern roots given as linear forms (coefficient lists)."""
    out = TruncatedSeries(nvars, cap)
    for r in roots:
        if len(r) != nvars:
            raise ValueError("root has the wrong number of coefficients")
        out = out + exp_linear(r, cap)
    return out


def _unit(n, j):
    return [1 if t == j else 0 for t in range(n)]


def ch_lambda_minus_one_dual(n, D):
    """prod_i (1 - e^{-x_i}) truncated at D."""
    out = TruncatedSeries.constant(n, D)
    for j in range(n):
        out = out * (1 - exp_linear([-c for c in _unit(n, j)], D))
    return out


def todd_one_variable_coeffs(D):
    """Coefficients of x / (1 - e^{-x}) up to x^D: (-1)^k B_k / k!."""
    return [(-1) ** k * bernoulli(k) / factorial(k) for k in range(D + 1)]


def todd(n, D):
    """prod_i x_i / (1 - e^{-x_i}) truncated at D."""
    coeffs = todd_one_variable_coeffs(D)
    out = TruncatedSeries.constant(n, D)
    for j in range(n):
        terms = {}
        for k, c in enumerate(coeffs):
            e = [0] * n
            e[j] = k
            terms[tuple(e)] = c
        out = out * TruncatedSeries(n, D, terms)
    return out


def top_chern(n, D):
    """x_1 ... x_n in the truncated ring (zero if n > D)."""
    return TruncatedSeries(n, D, {(1,) * n: 1})


def verify_ctop_identity(n, D):
    """ch(lambda_{-1}(V^dual)) * td(V) == x_1 ... x_n up to degree D."""
    if D < n:
        raise ValueError("need D >= n")
    return ch_lambda_minus_one_dual(n, D) * todd(n, D) == top_chern(n, D)


def cw_point(inst, force=False):
    """c_W over a point: the virtual rank of Ke (ch = rank, td = 1)."""
    from keuler.core.euler import ke_class

    return ke_class(inst, force=force).virtual_rank
