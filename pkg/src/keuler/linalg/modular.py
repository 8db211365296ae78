"""Certified exact ranks through prime-field elimination.

A rank modulo a prime is a lower bound for the rank over Q.  This module
turns such bounds into exact ranks without probabilistic assumptions:

* full-rank or zero results are exact;
* inside a complex (consecutive maps compose to zero) the bound
  ``rank(D_{t-1}) + rank(D_t) <= dim C^t`` gives upper bounds, and a
  segment between two exactly known maps has a field-independent Euler
  characteristic, so if all mod-p cohomology of one parity vanishes the
  mod-p ranks in the segment are exact;
* anything left is settled by lifting a mod-p kernel basis to Q by
  rational reconstruction and checking it exactly, or, failing that, by
  enough primes to exceed a Hadamard bound on the relevant minors.

The hot loop (row reduction mod p) runs in a compiled extension when it is
available and in vectorized numpy otherwise.  Set ``KEULER_PURE_PYTHON=1``
to force the fallback.
"""

import logging
import math
import os
from fractions import Fraction

import numpy as np

from keuler.linalg.exact import SMALL_ENTRIES, rank_fraction

log = logging.getLogger(__name__)

_INT64_SAFE = 1 << 62


def _load_backend():
    if os.environ.get("KEULER_PURE_PYTHON"):
        from keuler.linalg._modp_py import echelon_mod_p

        return "numpy", echelon_mod_p
    try:
        from keuler.linalg._modp import echelon_mod_p
    except ImportError:
        from keuler.linalg._modp_py import echelon_mod_p

        return "numpy", echelon_mod_p
    return "cython", echelon_mod_p


BACKEND, _echelon_mod_p = _load_backend()


def set_backend(name):
    """Switch kernels at runtime ("cython" or "numpy"); returns the previous name."""
    global BACKEND, _echelon_mod_p
    prev = BACKEND
    if name == "cython":
        from keuler.linalg._modp import echelon_mod_p
    elif name == "numpy":
        from keuler.linalg._modp_py import echelon_mod_p
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND, _echelon_mod_p = name, echelon_mod_p
    return prev


def echelon_mod_p(a, p, reduced=False):
    return _echelon_mod_p(a, p, reduced)


PRIME_CEILING = 2**26
_PRIMES = []


def prime(i):
    """The i-th prime below 2**26, counting down (the kernels need p*p < 2**52)."""
    if len(_PRIMES) <= i:
        from sympy import prevprime

        q = _PRIMES[-1] if _PRIMES else PRIME_CEILING
        while len(_PRIMES) <= i:
            q = prevprime(q)
            _PRIMES.append(q)
    return _PRIMES[i]


class IntForm:
    """Integer rescaling of an RMatrix, cached for repeated reductions."""

    def __init__(self, M):
        self.nrows, self.ncols = M.shape
        _, rows = M.integer_entries()
        self.rows = rows
        ri, ci, vals = [], [], []
        for i, r in rows.items():
            for j, v in r.items():
                ri.append(i)
                ci.append(j)
                vals.append(v)
        self.ri = np.asarray(ri, dtype=np.intp)
        self.ci = np.asarray(ci, dtype=np.intp)
        self.small = all(abs(v) < _INT64_SAFE for v in vals)
        self.vals = np.asarray(vals, dtype=np.int64) if self.small else vals
        self.nnz = len(vals)

    @property
    def min_dim(self):
        return min(self.nrows, self.ncols)

    def dense_mod(self, p, transpose=False):
        if self.small:
            red = self.vals % p
        else:
            red = np.asarray([v % p for v in self.vals], dtype=np.int64)
        if transpose:
            a = np.zeros((self.ncols, self.nrows), dtype=np.int64)
            a[self.ci, self.ri] = red
        else:
            a = np.zeros((self.nrows, self.ncols), dtype=np.int64)
            a[self.ri, self.ci] = red
        return a

    def rank_mod(self, p):
        if self.nnz == 0:
            return 0
        # eliminate in the wide orientation so the loop stops after few pivots
        a = self.dense_mod(p, transpose=self.nrows > self.ncols)
        return len(echelon_mod_p(a, p))

    def log2_hadamard(self, r):
        """log2 of a bound on every r x r minor."""
        sq = {}
        for i, row in self.rows.items():
            for j, v in row.items():
                sq[j] = sq.get(j, 0) + v * v
        logs = sorted((0.5 * math.log2(s) for s in sq.values()), reverse=True)
        return sum(logs[:r])


def _ratrec(u, N, bound):
    r0, r1 = N, u
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


def _lift_certificate(form, target_rank, max_primes=6):
    """Try to prove rank <= target_rank by exhibiting enough rational kernel vectors.

    Returns True when an exact kernel (of the matrix or its transpose) of
    dimension ``dim - target_rank`` has been verified.
    """
    transpose = (form.nrows - target_rank) < (form.ncols - target_rank)
    n = form.nrows if transpose else form.ncols
    pivots = None
    N = 1
    acc = None
    for idx in range(max_primes):
        p = prime(idx)
        a = form.dense_mod(p, transpose=transpose)
        piv = echelon_mod_p(a, p, reduced=True)
        if len(piv) != target_rank:
            continue
        if pivots is None:
            pivots = piv
            free = [j for j in range(n) if j not in set(piv)]
        elif piv != pivots:
            continue
        block = a[: len(piv)][:, free]
        if acc is None:
            acc = [[int(x) for x in row] for row in block]
            N = p
        else:
            inv = pow(N, -1, p)
            for r, row in enumerate(block):
                arow = acc[r]
                for c, x in enumerate(row):
                    arow[c] = arow[c] + N * (((int(x) - arow[c]) * inv) % p)
            N *= p
        bound = math.isqrt(N // 2)
        vecs = _reconstruct(acc, N, bound)
        if vecs is not None and _verify_kernel(form, vecs, pivots, free, transpose):
            return True
    return False


def _reconstruct(acc, N, bound):
    out = []
    for row in acc:
        orow = []
        for u in row:
            if u == 0:
                orow.append(Fraction(0))
                continue
            q = _ratrec(u, N, bound)
            if q is None:
                return None
            orow.append(q)
        out.append(orow)
    return out


def _verify_kernel(form, block, pivots, free, transpose):
    """Check exactly that the vectors e_f - sum_i block[i][f] e_{pivot_i} lie in the kernel."""
    n = form.nrows if transpose else form.ncols
    nfree = len(free)
    # integer columns: scale each kernel vector by the lcm of its denominators
    scales = [1] * nfree
    for row in block:
        for c, q in enumerate(row):
            scales[c] = math.lcm(scales[c], q.denominator)
    V = np.zeros((n, nfree), dtype=object)
    for c, f in enumerate(free):
        V[f, c] = scales[c]
    for r, pc in enumerate(pivots):
        row = block[r]
        for c in range(nfree):
            q = row[c]
            if q:
                V[pc, c] = -q.numerator * (scales[c] // q.denominator)
    if transpose:
        lines = {}
        for i, row in form.rows.items():
            for j, v in row.items():
                lines.setdefault(j, {})[i] = v
    else:
        lines = form.rows
    for row in lines.values():
        acc = np.zeros(nfree, dtype=object)
        for j, v in row.items():
            acc = acc + v * V[j]
        if any(x != 0 for x in acc):
            return False
    return True


def _hadamard_rank(form, lower, upper, start_prime=1):
    best = lower
    need = form.log2_hadamard(upper) + 1.0
    have = math.log2(prime(0))
    idx = start_prime
    while best < upper and have <= need:
        p = prime(idx)
        best = max(best, form.rank_mod(p))
        have += math.log2(p)
        idx += 1
    return best


def certify_rank(form, lower, upper):
    """Exact rank given a mod-p lower bound and a structural upper bound."""
    if lower >= upper:
        return lower
    if form.nrows * form.ncols <= SMALL_ENTRIES:
        return _fraction_rank_of_form(form)
    if _lift_certificate(form, lower):
        return lower
    log.debug("kernel lift failed on %dx%d, using Hadamard primes", form.nrows, form.ncols)
    r = _hadamard_rank(form, lower, upper)
    return r


def _fraction_rank_of_form(form):
    from keuler.linalg.rmatrix import RMatrix

    M = RMatrix(form.nrows, form.ncols, {(i, j): v for i, r in form.rows.items() for j, v in r.items()})
    return rank_fraction(M)


def exact_rank(M):
    """Exact rank over Q of a single RMatrix."""
    if M.is_zero():
        return 0
    form = IntForm(M)
    r = form.rank_mod(prime(0))
    return certify_rank(form, r, form.min_dim)


def chain_ranks(maps, dims, bounded_below=True, bounded_above=True):
    """Exact ranks of the maps of a complex.

    ``maps[t]`` goes from position ``t`` (dimension ``dims[t]``) to position
    ``t + 1``; consecutive maps must compose to zero.  ``bounded_below``
    means nothing maps into position 0, ``bounded_above`` means nothing
    leaves the last position.
    """
    L = len(maps)
    if len(dims) != L + 1:
        raise ValueError("need one more dimension than maps")
    for t, M in enumerate(maps):
        if M.shape != (dims[t + 1], dims[t]):
            raise ValueError(f"map {t} has shape {M.shape}, expected {(dims[t + 1], dims[t])}")
    forms = [None] * L
    lower = [0] * L
    cert = [False] * L
    for t, M in enumerate(maps):
        if M.is_zero():
            cert[t] = True
            continue
        f = IntForm(M)
        forms[t] = f
        if f.nrows * f.ncols <= SMALL_ENTRIES:
            lower[t] = rank_fraction(M)
            cert[t] = True
            continue
        lower[t] = f.rank_mod(prime(0))
        if lower[t] == f.min_dim:
            cert[t] = True

    def upper(t):
        ub = min(dims[t], dims[t + 1])
        ub = min(ub, dims[t] - (lower[t - 1] if t > 0 else 0))
        ub = min(ub, dims[t + 1] - (lower[t + 1] if t + 1 < L else 0))
        return ub

    def propagate():
        changed = True
        while changed:
            changed = False
            for t in range(L):
                if not cert[t] and lower[t] >= upper(t):
                    cert[t] = True
                    changed = True
            bounds = ([-1] if bounded_below else []) + [t for t in range(L) if cert[t]]
            bounds += [L] if bounded_above else []
            for a, b in zip(bounds, bounds[1:]):
                if b - a < 2:
                    continue
                rk = lambda s: 0 if s < 0 or s >= L else lower[s]
                h = {t: dims[t] - rk(t - 1) - rk(t) for t in range(a + 1, b + 1)}
                even_zero = all(v == 0 for t, v in h.items() if t % 2 == 0)
                odd_zero = all(v == 0 for t, v in h.items() if t % 2 == 1)
                if even_zero or odd_zero:
                    for t in range(a + 1, b):
                        cert[t] = True
                    changed = True

    propagate()
    idx = 1
    while not all(cert) and idx < 3:
        for t in range(L):
            if not cert[t]:
                lower[t] = max(lower[t], forms[t].rank_mod(prime(idx)))
        idx += 1
        propagate()
    while not all(cert):
        t = next(s for s in range(L) if not cert[s])
        lower[t] = certify_rank(forms[t], lower[t], upper(t))
        cert[t] = True
        propagate()
    return lower
