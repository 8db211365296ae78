"""Seeded randomized invariant suites behind ``keuler selftest``.

Each suite is a predicate on an instance (or on a sampled auxiliary object).
The report counts passes and failures per suite; the first failure is kept
with enough data to replay it.
"""

import contextlib
import time

import numpy as np

from keuler.chern import verify_ctop_identity
from keuler.core import bicomplex
from keuler.core.bicomplex import atilde_matrix, dtilde_matrix
from keuler.core.euler import cohomology_of_total, ke_class, n0_bound
from keuler.core.forms import (
    Form,
    Instance,
    check_closed,
    induced_system,
    is_nondegenerate,
    random_closed_form,
    random_instance,
    random_integer_map,
)
from keuler.core.homotopy import check_stabilization, random_homotopy_form, verify_homotopy_invariance
from keuler.io import SCHEMA_VERSION, instance_to_dict
from keuler.koszul import TwoTermComplex, cohomology_dims, ext_complex, prop26_expected
from keuler.linalg import rank
from keuler.multilinear import sym_basis
from keuler.periodic import periodic_virtual_rank
from keuler.scenarios import witten_instance

SUITES = (
    "double_complex",
    "double_complex_negative_control",
    "vanishing",
    "cl_consistency",
    "lambda_minus_one",
    "periodic",
    "homotopy",
    "stabilization",
    "exterior_power_cohomology",
    "ctop_identity",
    "nondegeneracy_m1",
)

# stabilized ranks above this make the Sym powers near n0 too large for a quick suite
STABILIZATION_MAX_RANK0 = 3


@contextlib.contextmanager
def corrupted_sign():
    """Debug only: let a~ act by right instead of left multiplication.

    Right multiplication differs by (-1)^k on Lambda^k, which breaks the
    anticommutation with d~ whenever a~ d~ is nonzero.
    """
    saved = bicomplex._insert_one

    def right(J, j):
        sgn, new = saved(J, j)
        if not sgn:
            return sgn, new
        return sgn * (-1) ** len(J), new

    bicomplex._insert_one = right
    try:
        yield
    finally:
        bicomplex._insert_one = saved


def _windows(inst, extra=2):
    F, m = inst.F, inst.m
    for h in range(0, m + extra + 1):
        for k in range(0, F.rank1 + 1):
            yield h, k


def double_complex_identities(inst):
    """First (h, k, which) where d~^2, a~^2 or d~a~ + a~d~ fails, else None."""
    F, m = inst.F, inst.m
    for h, k in _windows(inst):
        if k >= 2 and not (dtilde_matrix(F, h + 1, k - 1) @ dtilde_matrix(F, h, k)).is_zero():
            return h, k, "dd"
        A = atilde_matrix(inst, h, k)
        if k + 2 <= F.rank1 and not (atilde_matrix(inst, h + m, k + 1) @ A).is_zero():
            return h, k, "aa"
        if k + 1 <= F.rank1:
            anti = dtilde_matrix(F, h + m, k + 1) @ A
            if k >= 1:
                anti = anti + atilde_matrix(inst, h + 1, k - 1) @ dtilde_matrix(F, h, k)
            if not anti.is_zero():
                return h, k, "anticommutator"
    return None


def anticommutator_nonzero(inst):
    F, m = inst.F, inst.m
    for h, k in _windows(inst):
        if 1 <= k < F.rank1 or (k == 0 and F.rank1 >= 1):
            anti = dtilde_matrix(F, h + m, k + 1) @ atilde_matrix(inst, h, k)
            if k >= 1:
                anti = anti + atilde_matrix(inst, h + 1, k - 1) @ dtilde_matrix(F, h, k)
            if not anti.is_zero():
                return True
    return False


def random_nonclosed_instance(rng, max_rank=3, max_m=3):
    """A form with integer coefficients on a complex with d != 0 that fails closedness."""
    while True:
        rank1 = int(rng.integers(1, max(max_rank, 1) + 1))
        rank0 = int(rng.integers(1, max(max_rank, 1) + 1))
        m = int(rng.integers(1, max_m + 1))
        d = random_integer_map(rng, rank0, rank1, int(rng.integers(1, min(rank0, rank1) + 1)))
        F = TwoTermComplex(rank1, rank0, d)
        coeffs = {}
        for alpha in sym_basis(rank0, m):
            for j in range(rank1):
                c = int(rng.integers(-2, 3))
                if c:
                    coeffs[(alpha, j)] = c
        inst = Instance(F, Form(m, rank0, rank1, coeffs))
        if not check_closed(inst):
            return inst


def random_two_term(rng, max_rank=3):
    rank1 = int(rng.integers(0, max_rank + 1))
    rank0 = int(rng.integers(0, max_rank + 1))
    r = int(rng.integers(0, min(rank0, rank1) + 1))
    return TwoTermComplex(rank1, rank0, random_integer_map(rng, rank0, rank1, r))


def vanishing_holds(inst):
    n0 = n0_bound(inst.F, inst.m)
    for i in range(inst.m + 1):
        H = cohomology_of_total(inst, i, n0 + 2, strict=False)
        for n in range(n0, n0 + 3):
            if H.get(n, 0):
                return False, {"i": i, "n": n, "dim": H[n]}
    return True, None


def lambda_terms_match(rank1, m):
    """For F = (Q^rank1 -> 0) and a = 0, formal terms are (0, q, (-1)^q) for every q."""
    ke = ke_class(witten_instance(rank1, r=m + 1))
    expected = [(0, q, (-1) ** q) for q in range(rank1 + 1)]
    return ke.formal_terms == expected, {"got": ke.formal_terms, "expected": expected}


def nondegeneracy_matches_rank(inst):
    """m = 1: linear forms have no common zero iff they span H0 dual."""
    S = induced_system(inst)
    return is_nondegenerate(inst, S) == (rank(S) == inst.F.h0)


class _Tally:
    def __init__(self):
        self.counts = {name: {"passed": 0, "failed": 0} for name in SUITES}
        self.first = None

    def record(self, suite, ok, inst=None, detail=None, case=None):
        self.counts[suite]["passed" if ok else "failed"] += 1
        if not ok and self.first is None:
            self.first = {
                "suite": suite,
                "case": case,
                "instance": instance_to_dict(inst) if inst is not None else None,
                "detail": detail,
            }


def _guarded(tally, suite, fn, inst=None, case=None):
    """Run one check; exceptions count as failures with the message as detail."""
    try:
        res = fn()
    except Exception as exc:  # a crash is a counterexample too
        tally.record(suite, False, inst, {"error": f"{type(exc).__name__}: {exc}"}, case)
        return
    ok, detail = res if isinstance(res, tuple) else (res, None)
    tally.record(suite, bool(ok), inst, detail, case)


def run_selftest(seed=0, cases=50, max_rank=3, max_m=3, corrupt_sign=False):
    """Run every suite; returns a JSON-ready report (timings kept out for determinism)."""
    ctx = corrupted_sign() if corrupt_sign else contextlib.nullcontext()
    tally = _Tally()
    rng = np.random.default_rng(seed)
    seeds = [int(s) for s in rng.integers(0, 2**31, size=cases)]
    with ctx:
        for case, s in enumerate(seeds):
            inst = random_instance(s, max_rank=max_rank, max_m=max_m)
            _per_instance(tally, inst, case, s)
        aux = np.random.default_rng([seed, 1])
        for case in range(max(cases // 5, 1)):
            bad = random_nonclosed_instance(aux, max_rank, max_m)
            _guarded(tally, "double_complex_negative_control", lambda: anticommutator_nonzero(bad), bad, case)
        for case in range(2 * cases):
            W = random_two_term(aux, max_rank)
            N = int(aux.integers(0, 5))
            _guarded(tally, "exterior_power_cohomology", lambda: _exterior_power_case(W, N), None, case)
        for n in range(1, 4):
            for D in range(n, 7):
                _guarded(tally, "ctop_identity", lambda: (verify_ctop_identity(n, D), {"n": n, "D": D}))
        for r1 in range(max_rank + 1):
            for m in range(1, max_m + 1):
                _guarded(tally, "lambda_minus_one", lambda: lambda_terms_match(r1, m), witten_instance(r1, m + 1))
        for case in range(max(cases // 2, 1)):
            inst = _random_m1_instance(aux, max_rank)
            _guarded(tally, "nondegeneracy_m1", lambda: nondegeneracy_matches_rank(inst), inst, case)
    ok = all(c["failed"] == 0 for c in tally.counts.values())
    report = {
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "cases": cases,
        "max_rank": max_rank,
        "max_m": max_m,
        "suites": tally.counts,
        "ok": ok,
    }
    if corrupt_sign:
        report["debug_corrupt_sign"] = True
    return report, tally.first


def _exterior_power_case(W, N):
    got = cohomology_dims(ext_complex(W, N))
    want = prop26_expected(W.h0, W.h1, N)
    return got == want, {"rank1": W.rank1, "rank0": W.rank0, "N": N, "got": got, "expected": want}


def _random_m1_instance(rng, max_rank):
    """Closed m = 1 form, not filtered for nondegeneracy."""
    rank1 = int(rng.integers(0, max_rank + 1))
    rank0 = int(rng.integers(0, max_rank + 1))
    r = int(rng.integers(0, min(rank0, rank1) + 1))
    F = TwoTermComplex(rank1, rank0, random_integer_map(rng, rank0, rank1, r))
    return Instance(F, random_closed_form(F, 1, int(rng.integers(2**31)), coeff_range=1))


def _per_instance(tally, inst, case, s):
    _guarded(tally, "double_complex", lambda: _ok_if_none(double_complex_identities(inst)), inst, case)
    ke = None
    try:
        ke = ke_class(inst, force=True)
    except Exception as exc:
        tally.record("cl_consistency", False, inst, {"error": f"{type(exc).__name__}: {exc}"}, case)
    _guarded(tally, "vanishing", lambda: vanishing_holds(inst), inst, case)
    if ke is not None:
        tally.record(
            "cl_consistency",
            all(r.consistent and r.total == r.euler_characteristic for r in ke.per_i),
            inst,
            {"per_i": [(r.total, r.euler_characteristic) for r in ke.per_i]},
            case,
        )
        _guarded(
            tally,
            "periodic",
            lambda: _eq(periodic_virtual_rank(inst), ke.virtual_rank),
            inst,
            case,
        )
    if inst.F.rank1 >= 2:
        hf = random_homotopy_form(inst.F, inst.m, s)
        _guarded(tally, "homotopy", lambda: _homotopy(inst, hf), inst, case)
    if inst.F.rank0 + 1 <= STABILIZATION_MAX_RANK0:
        _guarded(tally, "stabilization", lambda: _stab(inst, s), inst, case)


def _ok_if_none(res):
    return res is None, None if res is None else {"h": res[0], "k": res[1], "identity": res[2]}


def _eq(x, y):
    return x == y, {"left": x, "right": y}


def _homotopy(inst, hf):
    rep = verify_homotopy_invariance(inst, hf)
    return rep.ok, {"first_failure": rep.first_failure, "virtual_ranks": [rep.virtual_rank, rep.virtual_rank_prime]}


def _stab(inst, s):
    rep = check_stabilization(inst, 1, seed=s)
    ok = rep["ok"] and rep["pushforward_ok"]
    return ok, {k: rep[k] for k in ("virtual_rank", "virtual_rank_stabilized", "pushforward_ok")}


def timed_selftest(**kw):
    t = time.perf_counter()
    report, first = run_selftest(**kw)
    return report, first, time.perf_counter() - t
