"""keuler command line.

Exit codes: 0 success, 1 failed check or degenerate input, 2 malformed
input or invalid parameters.  Reports go to stdout as JSON.
"""

import argparse
import sys

from keuler.chern import verify_ctop_identity
from keuler.core.euler import VanishingError, ke_class, n0_bound
from keuler.core.forms import DegenerateFormError, NotClosedError, check_closed, is_nondegenerate
from keuler.guard import SizeGuardError, cell_dim_limit
from keuler.io import (
    SCHEMA_VERSION,
    InstanceFormatError,
    dumps,
    euler_report,
    format_rational,
    load_instance,
    save_instance,
)
from keuler.scenarios import (
    bundle_case_closed_form,
    bundle_case_instance,
    genus_one_instance,
    theta_instance,
    witten_instance,
)
from keuler.multilinear import sym_basis
from keuler.selftest import run_selftest

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(report, out=None):
    report = dict(report)
    report["schema_version"] = SCHEMA_VERSION
    (out or sys.stdout).write(dumps(report))


def _err(msg):
    print(f"keuler: error: {msg}", file=sys.stderr)


def _load(path):
    try:
        return load_instance(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except InstanceFormatError as exc:
        raise UsageError(str(exc)) from None


def cmd_validate(args):
    inst = _load(args.path)
    closed = check_closed(inst)
    nondeg = bool(closed) and is_nondegenerate(inst)
    report = {
        "command": "validate",
        "closed": bool(closed),
        "nondegenerate": nondeg,
        "h0": inst.F.h0,
        "h1": inst.F.h1,
        "n0": n0_bound(inst.F, inst.m),
    }
    if not closed:
        # nonzero coordinates of the contraction of a(1) in Sym^{m+1} F0
        mons = sym_basis(inst.F.rank0, inst.m + 1)
        report["witness"] = [
            {"sym": list(mons[t]), "coeff": format_rational(c)} for t, c in enumerate(closed.witness) if c
        ]
    _emit(report)
    return EXIT_OK if closed and nondeg else EXIT_FAIL


def _ke(inst, force):
    try:
        return ke_class(inst, force=force)
    except NotClosedError as exc:
        _err(f"form is not closed: {exc}")
    except DegenerateFormError as exc:
        _err(f"{exc} (use --force to compute the non-canonical truncation)")
    except VanishingError as exc:
        _err(str(exc))
    return None


def cmd_ke(args):
    ke = _ke(_load(args.path), args.force)
    if ke is None:
        return EXIT_FAIL
    report = {"command": "ke", **euler_report(ke)}
    _emit(report)
    return EXIT_OK


def cmd_ctop(args):
    ke = _ke(_load(args.path), args.force)
    if ke is None:
        return EXIT_FAIL
    report = {"command": "ctop", "c_W": ke.virtual_rank, **euler_report(ke)}
    _emit(report)
    return EXIT_OK


def _example_instance(args):
    kind = args.kind
    try:
        if kind == "theta":
            return theta_instance(args.h), {"h": args.h}, (-1) ** args.h
        if kind == "genus-one":
            inst = genus_one_instance(args.r, nontrivial=args.nontrivial)
            return inst, {"r": args.r, "nontrivial": args.nontrivial}, None
        if kind == "witten":
            return witten_instance(args.h1, args.r), {"h1": args.h1, "r": args.r}, None
        inst = bundle_case_instance(args.h0, args.h1, args.r, seed=args.seed)
        params = {"h0": args.h0, "h1": args.h1, "r": args.r, "seed": args.seed}
        closed_form = bundle_case_closed_form(args.h0, args.h1, args.r) if args.h0 == args.h1 else None
        return inst, params, closed_form
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_example(args):
    inst, params, oracle = _example_instance(args)
    if args.emit:
        try:
            save_instance(inst, args.emit)
        except OSError as exc:
            raise UsageError(f"cannot write {args.emit}: {exc.strerror}") from None
    ke = _ke(inst, False)
    if ke is None:
        return EXIT_FAIL
    report = {
        "command": "example",
        "kind": args.kind,
        "params": params,
        "c_W": ke.virtual_rank,
        "n0": ke.n0,
        "window": {"n_max": ke.n_max},
    }
    if args.kind == "bundle-case" and oracle is not None:
        report["closed_form"] = oracle
    if args.emit:
        report["emitted"] = args.emit
    _emit(report)
    return EXIT_OK


def cmd_chern_identity(args):
    if args.rank < 0 or args.degree < args.rank:
        raise UsageError("need 0 <= rank <= degree")
    ok = verify_ctop_identity(args.rank, args.degree)
    _emit({"command": "chern-identity", "rank": args.rank, "degree": args.degree, "ok": ok})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_selftest(args):
    if args.cases < 1 or args.max_rank < 0 or args.max_m < 1:
        raise UsageError("need --cases >= 1, --max-rank >= 0, --max-m >= 1")
    report, first = run_selftest(
        seed=args.seed,
        cases=args.cases,
        max_rank=args.max_rank,
        max_m=args.max_m,
        corrupt_sign=args.debug_corrupt_sign,
    )
    report = {"command": "selftest", **report}
    if first is not None:
        with open(args.counterexample, "w", encoding="utf-8") as fh:
            fh.write(dumps({"schema_version": SCHEMA_VERSION, **first}))
        report["counterexample_file"] = args.counterexample
        report["first_failure"] = first["suite"]
    _emit(report)
    return EXIT_OK if report["ok"] else EXIT_FAIL


def _positive_limit(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="keuler", description="K-theoretic Euler classes of closed forms over a point.")
    p.add_argument(
        "--max-cell-dim",
        type=_positive_limit,
        default=None,
        help="abort before building a space larger than this (default 200000, env WITTEN_MAX_CELL_DIM)",
    )
    # the guard may also follow the subcommand; SUPPRESS keeps an absent flag from clobbering the global one
    guard = argparse.ArgumentParser(add_help=False)
    guard.add_argument("--max-cell-dim", type=_positive_limit, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", parents=[guard], help="check closedness and nondegeneracy of an instance file")
    v.add_argument("path")
    v.set_defaults(func=cmd_validate)

    for name, fn, text in (("ke", cmd_ke, "K-theory Euler class report"), ("ctop", cmd_ctop, "top Chern class c_W")):
        s = sub.add_parser(name, parents=[guard], help=text)
        s.add_argument("path")
        s.add_argument("--force", action="store_true", help="compute the truncation for degenerate forms too")
        s.set_defaults(func=fn)

    ex = sub.add_parser("example", help="build a spin scenario and report c_W")
    ex_sub = ex.add_subparsers(dest="kind", required=True)
    t = ex_sub.add_parser("theta", parents=[guard])
    t.add_argument("--h", type=int, required=True)
    g = ex_sub.add_parser("genus-one", parents=[guard])
    g.add_argument("--r", type=int, required=True)
    g.add_argument("--nontrivial", action="store_true", help="L not trivial, so h0 = h1 = 0")
    w = ex_sub.add_parser("witten", parents=[guard])
    w.add_argument("--h1", type=int, required=True)
    w.add_argument("--r", type=int, default=2)
    b = ex_sub.add_parser("bundle-case", parents=[guard])
    b.add_argument("--h0", type=int, required=True)
    b.add_argument("--h1", type=int, required=True)
    b.add_argument("--r", type=int, required=True)
    b.add_argument("--seed", type=int, default=0)
    for s in (t, g, w, b):
        s.add_argument("--emit", metavar="PATH", help="also write the instance file")
        s.set_defaults(func=cmd_example)

    c = sub.add_parser("chern-identity", help="check c_top = ch(lambda_-1(V^dual)) td(V) in Chern roots")
    c.add_argument("--rank", type=int, required=True)
    c.add_argument("--degree", type=int, required=True)
    c.set_defaults(func=cmd_chern_identity)

    st = sub.add_parser("selftest", parents=[guard], help="run the seeded invariant suites")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--cases", type=int, default=50)
    st.add_argument("--max-rank", type=int, default=3)
    st.add_argument("--max-m", type=int, default=3)
    st.add_argument("--counterexample", default="selftest-counterexample.json", help="where to write the first failure")
    st.add_argument("--debug-corrupt-sign", action="store_true", help=argparse.SUPPRESS)
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.max_cell_dim is not None:
            with cell_dim_limit(args.max_cell_dim):
                return args.func(args)
        return args.func(args)
    except UsageError as exc:
        _err(str(exc))
        return EXIT_USAGE
    except SizeGuardError as exc:
        _err(str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
