"""Instance files and JSON reports.

Instance file (UTF-8 JSON)::

    {"m": 1, "f1_rank": 1, "f0_rank": 1,
     "d": [["0"]],
     "a": [{"sym": [1], "f1": 0, "coeff": "1"}]}

``d`` is row-major with ``f0_rank`` rows of ``f1_rank`` entries.  Rational
entries are strings such as ``"3"`` or ``"-2/5"`` (JSON integers are also
accepted); floats are rejected so no binary rounding can enter.
"""

import json
import re
from fractions import Fraction

from keuler.core.forms import Form, Instance
from keuler.koszul import TwoTermComplex
from keuler.linalg import RMatrix

SCHEMA_VERSION = "1.0"

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class InstanceFormatError(ValueError):
    """Malformed instance file; ``field`` names the offending entry."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


def parse_rational(value, field):
    if isinstance(value, bool) or isinstance(value, float):
        raise InstanceFormatError(field, f"expected a rational string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str) or not _RATIONAL.match(value.strip()):
        raise InstanceFormatError(field, f"expected a rational like '3' or '-2/5', got {value!r}")
    try:
        return Fraction(value.strip())
    except ZeroDivisionError:
        raise InstanceFormatError(field, "zero denominator") from None


def format_rational(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _int_field(data, name, minimum=0):
    if name not in data:
        raise InstanceFormatError(name, "missing")
    v = data[name]
    if isinstance(v, bool) or not isinstance(v, int):
        raise InstanceFormatError(name, f"expected an integer, got {v!r}")
    if v < minimum:
        raise InstanceFormatError(name, f"must be at least {minimum}")
    return v


def instance_from_dict(data):
    if not isinstance(data, dict):
        raise InstanceFormatError("<root>", "expected a JSON object")
    m = _int_field(data, "m", 1)
    r1 = _int_field(data, "f1_rank")
    r0 = _int_field(data, "f0_rank")
    d_rows = data.get("d")
    if not isinstance(d_rows, list) or len(d_rows) != r0:
        raise InstanceFormatError("d", f"expected a list of {r0} rows")
    entries = {}
    for i, row in enumerate(d_rows):
        if not isinstance(row, list) or len(row) != r1:
            raise InstanceFormatError(f"d[{i}]", f"expected {r1} entries")
        for j, v in enumerate(row):
            q = parse_rational(v, f"d[{i}][{j}]")
            if q:
                entries[(i, j)] = q
    d = RMatrix(r0, r1, entries)
    a_list = data.get("a")
    if not isinstance(a_list, list):
        raise InstanceFormatError("a", "expected a list of entries")
    coeffs = {}
    for t, ent in enumerate(a_list):
        where = f"a[{t}]"
        if not isinstance(ent, dict):
            raise InstanceFormatError(where, "expected an object with sym, f1, coeff")
        sym = ent.get("sym")
        if not isinstance(sym, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in sym):
            raise InstanceFormatError(f"{where}.sym", "expected a list of integers")
        if len(sym) != r0:
            raise InstanceFormatError(f"{where}.sym", f"exponent vector must have length f0_rank={r0}")
        if any(x < 0 for x in sym) or sum(sym) != m:
            raise InstanceFormatError(f"{where}.sym", f"exponents must be nonnegative and sum to m={m}")
        f1 = ent.get("f1")
        if isinstance(f1, bool) or not isinstance(f1, int) or not 0 <= f1 < r1:
            raise InstanceFormatError(f"{where}.f1", f"expected a 0-based index below f1_rank={r1}")
        if "coeff" not in ent:
            raise InstanceFormatError(f"{where}.coeff", "missing")
        q = parse_rational(ent["coeff"], f"{where}.coeff")
        key = (tuple(sym), f1)
        if key in coeffs:
            raise InstanceFormatError(where, f"duplicate entry for sym={sym}, f1={f1}")
        coeffs[key] = q
    F = TwoTermComplex(r1, r0, d)
    return Instance(F, Form(m, r0, r1, coeffs))


def load_instance(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError("<file>", f"invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return instance_from_dict(data)


def instance_to_dict(inst):
    F, a = inst.F, inst.a
    d = [[format_rational(F.d[i, j]) for j in range(F.rank1)] for i in range(F.rank0)]
    entries = [
        {"sym": list(alpha), "f1": j, "coeff": format_rational(c)}
        for (alpha, j), c in sorted(a.coefficients.items())
    ]
    return {"m": a.m, "f1_rank": F.rank1, "f0_rank": F.rank0, "d": d, "a": entries}


def save_instance(inst, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(instance_to_dict(inst)))


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def euler_report(ke):
    """JSON-ready dict for an EulerClass."""
    per_i = []
    for r in ke.per_i:
        per_i.append(
            {
                "i": r.i,
                "dims": {str(n): d for n, d in sorted(r.dims.items())},
                "truncated_sum": r.truncated,
                "residue_rank": r.residue_rank,
                "total": r.total,
                "cohomology": {str(n): h for n, h in sorted(r.cohomology.items())},
                "euler_characteristic": r.euler_characteristic,
                "vanishing_ok": r.vanishing_ok,
                "consistent": r.consistent,
            }
        )
    return {
        "n0": ke.n0,
        "window": {"n_max": ke.n_max},
        "m": ke.m,
        "per_i": per_i,
        "formal_terms": [{"h": h, "k": k, "coeff": c} for h, k, c in ke.formal_terms],
        "residues": [{"i": i, "sign": s, "rank": rk} for i, s, rk in ke.residues],
        "virtual_rank": ke.virtual_rank,
        "canonical": ke.canonical,
        "notes": list(ke.notes),
    }
