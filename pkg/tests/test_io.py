import json
from fractions import Fraction

import pytest

from keuler.core.forms import random_instance
from keuler.io import (
    InstanceFormatError,
    format_rational,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    parse_rational,
    save_instance,
)
from keuler.scenarios import theta_instance


def base():
    return {"m": 1, "f1_rank": 1, "f0_rank": 1, "d": [["0"]], "a": [{"sym": [1], "f1": 0, "coeff": "1"}]}


def test_rationals():
    assert parse_rational("-2/5", "x") == Fraction(-2, 5)
    assert parse_rational(" 7 ", "x") == 7
    assert parse_rational(3, "x") == 3
    for bad in (0.5, True, "1.5", "1e3", "a/b", None, "1/0"):
        with pytest.raises(InstanceFormatError):
            parse_rational(bad, "x")
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(Fraction(-1, 3)) == "-1/3"


@pytest.mark.parametrize(
    "mutate,field",
    [
        (lambda d: d.pop("m"), "m"),
        (lambda d: d.update(m=True), "m"),
        (lambda d: d.update(f0_rank=-1), "f0_rank"),
        (lambda d: d.update(d=[["0", "1"]]), "d[0]"),
        (lambda d: d.update(d=[[0.0]]), "d[0][0]"),
        (lambda d: d["a"][0].update(sym=[1, 0]), "a[0].sym"),
        (lambda d: d["a"][0].update(sym=[2]), "a[0].sym"),
        (lambda d: d["a"][0].update(f1=1), "a[0].f1"),
        (lambda d: d["a"][0].update(coeff="x"), "a[0].coeff"),
        (lambda d: d["a"][0].pop("coeff"), "a[0].coeff"),
        (lambda d: d["a"].append({"sym": [1], "f1": 0, "coeff": "2"}), "a[1]"),
        (lambda d: d.update(a="none"), "a"),
    ],
)
def test_malformed_fields_are_named(mutate, field):
    data = base()
    mutate(data)
    with pytest.raises(InstanceFormatError) as exc:
        instance_from_dict(data)
    assert exc.value.field == field
    assert str(exc.value).startswith(field)


def test_roundtrip(tmp_path):
    for inst in (theta_instance(2), random_instance(3), random_instance(11)):
        p = tmp_path / "i.json"
        save_instance(inst, p)
        back = load_instance(p)
        assert back.F.d == inst.F.d and back.a == inst.a
        assert instance_to_dict(back) == json.loads(p.read_text())


def test_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(InstanceFormatError):
        load_instance(p)
