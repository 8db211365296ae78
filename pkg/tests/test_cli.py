import json
import subprocess
import sys

import pytest

from keuler.cli import main
from keuler.io import SCHEMA_VERSION, save_instance
from keuler.scenarios import genus_one_instance, theta_instance


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(out):
    data = json.loads(out)
    assert data["schema_version"] == SCHEMA_VERSION
    return data


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_validate_theta(tmp_path, capsys):
    p = tmp_path / "theta.json"
    save_instance(theta_instance(1), p)
    code, out, _ = run(capsys, "validate", str(p))
    r = report(out)
    assert code == 0 and r["closed"] and r["nondegenerate"] and r["n0"] == 3
    assert (r["h0"], r["h1"]) == (1, 1)


def test_validate_degenerate_and_malformed(tmp_path, capsys):
    zero = write(tmp_path, "z.json", {"m": 1, "f1_rank": 1, "f0_rank": 1, "d": [["0"]], "a": []})
    code, out, _ = run(capsys, "validate", zero)
    assert code == 1 and report(out)["nondegenerate"] is False
    bad = write(tmp_path, "b.json", {"m": 1, "f1_rank": 1, "f0_rank": 1, "d": [["0"]], "a": [{"sym": [1, 0], "f1": 0, "coeff": "1"}]})
    code, out, err = run(capsys, "validate", bad)
    assert code == 2 and out == "" and "a[0].sym" in err
    code, _, err = run(capsys, "validate", str(tmp_path / "missing.json"))
    assert code == 2 and "cannot read" in err


def test_validate_not_closed_reports_witness(tmp_path, capsys):
    nc = write(tmp_path, "nc.json", {"m": 1, "f1_rank": 1, "f0_rank": 1, "d": [["1"]], "a": [{"sym": [1], "f1": 0, "coeff": "1"}]})
    code, out, _ = run(capsys, "validate", nc)
    r = report(out)
    assert code == 1 and r["closed"] is False
    assert r["witness"] == [{"sym": [2], "coeff": "1"}]


@pytest.mark.parametrize("builder,expected", [(lambda: genus_one_instance(4), -3), (lambda: theta_instance(2), 1), (lambda: theta_instance(0), 1)])
def test_ctop_files(tmp_path, capsys, builder, expected):
    p = tmp_path / "i.json"
    save_instance(builder(), p)
    code, out, _ = run(capsys, "ctop", str(p))
    r = report(out)
    assert code == 0 and r["c_W"] == expected == r["virtual_rank"]
    assert "n0" in r and "window" in r and r["per_i"]


def test_ke_report_fields(tmp_path, capsys):
    p = tmp_path / "i.json"
    save_instance(theta_instance(1), p)
    code, out, _ = run(capsys, "ke", str(p))
    r = report(out)
    assert code == 0 and r["virtual_rank"] == -1
    assert set(r["per_i"][0]) >= {"dims", "residue_rank", "cohomology", "total"}
    assert all(isinstance(k, str) for k in r["per_i"][0]["dims"])
    assert r["formal_terms"][0] == {"h": 0, "k": 0, "coeff": 1}


def test_degenerate_needs_force(tmp_path, capsys):
    zero = write(tmp_path, "z.json", {"m": 1, "f1_rank": 1, "f0_rank": 1, "d": [["0"]], "a": []})
    code, out, err = run(capsys, "ctop", zero)
    assert code == 1 and "--force" in err
    code, out, _ = run(capsys, "ctop", "--force", zero)
    assert code == 0 and report(out)["canonical"] is False


def test_deterministic_bytes(tmp_path, capsys):
    p = tmp_path / "i.json"
    save_instance(genus_one_instance(3), p)
    outs = [run(capsys, "ke", str(p))[1] for _ in range(2)]
    assert outs[0] == outs[1]


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["theta", "--h", "3"], -1),
        (["genus-one", "--r", "6"], -5),
        (["genus-one", "--r", "3", "--nontrivial"], 1),
        (["witten", "--h1", "2"], 0),
        (["bundle-case", "--h0", "1", "--h1", "1", "--r", "3"], -2),
    ],
)
def test_examples(capsys, argv, expected):
    code, out, _ = run(capsys, "example", *argv)
    assert code == 0 and report(out)["c_W"] == expected


def test_example_invalid_params(capsys):
    assert run(capsys, "example", "theta", "--h", "-1")[0] == 2
    assert run(capsys, "example", "genus-one", "--r", "1")[0] == 2
    assert run(capsys, "example", "witten", "--h1", "x")[0] == 2
    assert run(capsys, "example", "elliptic")[0] == 2


@pytest.mark.parametrize("argv", [["theta", "--h", "2"], ["genus-one", "--r", "5"], ["bundle-case", "--h0", "2", "--h1", "2", "--r", "3", "--seed", "2"]])
def test_emit_roundtrip(tmp_path, capsys, argv):
    p = str(tmp_path / "e.json")
    code, out, _ = run(capsys, "example", *argv, "--emit", p)
    cw = report(out)["c_W"]
    code2, out2, _ = run(capsys, "ctop", p)
    assert code == code2 == 0 and report(out2)["c_W"] == cw


def test_chern_identity(capsys):
    code, out, _ = run(capsys, "chern-identity", "--rank", "3", "--degree", "6")
    assert code == 0 and report(out)["ok"]
    assert run(capsys, "chern-identity", "--rank", "3", "--degree", "2")[0] == 2


def test_max_cell_dim_guard(capsys, monkeypatch):
    code, _, err = run(capsys, "--max-cell-dim", "5", "example", "theta", "--h", "3")
    assert code == 2 and "limit 5" in err
    code, _, err = run(capsys, "example", "theta", "--h", "3", "--max-cell-dim", "5")
    assert code == 2
    monkeypatch.setenv("WITTEN_MAX_CELL_DIM", "5")
    assert run(capsys, "example", "theta", "--h", "3")[0] == 2
    assert run(capsys, "example", "theta", "--h", "3", "--max-cell-dim", "100000")[0] == 0


def test_selftest_small(tmp_path, capsys):
    ce = tmp_path / "ce.json"
    argv = ["selftest", "--seed", "4", "--cases", "6", "--counterexample", str(ce)]
    code, out, _ = run(capsys, *argv)
    r = report(out)
    assert code == 0 and r["ok"] and not ce.exists()
    assert set(r["suites"]) >= {"double_complex", "vanishing", "periodic", "exterior_power_cohomology"}
    assert run(capsys, *argv)[1] == out


def test_selftest_corrupt_sign(tmp_path, capsys):
    ce = tmp_path / "ce.json"
    code, out, _ = run(capsys, "selftest", "--cases", "6", "--debug-corrupt-sign", "--counterexample", str(ce))
    r = report(out)
    assert code == 1 and r["suites"]["double_complex"]["failed"] > 0
    saved = json.loads(ce.read_text())
    assert saved["suite"] == r["first_failure"] and saved["instance"] is not None


def test_console_script_exit_code(tmp_path):
    out = subprocess.run([sys.executable, "-m", "keuler.cli", "example", "theta", "--h", "1"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["c_W"] == -1
    out = subprocess.run([sys.executable, "-m", "keuler.cli", "validate", str(tmp_path / "nope.json")], capture_output=True, text=True)
    assert out.returncode == 2
