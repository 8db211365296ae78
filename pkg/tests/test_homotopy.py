import pytest

from keuler.core.bicomplex import HomotopyForm, htilde_matrix
from keuler.core.euler import ke_class
from keuler.core.forms import check_closed, is_nondegenerate, random_instance
from keuler.core.homotopy import (
    check_stabilization,
    d_of_h,
    exp_neg_htilde,
    pushforward_form,
    random_homotopy_form,
    stabilize,
    verify_homotopy_invariance,
)
from keuler.linalg import RMatrix
from keuler.scenarios import genus_one_instance, theta_instance


def _instances_rank1_ge2(count):
    out, s = [], 0
    while len(out) < count:
        inst = random_instance(s)
        if inst.F.rank1 >= 2:
            out.append(inst)
        s += 1
    return out


def test_zero_homotopy_is_trivial():
    inst = theta_instance(2)
    rep = verify_homotopy_invariance(inst, HomotopyForm(inst.m, 2, 2))
    assert rep.ok and rep.literal_ok


def test_rank1_one_forces_zero_htilde():
    inst = genus_one_instance(2)
    hf = random_homotopy_form(inst.F, inst.m, 0)
    assert not hf.coefficients
    assert htilde_matrix(inst.F, hf, 0, 0).is_zero()
    assert verify_homotopy_invariance(inst, hf).ok


def test_exp_inverse():
    inst = _instances_rank1_ge2(1)[0]
    hf = random_homotopy_form(inst.F, inst.m, 1)
    for i in range(inst.m + 1):
        for n in range(0, 6):
            E, Einv = exp_neg_htilde(inst, hf, i, n), exp_neg_htilde(inst, hf, i, n, sign=1)
            assert E @ Einv == RMatrix.identity(E.nrows)


def test_theta_h2_random_homotopy():
    inst = theta_instance(2)
    for seed in range(3):
        rep = verify_homotopy_invariance(inst, random_homotopy_form(inst.F, inst.m, seed))
        assert rep.ok


@pytest.mark.parametrize("inst", _instances_rank1_ge2(6), ids=lambda i: f"r{i.F.rank1}{i.F.rank0}m{i.m}")
def test_random_homotopy_invariance(inst):
    hf = random_homotopy_form(inst.F, inst.m, 7)
    rep = verify_homotopy_invariance(inst, hf)
    assert rep.intertwining_ok and rep.ke_equal
    a2 = inst.a - d_of_h(inst.F, hf)
    from keuler.core.forms import Instance

    assert check_closed(Instance(inst.F, a2))
    # the opposite orientation only holds when d~(h) vanishes
    assert rep.literal_ok == d_of_h(inst.F, hf).is_zero()


def test_stabilize_zero_is_identity():
    inst = theta_instance(1)
    stab = stabilize(inst, 0)
    assert stab.instance is inst and pushforward_form(stab) == inst.a


@pytest.mark.parametrize("builder,s,expected", [(lambda: theta_instance(1), 1, -1), (lambda: genus_one_instance(3), 2, -2)])
def test_stabilization_examples(builder, s, expected):
    inst = builder()
    stab = stabilize(inst, s, seed=3)
    assert stab.instance.F.rank0 == inst.F.rank0 + s
    assert pushforward_form(stab) == inst.a
    assert check_closed(stab.instance) and is_nondegenerate(stab.instance)
    assert ke_class(stab.instance).virtual_rank == expected


@pytest.mark.parametrize("seed", range(4))
def test_stabilization_random(seed):
    inst = random_instance(seed, max_rank=2, max_m=2)
    rep = check_stabilization(inst, 1, seed)
    assert rep["ok"] and rep["pushforward_ok"] and rep["nondegenerate"]
