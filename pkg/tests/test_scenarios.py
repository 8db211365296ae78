import pytest

from keuler.core.euler import ke_class
from keuler.core.forms import check_closed, is_nondegenerate
from keuler.scenarios import (
    SpinScenario,
    bundle_case_closed_form,
    bundle_case_instance,
    bundle_case_t0,
    genus_one_instance,
    theta_instance,
    validated,
    witten_instance,
)


def test_t0_and_closed_form_examples():
    assert bundle_case_t0(1, 2) == 2 and bundle_case_t0(1, 3) == 3
    assert bundle_case_closed_form(1, 1, 2) == 3 - 4 == -1
    assert bundle_case_closed_form(1, 1, 3) == 4 - 6 == -2
    for h1 in range(4):
        assert bundle_case_closed_form(0, h1, 3) == (1 if h1 == 0 else 0)


@pytest.mark.parametrize("h", range(4))
def test_theta(h):
    inst = validated(theta_instance(h))
    assert ke_class(inst).virtual_rank == (-1) ** h


def test_theta_custom_pairing():
    inst = theta_instance(2, pairing=[[0, 1], [1, 1]])
    assert ke_class(inst).virtual_rank == 1
    with pytest.raises(ValueError):
        theta_instance(2, pairing=[[1, 1], [1, 1]])


def test_bundle_case_instances_are_valid():
    inst = bundle_case_instance(2, 2, 3, seed=1)
    assert check_closed(inst) and is_nondegenerate(inst)
    assert bundle_case_instance(2, 2, 3, seed=1).a == inst.a


def test_invalid_params():
    for bad in (lambda: genus_one_instance(1), lambda: witten_instance(-1), lambda: theta_instance(-2)):
        with pytest.raises(ValueError):
            bad()
    with pytest.raises(ValueError):
        bundle_case_closed_form(1, 1, 1)
    with pytest.raises(ValueError):
        SpinScenario("theta", r=3, h0=1, h1=1)
    with pytest.raises(ValueError):
        SpinScenario("elliptic")


@pytest.mark.parametrize(
    "sc",
    [
        SpinScenario("theta", 2, 2, 2),
        SpinScenario("genus-one", 4, 1, 1),
        SpinScenario("genus-one", 4, 0, 0),
        SpinScenario("witten", 3, 0, 2),
        SpinScenario("bundle-case", 3, 2, 2, {"seed": 4}),
    ],
    ids=lambda s: s.kind,
)
def test_scenario_expected(sc):
    assert ke_class(sc.instance()).virtual_rank == sc.expected()
