import pytest

from fracmatroid import kernels
from fracmatroid.selfcheck import injected_fault, run_check


@pytest.mark.parametrize("number", [4, 9])
def test_injected_pfaffian_fault_is_caught(number):
    assert run_check(number, "small").passed
    res = run_check(number, "small", fault="pfaffian")
    assert not res.passed and res.failures


def test_fault_is_removed_afterwards():
    original = kernels.pfaffian_mod
    with injected_fault("pfaffian"):
        assert kernels.pfaffian_mod is not original
    assert kernels.pfaffian_mod is original


def test_unknown_fault_rejected():
    with pytest.raises(ValueError):
        with injected_fault("det"):
            pass


@pytest.mark.parametrize("number", [1, 2, 3, 5, 7, 8])
def test_small_scale_checks_pass(number):
    res = run_check(number, "small", seed=1)
    assert res.passed, res.line()
    assert f"{number}." in res.line()
