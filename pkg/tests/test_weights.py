import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracmatroid.corpus import random_instance
from fracmatroid.oracle import Polytope, is_isolating
from fracmatroid.weights import (
    DEFAULT_CAP,
    FamilyParams,
    WeightAssignment,
    base_family,
    family_max_weight,
    gen_family,
    make_distinct,
    perturb,
    rounds,
    shift_for_input_weights,
)


def test_make_distinct_examples():
    assert make_distinct((1, 1)).w == (5, 6)
    assert make_distinct((1, 2, 1)).w == (10, 20, 12)
    assert make_distinct((7,)).w == (8,)


def test_perturb_examples():
    assert perturb((1, 2), 0).w == (5, 8)
    assert perturb((3, 1, 2), 2).w == (12, 4, 9)
    with pytest.raises(IndexError):
        perturb((1, 2), 2)


def test_shift_example():
    out = list(shift_for_input_weights((1, 0), [WeightAssignment((1, 2))], n=2, max_weight=2))
    assert [w.w for w in out] == [(6, 2)]
    with pytest.raises(ValueError):
        list(shift_for_input_weights((-1, 0), [WeightAssignment((1, 2))], n=2))


def test_weights_must_be_positive():
    with pytest.raises(ValueError):
        WeightAssignment((1, 0))


def test_brute_family_size_and_range():
    fam = list(gen_family(2, FamilyParams(mode="brute", K=3)))
    assert len(fam) == 9
    assert {w.w for w in fam} == {(a, b) for a in range(1, 4) for b in range(1, 4)}
    assert family_max_weight(2, FamilyParams(mode="brute")) == 7


def test_gtv_family_is_deterministic_and_bounded():
    params = FamilyParams()
    a = [w.w for w in gen_family(3, params)]
    b = [w.w for w in gen_family(3, params)]
    assert a == b
    assert len(a) == len(base_family(3, params.T, params.Q)) ** rounds(3)
    assert max(max(w) for w in a) <= family_max_weight(3, params)
    assert min(min(w) for w in a) >= 1


def test_gtv_base_family_skips_divisible_moduli():
    tags = [tag for _, tag in base_family(2, 4, 3)]
    assert "t=2,q=2" not in tags and "t=3,q=3" not in tags and "t=4,q=2" not in tags
    assert "t=3,q=2" in tags


def test_family_cap_is_enforced():
    with pytest.raises(ValueError):
        next(gen_family(8, FamilyParams(T=8, Q=97, cap=1000)))
    assert family_max_weight(4, FamilyParams()) <= DEFAULT_CAP


def test_gtv_with_generous_parameters_isolates_k3(k3):
    poly = Polytope(k3)
    assert any(is_isolating(k3, w, polytope=poly) for w in gen_family(3, FamilyParams(T=8, Q=8)))


def test_brute_family_isolates_c4(c4):
    poly = Polytope(c4)
    assert any(is_isolating(c4, w, perfect=True, polytope=poly) for w in gen_family(4, FamilyParams(mode="brute")))


instances = st.builds(
    random_instance,
    m=st.integers(1, 4),
    n=st.integers(2, 4),
    seed=st.integers(0, 10**6),
)
weights4 = st.lists(st.integers(1, 6), min_size=4, max_size=4)


@settings(max_examples=40, deadline=None)
@given(inst=instances, raw=weights4)
def test_make_distinct_keeps_unique_maximiser(inst, raw):
    poly = Polytope(inst)
    w = raw[: inst.m]
    opt = poly.maximize(w)
    d = make_distinct(w)
    assert len(set(d.w)) == inst.m
    if len(opt.maximizers) == 1:
        assert poly.maximize(d.w).maximizers == opt.maximizers


@settings(max_examples=40, deadline=None)
@given(inst=instances, raw=weights4, data=st.data())
def test_perturb_keeps_isolated_maximiser(inst, raw, data):
    poly = Polytope(inst)
    w = raw[: inst.m]
    opt = poly.maximize(w)
    e = data.draw(st.integers(0, inst.m - 1))
    got = poly.maximize(perturb(w, e).w)
    # the perturbed optimum always lies in the original optimal face
    assert set(got.maximizers) <= set(opt.maximizers)
    if len(opt.maximizers) == 1:
        assert got.maximizers == opt.maximizers


@settings(max_examples=40, deadline=None)
@given(inst=instances, raw=weights4, v=st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_shift_respects_input_weights(inst, raw, v):
    poly = Polytope(inst)
    v = v[: inst.m]
    w = WeightAssignment(raw[: inst.m])
    (shifted,) = shift_for_input_weights(v, [w], inst.n)
    best_v = poly.maximize(v, perfect=True)
    got = poly.maximize(shifted.w, perfect=True)
    if best_v.value2 is None:
        assert got.value2 is None
        return
    assert set(got.maximizers) <= set(best_v.maximizers)
    ties = [y for y in best_v.maximizers]
    wvals = [int(np.dot(y, w.w)) for y in ties]
    assert {int(np.dot(y, w.w)) for y in got.maximizers} == {max(wvals)}
