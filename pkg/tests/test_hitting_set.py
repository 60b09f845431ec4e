import itertools

import numpy as np
import pytest

from fracmatroid.algebra import FieldTooSmall, balanced, det
from fracmatroid.corpus import graph_instance, random_instance
from fracmatroid.instance import Instance, blowup2_eval
from fracmatroid.hitting_set import (
    INDETERMINATE,
    NO_WITNESS,
    HittingTuple,
    block_vanishes,
    find_witness,
    gen_hitting_set,
    is_witness,
    sample_hitting_set,
    substituted_matrix,
    tuple_matrices,
)
from fracmatroid.weights import FamilyParams, WeightAssignment, family_max_weight, gen_family

SMALL_P = 101


def small(inst):
    """Same lines over F_101, so exhaustive scans stay tiny."""
    lift = np.vectorize(lambda v: balanced(int(v), inst.p))
    return Instance(inst.n, lift(inst.a) % SMALL_P, lift(inst.b) % SMALL_P, SMALL_P)


def test_tuple_matrices_example():
    np.testing.assert_array_equal(tuple_matrices((2,), (2, 0, 0, 3), 101), [[[16, 0], [0, 81]]])


def test_tuple_matrices_are_gram_matrices(rng):
    w = (1, 3, 2)
    abcd = tuple(int(v) for v in rng.integers(0, 97, size=4))
    got = tuple_matrices(w, abcd, 97)
    a, b, c, d = abcd
    for i, wi in enumerate(w):
        v = np.array([[a**wi, b**wi], [c**wi, d**wi]], dtype=object)
        np.testing.assert_array_equal(got[i], (v @ v.T) % 97)


def test_substituted_matrix_is_blowup(k3, rng):
    T = tuple_matrices((1, 2, 3), (5, 7, 11, 13), k3.p)
    np.testing.assert_array_equal(substituted_matrix(k3, T), blowup2_eval(k3, list(T)))


def test_stream_order_and_size():
    stream = gen_hitting_set(1, 2, [WeightAssignment((1,))], SMALL_P, max_weight=1)
    tuples = list(stream)
    assert stream.size() == len(tuples) == 5**4
    assert [t.abcd for t in tuples[:3]] == [(0, 0, 0, 0), (0, 0, 0, 1), (0, 0, 0, 2)]
    assert tuples[-1].abcd == (4, 4, 4, 4)
    assert [t.index for t in tuples] == list(range(len(tuples)))
    assert list(itertools.product(range(5), repeat=4)) == [t.abcd for t in tuples]


def test_stream_is_restartable():
    params = FamilyParams(mode="brute", K=2)
    stream = gen_hitting_set(1, 2, lambda: gen_family(1, params), SMALL_P, family_max_weight(1, params))
    first = [t.abcd for t in itertools.islice(stream, 10)]
    again = [t.abcd for t in itertools.islice(stream, 10)]
    assert first == again
    assert stream.size() == 2 * 9**4


def test_stream_grows_side_with_weights():
    fam = [WeightAssignment((1,)), WeightAssignment((3,))]
    sides = [blk.side for blk in gen_hitting_set(1, 2, fam, SMALL_P).blocks()]
    assert sides == [5, 13]
    with pytest.raises(ValueError):
        list(gen_hitting_set(1, 2, fam, SMALL_P, max_weight=2).blocks())


def test_field_too_small():
    with pytest.raises(FieldTooSmall):
        gen_hitting_set(2, 4, [WeightAssignment((1, 1))], 11, max_weight=3)
    with pytest.raises(FieldTooSmall):
        list(gen_hitting_set(1, 2, [WeightAssignment((30,))], 11).blocks())


def test_tuple_json():
    t = HittingTuple((2,), (2, 0, 0, 3), tuple_matrices((2,), (2, 0, 0, 3), 101), 101)
    assert t.to_json() == {"w": [2], "abcd": [2, 0, 0, 3], "T": [[[16, 0], [0, 81]]], "prime": 101}


def _first_witness_by_iteration(inst, stream):
    for tup in stream:
        if det(substituted_matrix(inst, tup.T), inst.p):
            return tup
    return None


@pytest.mark.parametrize(
    "inst",
    [
        graph_instance([(0, 1)], p=SMALL_P),
        graph_instance([(0, 1), (2, 3)], p=SMALL_P),
        graph_instance([(0, 1), (1, 2), (0, 2)], p=SMALL_P),
    ],
    ids=["one-line", "two-lines", "K3"],
)
def test_exhaustive_search_returns_first_witness_in_stream_order(inst):
    fam = [WeightAssignment((1,) * inst.m), WeightAssignment(tuple(range(1, inst.m + 1)))]
    stream = gen_hitting_set(inst.m, inst.n, fam, SMALL_P, max_weight=inst.m)
    want = _first_witness_by_iteration(inst, stream)
    got = find_witness(inst, stream, exhaustive=True, chunk=97)
    assert want is not None
    assert (got.index, got.w, got.abcd) == (want.index, want.w, want.abcd)
    assert is_witness(inst, got)


def test_identity_skip_agrees_when_block_is_alive(k3):
    inst = small(k3)
    fam = [WeightAssignment((1, 1, 1)), WeightAssignment((1, 2, 3))]
    stream = gen_hitting_set(3, 3, fam, SMALL_P, max_weight=3)
    fast = find_witness(inst, stream)
    slow = find_witness(inst, stream, exhaustive=True)
    assert fast.index == slow.index
    assert is_witness(inst, fast)


def test_deficient_instance_has_no_witness():
    star = graph_instance([(0, 1), (0, 2), (0, 3)], p=SMALL_P)
    fam = [WeightAssignment((1, 2, 3))]
    stream = gen_hitting_set(3, 4, fam, SMALL_P, max_weight=3)
    assert find_witness(star, stream) is NO_WITNESS
    assert block_vanishes(star, (1, 2, 3), 3, np.random.default_rng(0))
    for tup in sample_hitting_set(stream, 200, np.random.default_rng(1)):
        assert not is_witness(star, tup)


def test_budget_makes_search_indeterminate():
    inst = graph_instance([(0, 1), (2, 3)], p=SMALL_P)
    stream = gen_hitting_set(2, 4, [WeightAssignment((1, 2))], SMALL_P, max_weight=2)
    first = find_witness(inst, stream, exhaustive=True)
    assert find_witness(inst, stream, budget=first.index, exhaustive=True) is INDETERMINATE
    assert find_witness(inst, stream, budget=first.index + 1, exhaustive=True).index == first.index


def test_parallel_chunks_give_the_same_witness():
    inst = graph_instance([(0, 1), (1, 2), (0, 2)], p=SMALL_P)
    stream = gen_hitting_set(3, 3, [WeightAssignment((1, 2, 3))], SMALL_P, max_weight=3)
    a = find_witness(inst, stream, exhaustive=True, chunk=50)
    b = find_witness(inst, stream, exhaustive=True, chunk=50, workers=3)
    assert a.index == b.index


def test_stream_parameters_must_match(k3):
    stream = gen_hitting_set(2, 3, [WeightAssignment((1, 1))], k3.p, max_weight=1)
    with pytest.raises(ValueError):
        find_witness(k3, stream)


@pytest.mark.parametrize("seed", range(4))
def test_full_rank_random_instances_are_hit(seed):
    inst = small(random_instance(3, 2, seed))
    params = FamilyParams(mode="brute", K=2)
    stream = gen_hitting_set(3, 2, lambda: gen_family(3, params), SMALL_P, family_max_weight(3, params))
    res = find_witness(inst, stream)
    # a single line already spans F^2, so every such instance has full rank
    assert res is not NO_WITNESS and is_witness(inst, res)


def test_sampling_stays_inside_the_stream():
    fam = [WeightAssignment((1,)), WeightAssignment((2,))]
    stream = gen_hitting_set(1, 2, fam, SMALL_P, max_weight=2)
    for tup in sample_hitting_set(stream, 50, np.random.default_rng(0)):
        assert tup.w in {(1,), (2,)}
        assert all(0 <= v < 9 for v in tup.abcd)
