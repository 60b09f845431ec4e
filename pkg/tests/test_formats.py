import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracmatroid.corpus import random_instance, tiny_corpus
from fracmatroid.formats import (
    InputError,
    dumps_instance,
    dumps_matrix,
    instance_to_dict,
    load_matrix,
    loads_instance,
    parse_int_list,
)


def test_balanced_representatives(k3):
    doc = instance_to_dict(random_instance(2, 3, 5))
    assert all(abs(v) <= 2 for line in doc["lines"] for v in line["a"] + line["b"])
    assert instance_to_dict(k3)["prime"] == k3.p


@settings(max_examples=30, deadline=None)
@given(m=st.integers(0, 4), n=st.integers(2, 5), seed=st.integers(0, 10**6))
def test_instance_round_trip(m, n, seed):
    inst = random_instance(m, n, seed)
    text = dumps_instance(inst)
    back = loads_instance(text)
    assert back.n == inst.n and back.p == inst.p
    np.testing.assert_array_equal(back.coeffs, inst.coeffs)
    assert dumps_instance(back) == text


def test_corpus_is_reproducible():
    a = [(e.name, dumps_instance(e.inst)) for e in tiny_corpus(seed=3, random_count=5)]
    b = [(e.name, dumps_instance(e.inst)) for e in tiny_corpus(seed=3, random_count=5)]
    assert a == b


def test_matrix_formats():
    nested = load_matrix(json.dumps({"rows": 2, "cols": 2, "entries": [[1, 2], [1, 0]]}))
    flat = load_matrix(json.dumps({"rows": 2, "cols": 2, "entries": [1, 2, 1, 0]}))
    np.testing.assert_array_equal(nested, flat)
    np.testing.assert_array_equal(load_matrix(dumps_matrix(nested)), nested)
    with pytest.raises(InputError):
        load_matrix(json.dumps({"rows": 2, "cols": 2, "entries": [1, 2, 3]}))
    with pytest.raises(InputError):
        load_matrix("[]")


def test_int_lists():
    assert parse_int_list("1, 2,3\n") == [1, 2, 3]
    assert parse_int_list("[4, -5]") == [4, -5]
    assert parse_int_list("1\n2\n") == [1, 2]
    with pytest.raises(InputError):
        parse_int_list("1,x")
    with pytest.raises(InputError):
        parse_int_list("[1,")


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {"lines": []},
        {"n": -1, "lines": []},
        {"n": 2, "lines": [{"a": [1, 0]}]},
        {"n": 2, "lines": [{"a": [1, 0], "b": [0, 1.5]}]},
        {"n": 2, "prime": 4, "lines": []},
    ],
)
def test_rejected_instances(doc):
    with pytest.raises(InputError):
        loads_instance(json.dumps(doc))
