import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracmatroid.lattice import (
    NOT_IN_LATTICE,
    build_graph,
    constraint_matrix,
    decompose,
    lattice_is_trivial,
    near_shortest,
    shortest_length,
)


def incidence(num_vertices, edges):
    d = np.zeros((num_vertices, len(edges)), dtype=np.int64)
    for j, (s, t) in enumerate(edges):
        d[s, j] += 1
        d[t, j] += 1
    return d


C4 = incidence(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
K3 = incidence(3, [(0, 1), (1, 2), (0, 2)])


def kernel_vectors_up_to(d, radius):
    """Every nonzero integer kernel vector with L1 norm <= radius, by brute force."""
    m = d.shape[1]
    out = []
    for x in itertools.product(range(-radius, radius + 1), repeat=m):
        x = np.array(x)
        if 0 < np.abs(x).sum() <= radius and not (d @ x).any():
            out.append(tuple(int(v) for v in x))
    return out


@st.composite
def multigraph_matrices(draw, max_vertices=4, max_edges=5):
    nv = draw(st.integers(1, max_vertices))
    ne = draw(st.integers(1, max_edges))
    edges = [(draw(st.integers(0, nv - 1)), draw(st.integers(0, nv - 1))) for _ in range(ne)]
    return incidence(nv, edges)


def test_constraint_matrix_validation():
    with pytest.raises(ValueError):
        constraint_matrix([[1, 3], [1, -1]])
    with pytest.raises(ValueError):
        constraint_matrix([[1, 1], [0, 0]])
    constraint_matrix([[2, 1], [0, 1]])


def test_graph_reads_loops():
    g = build_graph([[2, 1], [0, 1]])
    assert g.edges == ((0, 0), (0, 1))


def test_lambda_examples():
    assert shortest_length(C4) == 4
    assert shortest_length(K3) == math.inf
    assert lattice_is_trivial(K3)
    # two parallel edges: x = (1, -1)
    assert shortest_length(incidence(2, [(0, 1), (0, 1)])) == 2
    # two loops at one vertex
    assert shortest_length(incidence(1, [(0, 0), (0, 0)])) == 2
    # triangle plus a pendant loop: the even closed walk uses the loop twice
    assert shortest_length(incidence(3, [(0, 1), (1, 2), (0, 2), (0, 0)])) == 4


def test_decompose_c4():
    res = decompose(C4, [1, -1, 1, -1])
    assert len(res) == 1
    np.testing.assert_array_equal(res[0].indicator, [1, -1, 1, -1])
    assert res[0].vertices[0] == res[0].vertices[-1]
    assert decompose(C4, [2, -2, 2, -2])[0].size == 4
    assert len(decompose(C4, [2, -2, 2, -2])) == 2


def test_decompose_rejects_non_kernel():
    assert decompose(C4, [1, 0, 0, 0]) is NOT_IN_LATTICE
    assert decompose(C4, [1, 1, 1, 1]) is NOT_IN_LATTICE
    assert decompose(K3, [1, -1, 1]) is NOT_IN_LATTICE
    assert decompose(C4, [0, 0, 0, 0]) == []
    with pytest.raises(ValueError):
        decompose(C4, [1, -1])


def test_near_shortest_c4():
    assert near_shortest(C4) == [(-1, 1, -1, 1), (1, -1, 1, -1)]
    with pytest.raises(ValueError):
        near_shortest(C4, 3)
    assert near_shortest(K3) == []


@settings(max_examples=80, deadline=None)
@given(d=multigraph_matrices())
def test_lambda_and_near_shortest_match_brute_force(d):
    lam = shortest_length(d)
    radius = 6
    brute = kernel_vectors_up_to(d, radius) if d.shape[1] <= 4 else None
    if brute is None:
        return
    if lam == math.inf:
        assert brute == []
        return
    if lam <= radius:
        assert lam == min(sum(map(abs, x)) for x in brute)
    if 2 * lam - 1 <= radius:
        want = sorted(x for x in brute if sum(map(abs, x)) < 2 * lam)
        assert near_shortest(d) == want


@settings(max_examples=80, deadline=None)
@given(d=multigraph_matrices(max_edges=6), data=st.data())
def test_decompose_round_trip(d, data):
    m = d.shape[1]
    pool = near_shortest(d)
    if not pool:
        return
    picks = data.draw(st.lists(st.sampled_from(pool), min_size=1, max_size=3))
    x = np.sum(np.array(picks), axis=0)
    res = decompose(d, x)
    assert res is not NOT_IN_LATTICE
    total = np.zeros(m, dtype=np.int64)
    for circ in res:
        ind = circ.indicator
        # conformal: never works against the sign of x
        assert np.all(ind * x >= 0)
        assert not (d @ ind).any()
        total += ind
    np.testing.assert_array_equal(total, x)


@settings(max_examples=60, deadline=None)
@given(d=multigraph_matrices(), data=st.data())
def test_decompose_detects_non_members(d, data):
    x = np.array(data.draw(st.lists(st.integers(-2, 2), min_size=d.shape[1], max_size=d.shape[1])))
    res = decompose(d, x)
    assert (res is NOT_IN_LATTICE) == bool((d @ x).any())
