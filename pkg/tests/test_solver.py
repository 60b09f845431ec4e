import numpy as np
import pytest

from fracmatroid.algebra import NEG_INF
from fracmatroid.corpus import graph_instance, random_instance, tiny_corpus
from fracmatroid.instance import Instance
from fracmatroid.oracle import Polytope, is_isolating
from fracmatroid.solver import (
    DegreeProbeError,
    classify,
    degree_probe,
    extract_candidate,
    resolve_mode,
    solve,
    solve_instance,
    verify_candidate,
)
from fracmatroid.weights import FamilyParams, WeightAssignment, gen_family, make_distinct


def test_degree_probe_examples(one_line, line_in_f3, star):
    assert degree_probe(one_line, (1,)) == 8
    assert degree_probe(one_line, (3,)) == 24
    assert degree_probe(line_in_f3, (1,)) == NEG_INF
    assert degree_probe(star, (1, 2, 3)) == NEG_INF


@pytest.mark.parametrize(
    "edges,w",
    [
        ([(0, 1), (1, 2), (0, 2)], (1, 2, 3)),
        ([(0, 1), (1, 2), (2, 3), (3, 0)], (5, 6, 7, 9)),
        ([(0, 1), (2, 3), (1, 2)], (1, 1, 4)),
    ],
)
def test_degree_is_four_times_doubled_optimum(edges, w):
    inst = graph_instance(edges)
    poly = Polytope(inst)
    assert is_isolating(inst, w, perfect=True, polytope=poly)
    assert degree_probe(inst, w) == 4 * poly.maximize(w, perfect=True).value2


def test_classify():
    assert classify(10, 40) == 0
    assert classify(10, 44) == 1
    assert classify(10, 48) == 2
    with pytest.raises(DegreeProbeError):
        classify(10, 42)


def test_extract_on_k3(k3):
    w = make_distinct((1, 2, 3))
    W = degree_probe(k3, w)
    y2, probes = extract_candidate(k3, w, W)
    assert y2 == (1, 1, 1)
    assert probes == [4 * W + 4] * 3
    with pytest.raises(ValueError):
        extract_candidate(k3, w, NEG_INF)


def test_verify_candidate(k3, c4):
    w = make_distinct((1, 2, 3))
    assert verify_candidate(k3, w, (1, 1, 1))
    assert not verify_candidate(k3, w, (2, 1, 0))
    assert not verify_candidate(k3, w, (2, 0, 0))
    assert verify_candidate(c4, make_distinct((1, 1, 1, 1)), (2, 0, 2, 0))


def test_solve_examples(one_line, k3, line_in_f3, star):
    assert solve_instance(one_line).y2 == (2,)
    assert solve_instance(k3).y2 == (1, 1, 1)
    rep = solve_instance(line_in_f3)
    assert rep.outcome == "none" and rep.y2 is None
    assert not solve_instance(star).found


def test_solve_without_precheck_still_refuses(line_in_f3, star):
    fam = gen_family(1, FamilyParams(mode="brute"))
    assert solve(line_in_f3, fam, precheck=False).outcome == "none"
    assert solve(star, gen_family(3, FamilyParams(mode="brute", K=3)), precheck=False).outcome == "none"


def test_solve_gtv_family(k3, one_line):
    assert solve_instance(k3, mode="gtv").y2 == (1, 1, 1)
    assert solve_instance(one_line, mode="gtv").y2 == (2,)


def test_weighted_examples(k3, two_disjoint_lines, c4):
    # K3 has a single perfect matching, whatever the weights
    assert solve_instance(k3, input_weights=(2, 1, 1)).y2 == (1, 1, 1)
    assert solve_instance(two_disjoint_lines, input_weights=(2, 1)).y2 == (2, 2)
    assert solve_instance(c4, input_weights=(0, 3, 0, 3)).y2 == (0, 2, 0, 2)
    assert solve_instance(c4, input_weights=(3, 0, 3, 0)).y2 == (2, 0, 2, 0)


def test_weighted_length_mismatch(k3):
    with pytest.raises(ValueError):
        solve_instance(k3, input_weights=(1, 2))


def test_resolve_mode():
    assert resolve_mode("auto", 4) == "brute"
    assert resolve_mode("auto", 5) == "gtv"
    assert resolve_mode("gtv", 2) == "gtv"
    with pytest.raises(ValueError):
        resolve_mode("fast", 2)


def test_parallel_matches_sequential(c4):
    fam = list(gen_family(4, FamilyParams(mode="brute", K=3)))
    seq = solve(c4, fam, seed=3)
    par = solve(c4, fam, seed=3, parallel=True, workers=3)
    assert seq.y2 == par.y2
    assert seq.attempts == par.attempts
    assert seq.weights == par.weights


def test_report_json(k3):
    doc = solve_instance(k3).to_json()
    assert doc["outcome"] == "matching" and doc["y"] == [1, 1, 1]
    assert doc["W"] > 0 and len(doc["W_e"]) == 3
    none = solve_instance(Instance.from_lines([([1, 0, 0], [0, 1, 0])], 3)).to_json()
    assert none["y"] is None and none["witness_weights"] is None


@pytest.mark.parametrize("entry", tiny_corpus(seed=1, random_count=15)[:40], ids=lambda e: e.name)
def test_solver_agrees_with_oracle(entry):
    inst = entry.inst
    poly = Polytope(inst)
    perfect = poly.maximize(None, perfect=True).value2 is not None
    rep = solve_instance(inst)
    assert rep.found == perfect
    if rep.found:
        assert poly.contains(rep.y2) and sum(rep.y2) == inst.n


@pytest.mark.parametrize("seed", range(6))
def test_weighted_solver_agrees_with_oracle(seed):
    g = np.random.default_rng(seed)
    inst = random_instance(3, 2 * int(g.integers(1, 3)), seed)
    v = [int(x) for x in g.integers(0, 4, size=3)]
    poly = Polytope(inst)
    best = poly.maximize(v, perfect=True)
    rep = solve_instance(inst, input_weights=v)
    assert rep.found == (best.value2 is not None)
    if rep.found:
        assert rep.y2 in best.maximizers


def test_tied_weight_is_made_distinct_before_probing(c4):
    rep = solve(c4, [WeightAssignment((1, 1, 1, 1))])
    assert rep.found and rep.attempts == 1
    assert len(set(rep.weights.w)) == 4
