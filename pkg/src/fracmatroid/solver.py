"""Perfect fractional linear matroid matching via isolation and determinant degrees.

For each candidate weight assignment w (made distinct first):

* ``W = deg det Ã_w(1)``; for isolating w this is 8 times the optimal
  weight of a perfect matching,
* for every line e the perturbed probe ``W^e`` equals ``4W + 8 y_e`` where y
  is the isolated optimum, which reads off y one coordinate at a time,
* the candidate is accepted only if ``|y| = n/2`` and ``det Ã_w(y) != 0``.

The final check is what makes accepted outputs correct; probe failures only
cost completeness.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .algebra import NEG_INF, is_nonzero_poly_det, total_degree_of_det
from .instance import HalfIntegral, Instance, build_Atilde, ncrank_estimate
from .weights import (
    FamilyParams,
    WeightAssignment,
    family_max_weight,
    gen_family,
    make_distinct,
    perturb,
    shift_for_input_weights,
)

log = logging.getLogger(__name__)


class DegreeProbeError(RuntimeError):
    """A perturbed degree fell outside {4W, 4W+4, 4W+8}."""


@dataclass
class SolveReport:
    outcome: str  # "matching" or "none"
    y2: HalfIntegral | None = None
    weights: WeightAssignment | None = None
    W: float | None = None
    W_e: list[float] = field(default_factory=list)
    attempts: int = 0
    trials: int = 3
    prime: int = 0
    seed: int = 0
    precheck_rank: int | None = None
    log: list[str] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.outcome == "matching"

    def to_json(self) -> dict:
        def num(v):
            return None if v is None else ("-inf" if v == NEG_INF else int(v))

        return {
            "outcome": self.outcome,
            "y": None if self.y2 is None else list(self.y2),
            "witness_weights": None if self.weights is None else list(self.weights.w),
            "witness_tag": None if self.weights is None else self.weights.tag,
            "W": num(self.W),
            "W_e": [num(v) for v in self.W_e],
            "attempts": self.attempts,
            "trials": self.trials,
            "prime": self.prime,
            "seed": self.seed,
            "precheck_rank": self.precheck_rank,
        }


def degree_probe(inst: Instance, w: Sequence[int], trials: int = 3, rng: np.random.Generator | None = None) -> float:
    """Total degree of det Ã_w(1); ``-inf`` when the determinant vanishes."""
    return total_degree_of_det(build_Atilde(inst, tuple(w)), "randomized", trials, rng)


def classify(W: float, We: float) -> int:
    """Doubled y_e read from one perturbed probe."""
    for y2e in (2, 1, 0):
        if We == 4 * W + 4 * y2e:
            return y2e
    raise DegreeProbeError(f"W^e = {We} is not one of 4W, 4W+4, 4W+8 for W = {W}")


def extract_candidate(
    inst: Instance,
    w: Sequence[int],
    W: float,
    trials: int = 3,
    rng: np.random.Generator | None = None,
) -> tuple[HalfIntegral, list[float]]:
    """Read y off the perturbed probes; returns (doubled y, probe degrees)."""
    if not W > 0:
        raise ValueError("candidate extraction needs W > 0")
    rng = rng if rng is not None else np.random.default_rng(0)
    probes = [degree_probe(inst, perturb(w, e), trials, rng) for e in range(inst.m)]
    return tuple(classify(W, We) for We in probes), probes


def verify_candidate(
    inst: Instance, w: Sequence[int], y2: HalfIntegral, trials: int = 3, rng: np.random.Generator | None = None
) -> bool:
    """|y| = n/2 and det Ã_w(y) is a nonzero polynomial."""
    if sum(y2) != inst.n:
        return False
    return is_nonzero_poly_det(build_Atilde(inst, tuple(w), tuple(y2)), trials, rng)


@dataclass
class _Attempt:
    index: int
    weights: WeightAssignment
    W: float = NEG_INF
    W_e: list[float] = field(default_factory=list)
    y2: HalfIntegral | None = None
    ok: bool = False
    note: str = ""


def _attempt(inst: Instance, index: int, w: WeightAssignment, trials: int, seed: int) -> _Attempt:
    rng = np.random.default_rng([seed, index])
    wd = make_distinct(w)
    res = _Attempt(index, wd)
    res.W = degree_probe(inst, wd, trials, rng)
    if not res.W > 0:
        res.note = f"W={res.W}"
        return res
    try:
        res.y2, res.W_e = extract_candidate(inst, wd, res.W, trials, rng)
    except DegreeProbeError as exc:
        res.note = str(exc)
        return res
    res.ok = verify_candidate(inst, wd, res.y2, trials, rng)
    res.note = "verified" if res.ok else f"candidate {res.y2} rejected"
    return res


def solve(
    inst: Instance,
    family: Iterable[WeightAssignment],
    trials: int = 3,
    seed: int = 0,
    parallel: bool = False,
    workers: int = 4,
    precheck: bool = True,
) -> SolveReport:
    """Return the first verified perfect matching in family order, else outcome ``none``.

    With ``precheck`` the family loop is skipped when random second-order
    blow-ups never reach full rank, in which case no perfect matching exists
    (up to the same one-sided error as every randomized probe).
    """
    report = SolveReport("none", trials=trials, prime=inst.p, seed=seed)
    if precheck:
        nr = ncrank_estimate(inst, trials, np.random.default_rng([seed, 2**31]))
        report.precheck_rank = nr
        if nr < inst.n:
            report.log.append(f"precheck: nc-rank estimate {nr} < n = {inst.n}")
            return report

    def finish(att: _Attempt) -> SolveReport:
        report.outcome = "matching"
        report.y2 = att.y2
        report.weights = att.weights
        report.W = att.W
        report.W_e = att.W_e
        report.attempts = att.index + 1
        return report

    it = iter(family)
    if not parallel:
        count = 0
        for index, w in enumerate(it):
            count = index + 1
            att = _attempt(inst, index, w, trials, seed)
            report.log.append(f"{index}: {att.note}")
            log.debug("attempt %d (%s): %s", index, w.tag, att.note)
            if att.ok:
                return finish(att)
        report.attempts = count
        return report

    index = 0
    with ThreadPoolExecutor(max_workers=workers) as pool:
        while True:
            batch = []
            for w in it:
                batch.append((index, w))
                index += 1
                if len(batch) == workers:
                    break
            if not batch:
                break
            results = list(pool.map(lambda iw: _attempt(inst, iw[0], iw[1], trials, seed), batch))
            for att in results:
                report.log.append(f"{att.index}: {att.note}")
            winners = [a for a in results if a.ok]
            if winners:
                return finish(min(winners, key=lambda a: a.index))
    report.attempts = index
    return report


def solve_weighted(
    inst: Instance,
    v: Sequence[int],
    family: Iterable[WeightAssignment],
    max_weight: int | None = None,
    **kwargs,
) -> SolveReport:
    """Perfect matching maximising the input weights v, via the shifted family N*v + w."""
    if len(v) != inst.m:
        raise ValueError(f"expected {inst.m} input weights, got {len(v)}")
    shifted = shift_for_input_weights(v, family, inst.n, max_weight)
    return solve(inst, shifted, **kwargs)


def resolve_mode(mode: str, m: int) -> str:
    """``auto`` picks the exhaustive grid for m <= 4 and the power-residue family above."""
    if mode == "auto":
        return "brute" if m <= 4 else "gtv"
    if mode not in ("brute", "gtv"):
        raise ValueError(f"unknown mode {mode!r}")
    return mode


def solve_instance(
    inst: Instance,
    mode: str = "auto",
    input_weights: Sequence[int] | None = None,
    params: FamilyParams | None = None,
    **kwargs,
) -> SolveReport:
    """Build the weight family for ``inst`` and run :func:`solve` (or its weighted variant)."""
    mode = resolve_mode(mode, inst.m)
    params = replace(params, mode=mode) if params is not None else FamilyParams(mode)
    family = gen_family(inst.m, params)
    if input_weights is None:
        return solve(inst, family, **kwargs)
    return solve_weighted(inst, input_weights, family, family_max_weight(inst.m, params), **kwargs)
