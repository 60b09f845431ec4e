"""Property-based acceptance suite: every check compares against an independent oracle.

Each ``check_*`` function returns a :class:`CheckResult`.  ``scale="full"``
runs the stated sample sizes; ``scale="small"`` runs a reduced version for
quick smoke tests.  :func:`injected_fault` deliberately breaks a kernel so
that the suite can be shown to detect it.
"""

from __future__ import annotations

import contextlib
import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from . import algebra, kernels
from .algebra import DEFAULT_PRIME, QuadPoly, QuadPolyMatrix, det, pfaffian, random_skew, total_degree_of_det
from .corpus import CorpusEntry, random_instance, tiny_corpus
from .hitting_set import NO_WITNESS, SearchResult, find_witness, gen_hitting_set, is_witness, sample_hitting_set
from .instance import Instance, blowup2_eval, build_Atilde, pfaffian_expansion_check, random_substitution
from .lattice import NOT_IN_LATTICE, _closed_walks, build_graph, decompose, near_shortest
from .oracle import Polytope, half_integral_grid
from .solver import degree_probe, solve_instance
from .weights import FamilyParams, gen_family, make_distinct


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    checked: int
    failures: list = field(default_factory=list)
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"; {self.detail}" if self.detail else ""
        return f"[{status}] {self.number}. {self.title}: {self.checked} checked, {len(self.failures)} failed{extra} ({self.seconds:.1f}s)"


def _count(scale: str, full: int, small: int) -> int:
    return full if scale == "full" else small


@contextlib.contextmanager
def injected_fault(kind: str | None) -> Iterator[None]:
    """Temporarily corrupt a kernel (``pfaffian``: off by one)."""
    if kind is None:
        yield
        return
    if kind != "pfaffian":
        raise ValueError(f"unknown fault {kind!r}")
    original = kernels.pfaffian_mod
    kernels.pfaffian_mod = lambda a, p: (original(a, p) + 1) % p
    try:
        yield
    finally:
        kernels.pfaffian_mod = original


_CORPUS: dict[int, list[tuple[CorpusEntry, Polytope]]] = {}


def corpus_with_polytopes(seed: int = 0) -> list[tuple[CorpusEntry, Polytope]]:
    if seed not in _CORPUS:
        _CORPUS[seed] = [(e, Polytope(e.inst)) for e in tiny_corpus(seed)]
    return _CORPUS[seed]


def _has_perfect(poly: Polytope) -> bool:
    return poly.maximize(perfect=True).value2 is not None


# ---------------------------------------------------------------------------


def check_rank_identity(scale: str = "full", seed: int = 0) -> CheckResult:
    """A quarter of the best blow-up rank equals the oracle's largest |y|."""
    rng = np.random.default_rng([seed, 1])
    total = _count(scale, 100, 20)
    fails = []
    for k in range(total):
        m = int(rng.integers(1, 6))
        n = int(rng.integers(2, 7))
        inst = random_instance(m, n, int(rng.integers(2**31)))
        best = max(rank_of(inst, random_substitution(inst, rng)) for _ in range(3))
        value2 = Polytope(inst).maximize().value2  # 2 * max |y|
        if best != 2 * value2:
            fails.append((m, n, best, value2))
    return CheckResult(1, "rank identity", not fails, total, fails)


def rank_of(inst: Instance, xs) -> int:
    return algebra.rank(blowup2_eval(inst, xs), inst.p)


def check_solver(scale: str = "full", seed: int = 0) -> CheckResult:
    """Solver output is oracle-feasible and perfect, or ``none`` exactly when no perfect matching exists."""
    corpus = corpus_with_polytopes(seed)
    if scale != "full":
        corpus = corpus[:: max(1, len(corpus) // 25)]
    fails = []
    yes = no = 0
    for entry, poly in corpus:
        rep = solve_instance(entry.inst, "auto", seed=seed)
        if _has_perfect(poly):
            yes += 1
            if not (rep.found and poly.contains(rep.y2) and sum(rep.y2) == entry.inst.n):
                fails.append((entry.name, rep.outcome, rep.y2))
        else:
            no += 1
            if rep.found:
                fails.append((entry.name, rep.outcome, rep.y2))
    enough = scale != "full" or (yes >= 50 and no >= 20)
    return CheckResult(2, "end-to-end solver", enough and not fails, len(corpus), fails, f"{yes} perfect, {no} without")


def check_degree_law(scale: str = "full", seed: int = 0) -> CheckResult:
    """deg det of the substituted blow-up is 8 times the optimum of an isolating weight."""
    rng = np.random.default_rng([seed, 3])
    want = _count(scale, 20, 5)
    pool = [(e, p) for e, p in corpus_with_polytopes(seed) if _has_perfect(p) and e.inst.m <= 4]
    fails = []
    pairs = 0
    attempts = 0
    while pairs < want and attempts < 50 * want:
        attempts += 1
        entry, poly = pool[int(rng.integers(len(pool)))]
        m = entry.inst.m
        w = tuple(int(v) for v in rng.choice(np.arange(1, 4 * m + 3), size=m, replace=False))
        opt = poly.maximize(w, perfect=True)
        if len(opt.maximizers) != 1:
            continue
        pairs += 1
        W = degree_probe(entry.inst, w, rng=rng)
        if W != 4 * opt.value2:  # 8 * (w . y) with value2 = w . 2y
            fails.append((entry.name, w, W, 4 * opt.value2))
    return CheckResult(3, "degree law", pairs >= want and not fails, pairs, fails)


def check_pfaffian_expansion(scale: str = "full", seed: int = 0) -> CheckResult:
    """Both sides of the Pfaffian expansion agree at random points for every y."""
    rng = np.random.default_rng([seed, 4])
    insts = [e for e, _ in corpus_with_polytopes(seed) if e.inst.m <= 3 and e.inst.n <= 4]
    if scale != "full":
        insts = insts[:: max(1, len(insts) // 8)]
    trials = _count(scale, 20, 5)
    fails = []
    checked = 0
    for entry in insts:
        for y2 in half_integral_grid(entry.inst.m):
            checked += 1
            if not pfaffian_expansion_check(entry.inst, tuple(int(v) for v in y2), trials, rng):
                fails.append((entry.name, tuple(y2)))
    return CheckResult(4, "pfaffian expansion", not fails, checked, fails, f"{len(insts)} instances")


def random_constraint_matrix(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    d = np.zeros((rows, cols), dtype=np.int64)
    for e in range(cols):
        u, v = rng.integers(rows, size=2)
        d[u, e] += 1
        d[v, e] += 1
    return d


def _circuit_pool(d: np.ndarray, max_len: int = 8) -> list[np.ndarray]:
    pool = set()
    for _, closed in _closed_walks(build_graph(d), max_len):
        pool |= closed
    return [np.array(v, dtype=np.int64) for v in sorted(pool)]


def _roundtrip_ok(d: np.ndarray, x: np.ndarray) -> bool:
    circuits = decompose(d, x)
    if circuits is NOT_IN_LATTICE:
        return False
    total = np.zeros_like(x)
    for c in circuits:
        ind = c.indicator
        if np.abs(ind).sum() != c.size:
            return False
        if np.any(ind * x < 0) or np.any(np.abs(ind) > np.abs(x)):
            return False
        total += ind
    return bool(np.array_equal(total, x))


def check_decompose_roundtrip(scale: str = "full", seed: int = 0) -> CheckResult:
    """Decomposition reproduces lattice vectors with conformal circuits and rejects the rest."""
    rng = np.random.default_rng([seed, 5])
    want_in = _count(scale, 200, 40)
    want_out = _count(scale, 100, 20)
    fails = []
    done_in = done_out = 0
    while done_in < want_in or done_out < want_out:
        d = random_constraint_matrix(rng, int(rng.integers(1, 7)), int(rng.integers(1, 9)))
        if done_in < want_in:
            pool = _circuit_pool(d)
            if pool:
                k = int(rng.integers(1, 4))
                x = sum(int(rng.choice([-2, -1, 1, 2])) * pool[int(rng.integers(len(pool)))] for _ in range(k))
                if np.any(x != 0):
                    done_in += 1
                    if not _roundtrip_ok(d, x):
                        fails.append(("in", d.tolist(), x.tolist()))
        if done_out < want_out:
            x = rng.integers(-3, 4, size=d.shape[1])
            if np.any(d @ x != 0):
                done_out += 1
                if decompose(d, x) is not NOT_IN_LATTICE:
                    fails.append(("out", d.tolist(), x.tolist()))
    return CheckResult(5, "decomposition round-trip", not fails, done_in + done_out, fails, f"{done_in} lattice, {done_out} non-lattice")


def _l1_sphere(m: int, radius: int) -> Iterator[tuple[int, ...]]:
    """All integer vectors of length m with L1 norm exactly ``radius``."""
    if m == 0:
        if radius == 0:
            yield ()
        return
    for head in range(-radius, radius + 1):
        for tail in _l1_sphere(m - 1, radius - abs(head)):
            yield (head,) + tail


def brute_near_shortest(d: np.ndarray, max_radius: int = 16) -> tuple[float, list[tuple[int, ...]]] | None:
    """(lambda, vectors below 2 lambda) by scanning L1 spheres outward; ``None`` past ``max_radius``."""
    m = d.shape[1]
    if np.linalg.matrix_rank(d.astype(float)) == m:
        return math.inf, []
    lam = None
    found = []
    for radius in range(1, max_radius + 1):
        if lam is not None and radius >= 2 * lam:
            return lam, sorted(found)
        for v in _l1_sphere(m, radius):
            if not np.any(d @ np.array(v, dtype=np.int64)):
                found.append(v)
                lam = radius if lam is None else lam
    return None


def check_near_shortest(scale: str = "full", seed: int = 0) -> CheckResult:
    """Walk enumeration matches exhaustive search; the count stays within rows**17.

    The two parts are reported separately.  The count bound is stated for
    graphs on n vertices and fails for n = 1: a single vertex carrying k >= 2
    loops already has k(k - 1) near-shortest vectors.
    """
    rng = np.random.default_rng([seed, 6])
    want = _count(scale, 60, 15)
    fails = []
    mismatches = over_bound = 0
    checked = 0
    while checked < want:
        rows = int(rng.integers(1, 5))
        d = random_constraint_matrix(rng, rows, int(rng.integers(1, 7)))
        ref = brute_near_shortest(d)
        if ref is None:
            continue
        checked += 1
        got = near_shortest(d)
        if got != ref[1]:
            mismatches += 1
            fails.append(("enumeration", d.tolist(), len(got), len(ref[1])))
        if len(got) > rows**17:
            over_bound += 1
            fails.append(("count bound", d.tolist(), len(got), rows**17))
    detail = f"{mismatches} enumeration mismatches, {over_bound} count-bound violations"
    return CheckResult(6, "near-shortest vectors", not fails, checked, fails, detail)


def check_isolation_coverage(scale: str = "full", seed: int = 0) -> CheckResult:
    """Both families contain an isolating assignment for every corpus instance."""
    corpus = [(e, p) for e, p in corpus_with_polytopes(seed) if e.inst.m <= 4]
    fails = []
    for mode in ("brute", "gtv"):
        params = FamilyParams(mode)
        for entry, poly in corpus:
            if not any(len(poly.maximize(w.w).maximizers) == 1 for w in gen_family(entry.inst.m, params)):
                fails.append((mode, entry.name))
    p = FamilyParams()
    return CheckResult(7, "isolation coverage", not fails, 2 * len(corpus), fails, f"gtv T={p.T} Q={p.Q}")


def check_hitting_set(scale: str = "full", seed: int = 0) -> CheckResult:
    """Full-rank instances have a witness in the stream; deficient ones never do."""
    rng = np.random.default_rng([seed, 8])
    corpus = [(e, p) for e, p in corpus_with_polytopes(seed) if e.inst.m <= 3 and e.inst.n <= 4]
    full_rank = [e for e, p in corpus if _has_perfect(p)]
    deficient = [e for e, p in corpus if not _has_perfect(p)]
    n_full = _count(scale, max(20, len(full_rank)), 5)
    n_def = _count(scale, max(10, len(deficient)), 3)
    samples = _count(scale, 1000, 200)
    full_rank, deficient = full_rank[:n_full], deficient[:n_def]
    fails = []
    params = FamilyParams("brute")
    for entry in full_rank:
        inst = entry.inst
        stream = gen_hitting_set(inst.m, inst.n, lambda m=inst.m: gen_family(m, params), inst.p, params.brute_side(inst.m))
        tup = find_witness(inst, stream, rng=rng)
        if isinstance(tup, SearchResult) or not is_witness(inst, tup):
            fails.append(("full", entry.name, tup))
    for entry in deficient:
        inst = entry.inst
        stream = gen_hitting_set(inst.m, inst.n, lambda m=inst.m: gen_family(m, params), inst.p, params.brute_side(inst.m))
        if any(is_witness(inst, t) for t in sample_hitting_set(stream, samples, rng)):
            fails.append(("deficient", entry.name))
    enough = scale != "full" or (len(full_rank) >= 20 and len(deficient) >= 10)
    return CheckResult(
        8, "hitting set", enough and not fails, len(full_rank) + len(deficient), fails,
        f"{len(full_rank)} full-rank, {len(deficient)} deficient x {samples} samples",
    )


def random_quadpoly_matrix(rng: np.random.Generator, k: int, p: int = DEFAULT_PRIME) -> QuadPolyMatrix:
    entries = []
    for _ in range(k):
        row = []
        for _ in range(k):
            terms = {}
            for _ in range(int(rng.integers(0, 3))):
                e = tuple(int(v) for v in rng.integers(0, 3, size=4))
                terms[e] = int(rng.integers(-3, 4))
            row.append(QuadPoly(terms, p))
        entries.append(row)
    return QuadPolyMatrix(entries, p)


def check_algebra(scale: str = "full", seed: int = 0) -> CheckResult:
    """pf^2 = det on random skew matrices; both degree modes agree on tiny polynomial matrices."""
    rng = np.random.default_rng([seed, 9])
    p = DEFAULT_PRIME
    fails = []
    n_pf = _count(scale, 500, 100)
    for _ in range(n_pf):
        k = int(rng.integers(1, 5)) * 2
        a = random_skew(k, rng, p)
        if rng.random() < 0.2:  # exercise singular cases too
            j = int(rng.integers(k))
            a[j, :] = 0
            a[:, j] = 0
        if pfaffian(a, p) ** 2 % p != det(a, p):
            fails.append(("pf", a.tolist()))
    n_deg = _count(scale, 50, 10)
    small = [random_instance(1, 2, s) for s in range(3)]
    for c in range(n_deg):
        if c % 5 == 4:
            inst = small[c % 3]
            m = build_Atilde(inst, tuple(int(v) for v in rng.integers(1, 3, size=inst.m)))
        else:
            m = random_quadpoly_matrix(rng, int(rng.integers(1, 4)), p)
        a = total_degree_of_det(m, "deterministic")
        b = total_degree_of_det(m, "randomized", rng=rng)
        if a != b:
            fails.append(("deg", c, a, b))
    return CheckResult(9, "algebra kernels", not fails, n_pf + n_deg, fails)


CHECKS: dict[int, Callable[..., CheckResult]] = {
    1: check_rank_identity,
    2: check_solver,
    3: check_degree_law,
    4: check_pfaffian_expansion,
    5: check_decompose_roundtrip,
    6: check_near_shortest,
    7: check_isolation_coverage,
    8: check_hitting_set,
    9: check_algebra,
}


def run_check(number: int, scale: str = "full", seed: int = 0, fault: str | None = None) -> CheckResult:
    start = time.perf_counter()
    with injected_fault(fault):
        try:
            res = CHECKS[number](scale, seed)
        except Exception as exc:  # a crash is a failure, not an abort of the suite
            res = CheckResult(number, CHECKS[number].__name__, False, 0, [repr(exc)], "raised")
    res.seconds = time.perf_counter() - start
    return res


def run_all(scale: str = "full", seed: int = 0, fault: str | None = None, only=None) -> list[CheckResult]:
    return [run_check(k, scale, seed, fault) for k in sorted(CHECKS) if only is None or k in only]
