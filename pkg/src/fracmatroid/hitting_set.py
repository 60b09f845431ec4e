"""Black-box hitting set for second-order blow-ups with rank-two skew-symmetric coefficients.

Each tuple assigns to line i the 2x2 matrix ``T_i = V_i V_i^T`` with
``V_i = [[a^w_i, b^w_i], [c^w_i, d^w_i]]`` for one weight assignment w and one
point (a, b, c, d) in S^4, where S = {0, 1, ..., 2nD} and D bounds the weights.
An instance has full non-commutative rank iff some tuple makes
``sum_i T_i (x) A_i`` nonsingular.

The stream runs w outermost and (a, b, c, d) in odometer order (d fastest).
Witness search evaluates the stream in vectorised blocks but reports the
first witness in stream order.
"""

from __future__ import annotations

import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .algebra import FieldTooSmall, check_prime, det
from .instance import Instance
from .kernels import batched_det_mod
from .weights import WeightAssignment

log = logging.getLogger(__name__)


class SearchResult(enum.Enum):
    NO_WITNESS = "no_witness"
    INDETERMINATE = "indeterminate"


NO_WITNESS = SearchResult.NO_WITNESS
INDETERMINATE = SearchResult.INDETERMINATE


@dataclass(frozen=True)
class HittingTuple:
    w: tuple[int, ...]
    abcd: tuple[int, int, int, int]
    T: np.ndarray  # (m, 2, 2)
    prime: int
    index: int = -1

    def to_json(self) -> dict:
        return {
            "w": list(self.w),
            "abcd": list(self.abcd),
            "T": self.T.tolist(),
            "prime": self.prime,
        }


def tuple_matrices(w: Sequence[int], abcd: Sequence[int], p: int) -> np.ndarray:
    """The m matrices V_i V_i^T for one (w, (a, b, c, d))."""
    a, b, c, d = (int(x) % p for x in abcd)
    out = np.empty((len(w), 2, 2), dtype=np.int64)
    for i, wi in enumerate(w):
        v = [[pow(a, wi, p), pow(b, wi, p)], [pow(c, wi, p), pow(d, wi, p)]]
        out[i, 0, 0] = (v[0][0] * v[0][0] + v[0][1] * v[0][1]) % p
        out[i, 1, 1] = (v[1][0] * v[1][0] + v[1][1] * v[1][1]) % p
        out[i, 0, 1] = out[i, 1, 0] = (v[0][0] * v[1][0] + v[0][1] * v[1][1]) % p
    return out


def substituted_matrix(inst: Instance, T: np.ndarray) -> np.ndarray:
    """``sum_i T_i (x) A_i`` over F_p."""
    p = inst.p
    n = inst.n
    out = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for t, a in zip(T, inst.coeffs):
        out = (out + (t[:, None, :, None] * a[None, :, None, :]).reshape(2 * n, 2 * n) % p) % p
    return out


def _restartable(family) -> Callable[[], Iterable[WeightAssignment]]:
    if callable(family):
        return family
    family = tuple(family)
    return lambda: family


@dataclass(frozen=True)
class _Block:
    w: tuple[int, ...]
    side: int  # |S|
    offset: int  # global index of the block's first tuple


class HittingStream:
    """Restartable, lazily generated hitting set over a weight family.

    ``family`` is a sequence of weight assignments or a zero-argument callable
    returning a fresh iterable.  With ``max_weight`` given, S is sized once
    from it; otherwise S grows with the running maximum of the weights seen so
    far.
    """

    def __init__(self, m: int, n: int, family, p: int, max_weight: int | None = None):
        self.m = m
        self.n = n
        self.p = check_prime(p)
        self._family = _restartable(family)
        self.max_weight = max_weight
        if max_weight is not None:
            self._check_field(max_weight)

    def _check_field(self, D: int) -> int:
        side = 2 * self.n * D + 1
        if self.p < side:
            raise FieldTooSmall(f"need |F| >= 2nD + 1 = {side}, got p = {self.p}")
        return side

    def blocks(self) -> Iterator[_Block]:
        D = self.max_weight or 0
        side = self._check_field(D) if D else 0
        offset = 0
        for w in self._family():
            w = tuple(w)
            if len(w) != self.m:
                raise ValueError(f"weight assignment {w} has length {len(w)}, expected {self.m}")
            if max(w, default=0) > D:
                if self.max_weight is not None:
                    raise ValueError(f"weight {max(w)} exceeds the declared bound {self.max_weight}")
                D = max(w)
                new_side = self._check_field(D)
                if side:
                    log.info("hitting set: S resized from %d to %d at w = %s", side, new_side, w)
                side = new_side
            yield _Block(w, side, offset)
            offset += side**4

    def __iter__(self) -> Iterator[HittingTuple]:
        for blk in self.blocks():
            for k, abcd in enumerate(np.ndindex(blk.side, blk.side, blk.side, blk.side)):
                yield HittingTuple(blk.w, abcd, tuple_matrices(blk.w, abcd, self.p), self.p, blk.offset + k)

    def size(self) -> int:
        return sum(blk.side**4 for blk in self.blocks())


def gen_hitting_set(m: int, n: int, family, p: int, max_weight: int | None = None) -> HittingStream:
    return HittingStream(m, n, family, p, max_weight)


def _block_dets(inst: Instance, w: Sequence[int], side: int, start: int, stop: int) -> np.ndarray:
    """det(sum T_i (x) A_i) for odometer positions [start, stop) of one w block."""
    p = inst.p
    n = inst.n
    idx = np.arange(start, stop, dtype=np.int64)
    digits = [(idx // side ** (3 - k)) % side for k in range(4)]
    base = np.arange(side, dtype=np.int64)
    total = np.zeros((len(idx), 2 * n, 2 * n), dtype=np.int64)
    for wi, a in zip(w, inst.coeffs):
        table = np.array([pow(int(s), int(wi), p) for s in base], dtype=np.int64)
        va, vb, vc, vd = (table[dg] for dg in digits)
        t00 = (va * va % p + vb * vb % p) % p
        t11 = (vc * vc % p + vd * vd % p) % p
        t01 = (va * vc % p + vb * vd % p) % p
        for r, c, t in ((0, 0, t00), (0, 1, t01), (1, 0, t01), (1, 1, t11)):
            blk = total[:, r * n : (r + 1) * n, c * n : (c + 1) * n]
            blk += t[:, None, None] * a[None] % p
            blk %= p
    return batched_det_mod(total, p)


def find_witness(
    inst: Instance,
    stream: HittingStream,
    budget: int | None = None,
    chunk: int = 1 << 14,
    workers: int = 1,
    exhaustive: bool = False,
    trials: int = 3,
    rng: np.random.Generator | None = None,
) -> HittingTuple | SearchResult:
    """First tuple in stream order with a nonsingular substituted matrix.

    ``NO_WITNESS`` means the whole stream was searched; ``INDETERMINATE``
    means ``budget`` tuples were evaluated without reaching the end (blocks
    skipped by the identity test do not count against the budget).

    Unless ``exhaustive``, a w block is skipped when det(sum T_i (x) A_i),
    as a polynomial in (a, b, c, d), vanishes at ``trials`` random points of
    F_p.  A skipped block holds a witness only with probability at most
    (4nD / p) ** trials; returned witnesses are always exact.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    if (stream.m, stream.n, stream.p) != (inst.m, inst.n, inst.p):
        raise ValueError("stream was generated for a different (m, n, p)")
    if inst.n == 0:
        blk = next(iter(stream.blocks()), None)
        if blk is None:
            return NO_WITNESS
        return HittingTuple(blk.w, (0, 0, 0, 0), tuple_matrices(blk.w, (0, 0, 0, 0), inst.p), inst.p, 0)
    searched = 0
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for blk in stream.blocks():
            if not exhaustive and block_vanishes(inst, blk.w, trials, rng):
                log.debug("hitting set: block w = %s skipped by identity test", blk.w)
                continue
            total = blk.side**4
            pos = 0
            while pos < total:
                if budget is not None and searched >= budget:
                    return INDETERMINATE
                spans = []
                for _ in range(max(1, workers)):
                    if pos >= total:
                        break
                    stop = min(total, pos + chunk)
                    if budget is not None:
                        stop = min(stop, pos + budget - searched)
                    spans.append((pos, stop))
                    searched += stop - pos
                    pos = stop
                    if budget is not None and searched >= budget:
                        break
                run = lambda s: _block_dets(inst, blk.w, blk.side, *s)  # noqa: E731
                dets = pool.map(run, spans) if pool else map(run, spans)
                for (s0, _), d in zip(spans, dets):
                    hit = np.flatnonzero(d)
                    if hit.size:
                        k = s0 + int(hit[0])
                        abcd = tuple(int(k // blk.side ** (3 - j) % blk.side) for j in range(4))
                        return HittingTuple(blk.w, abcd, tuple_matrices(blk.w, abcd, inst.p), inst.p, blk.offset + k)
        return NO_WITNESS
    finally:
        if pool:
            pool.shutdown()


def block_vanishes(inst: Instance, w: Sequence[int], trials: int, rng: np.random.Generator) -> bool:
    """Randomized test that det(sum T_i (x) A_i) is the zero polynomial in (a, b, c, d)."""
    for _ in range(max(1, trials)):
        abcd = rng.integers(0, inst.p, size=4)
        if det(substituted_matrix(inst, tuple_matrices(w, abcd, inst.p)), inst.p) != 0:
            return False
    return True


def sample_hitting_set(stream: HittingStream, count: int, rng: np.random.Generator) -> list[HittingTuple]:
    """``count`` tuples drawn uniformly (with replacement) from the stream."""
    blocks = list(stream.blocks())
    if not blocks:
        return []
    sizes = np.array([float(blk.side) ** 4 for blk in blocks])
    picks = rng.choice(len(blocks), size=count, p=sizes / sizes.sum())
    out = []
    for k in picks:
        blk = blocks[int(k)]
        abcd = tuple(int(v) for v in rng.integers(0, blk.side, size=4))
        out.append(HittingTuple(blk.w, abcd, tuple_matrices(blk.w, abcd, stream.p), stream.p))
    return out


def is_witness(inst: Instance, tup: HittingTuple) -> bool:
    return det(substituted_matrix(inst, tup.T), inst.p) != 0
