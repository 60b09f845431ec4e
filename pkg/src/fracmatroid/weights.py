"""Candidate isolating weight families and the weight transforms used by the solver."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

log = logging.getLogger(__name__)

DEFAULT_CAP = 2**20

# Calibrated on the tiny corpus: smallest (T, Q) whose gtv family contained an
# oracle-certified isolating assignment for every instance with m <= 4.
DEFAULT_T = 2
DEFAULT_Q = 5


@dataclass(frozen=True)
class WeightAssignment:
    w: tuple[int, ...]
    tag: str = "user"

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(int(v) for v in self.w))
        if any(v <= 0 for v in self.w):
            raise ValueError(f"weights must be positive, got {self.w}")

    def __len__(self) -> int:
        return len(self.w)

    def __iter__(self):
        return iter(self.w)

    def __getitem__(self, i):
        return self.w[i]

    @property
    def max(self) -> int:
        return max(self.w, default=0)


@dataclass(frozen=True)
class FamilyParams:
    mode: str = "gtv"  # "gtv" or "brute"
    K: int | None = None  # brute grid side; default 3m + 1
    T: int = DEFAULT_T
    Q: int = DEFAULT_Q
    cap: int = DEFAULT_CAP

    def brute_side(self, m: int) -> int:
        # at most 3 bad values per coordinate, so 3m + 1 guarantees an isolating point
        return self.K if self.K is not None else 3 * m + 1


def _primes_upto(q: int) -> list[int]:
    return [k for k in range(2, q + 1) if all(k % d for d in range(2, math.isqrt(k) + 1))]


def rounds(m: int) -> int:
    return max(1, math.ceil(math.log2(2 * m))) if m > 0 else 1


def base_family(m: int, T: int, Q: int) -> list[tuple[tuple[int, ...], str]]:
    """Power-residue weights (t**i mod q)_{i=1..m} for 2 <= t <= T, q prime <= Q, q not dividing t."""
    out = []
    for t in range(2, T + 1):
        for q in _primes_upto(Q):
            if t % q == 0:
                continue
            out.append((tuple(pow(t, i, q) for i in range(1, m + 1)), f"t={t},q={q}"))
    return out


def round_multiplier(m: int, Q: int) -> int:
    # a later round can move w.(2y - 2y') by at most 2mQ
    return 2 * m * Q + 1


def family_max_weight(m: int, params: FamilyParams) -> int:
    if params.mode == "brute":
        return params.brute_side(m)
    big = round_multiplier(m, params.Q)
    L = rounds(m)
    return sum((params.Q - 1) * big ** (L - j) for j in range(1, L + 1))


def gen_family(m: int, params: FamilyParams | None = None) -> Iterator[WeightAssignment]:
    """Deterministic stream of candidate weight assignments for m lines."""
    params = params or FamilyParams()
    if family_max_weight(m, params) > params.cap:
        raise ValueError(
            f"family weights reach {family_max_weight(m, params)}, above the cap {params.cap}"
        )
    if params.mode == "brute":
        k = params.brute_side(m)
        for w in itertools.product(range(1, k + 1), repeat=m):
            yield WeightAssignment(w, "brute")
        return
    if params.mode != "gtv":
        raise ValueError(f"unknown family mode {params.mode!r}")
    base = base_family(m, params.T, params.Q)
    big = round_multiplier(m, params.Q)
    L = rounds(m)
    for combo in itertools.product(base, repeat=L):
        w = [0] * m
        for j, (bw, _) in enumerate(combo):
            scale = big ** (L - 1 - j)
            for i in range(m):
                w[i] += scale * bw[i]
        yield WeightAssignment(w, "gtv:" + "|".join(tag for _, tag in combo))


def make_distinct(w: WeightAssignment | Sequence[int]) -> WeightAssignment:
    """w'_i = m**2 * w_i + i (i 1-based): distinct entries, same unique maximiser."""
    vals = tuple(w)
    m = len(vals)
    tag = getattr(w, "tag", "user")
    return WeightAssignment(tuple(m * m * v + i for i, v in enumerate(vals, start=1)), tag)


def perturb(w: WeightAssignment | Sequence[int], e: int) -> WeightAssignment:
    """4w with one extra unit on line ``e`` (0-based)."""
    vals = tuple(w)
    if not 0 <= e < len(vals):
        raise IndexError(f"line index {e} out of range for {len(vals)} lines")
    return WeightAssignment(
        tuple(4 * v + (1 if i == e else 0) for i, v in enumerate(vals)), getattr(w, "tag", "user")
    )


def shift_for_input_weights(
    v: Sequence[int], family: Iterable[WeightAssignment], n: int, max_weight: int | None = None
) -> Iterator[WeightAssignment]:
    """N*v + w for every w in the family, with N = n * max family weight + 1."""
    v = tuple(int(x) for x in v)
    if any(x < 0 for x in v):
        raise ValueError("input weights must be non-negative")
    if max_weight is None:
        family = list(family)
        max_weight = max((w.max for w in family), default=0)
    big = n * max_weight + 1
    log.debug("input-weight shift N=%d", big)
    for w in family:
        if len(w) != len(v):
            raise ValueError("input weights and family have different lengths")
        yield WeightAssignment(tuple(big * a + b for a, b in zip(v, w)), f"shift(N={big})|{w.tag}")
