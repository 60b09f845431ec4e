"""Brute-force ground truth for the fractional linear matroid matching polytope.

The polytope is cut out by one inequality per flat of the ground vectors
E = {a_1, b_1, ..., a_m, b_m}.  Its vertices are half-integral, so optimising
over the finite grid {0, 1/2, 1}^m is exact.  Everything here is exponential
and guarded accordingly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .algebra import rank
from .instance import HalfIntegral, Instance
from .kernels import matmul_mod, rref_mod

MAX_FLAT_VECTORS = 16
MAX_ENUM_LINES = 10


class GuardExceeded(RuntimeError):
    """Instance too large for exhaustive enumeration."""


@dataclass(frozen=True)
class Flat:
    mask: int  # bit k set <=> ground vector k is in the flat
    dim: int

    def members(self) -> tuple[int, ...]:
        return tuple(k for k in range(self.mask.bit_length()) if self.mask >> k & 1)


def _span_members(vectors: np.ndarray, mask: int, p: int) -> tuple[int, int]:
    """(closure mask, dimension) of the span of the masked vectors."""
    idx = [k for k in range(len(vectors)) if mask >> k & 1]
    if not idx:
        zero = np.all(vectors == 0, axis=1)
        return sum(1 << k for k in np.nonzero(zero)[0]), 0
    basis, piv = rref_mod(vectors[idx], p)
    if len(piv) == 0:
        zero = np.all(vectors == 0, axis=1)
        return sum(1 << k for k in np.nonzero(zero)[0]), 0
    resid = (vectors - matmul_mod(vectors[:, piv], basis, p)) % p
    inside = np.nonzero(~resid.any(axis=1))[0]
    return sum(1 << int(k) for k in inside), len(piv)


def enumerate_flats(inst: Instance) -> list[Flat]:
    """All flats of the ground vectors, smallest first."""
    vectors = inst.ground_vectors()
    if len(vectors) > MAX_FLAT_VECTORS:
        raise GuardExceeded(f"flat enumeration needs 2m <= {MAX_FLAT_VECTORS}, got {len(vectors)}")
    p = inst.p
    full = (1 << len(vectors)) - 1
    start, d0 = _span_members(vectors, 0, p)
    seen = {start: d0}
    frontier = [start]
    while frontier:
        nxt = []
        for mask in frontier:
            for k in range(len(vectors)):
                if mask >> k & 1:
                    continue
                closed, d = _span_members(vectors, mask | 1 << k, p)
                if closed not in seen:
                    seen[closed] = d
                    nxt.append(closed)
        frontier = nxt
    assert full in seen or not vectors.size
    return sorted((Flat(mask, d) for mask, d in seen.items()), key=lambda f: (f.dim, f.mask))


def dim_intersection(inst: Instance, flat: Flat, i: int) -> int:
    """dim(span(S) cap l_i) = dim S + 2 - dim(S + l_i)."""
    vectors = inst.ground_vectors()
    rows = [vectors[k] for k in flat.members()] + [inst.a[i], inst.b[i]]
    return flat.dim + 2 - rank(np.array(rows), inst.p)


def half_integral_grid(m: int) -> np.ndarray:
    """All doubled vectors in {0,1,2}^m in lexicographic order."""
    if m > MAX_ENUM_LINES:
        raise GuardExceeded(f"enumeration needs m <= {MAX_ENUM_LINES}, got {m}")
    return np.array(list(itertools.product(range(3), repeat=m)), dtype=np.int64).reshape(3**m, m)


@dataclass(frozen=True)
class Optimum:
    """Maximum of a linear objective; values are doubled (objective of 2y)."""

    value2: int | None
    maximizers: list[HalfIntegral]

    @property
    def value(self) -> Fraction | None:
        return None if self.value2 is None else Fraction(self.value2, 2)


class Polytope:
    """Flat inequalities of one instance, with cached feasible grid points."""

    def __init__(self, inst: Instance):
        if inst.m > MAX_ENUM_LINES:
            raise GuardExceeded(f"enumeration needs m <= {MAX_ENUM_LINES}, got {inst.m}")
        self.inst = inst
        self.flats = enumerate_flats(inst)
        vectors = inst.ground_vectors()
        coeff = np.zeros((len(self.flats), inst.m), dtype=np.int64)
        for r, flat in enumerate(self.flats):
            members = vectors[list(flat.members())]
            for i in range(inst.m):
                if flat.mask >> (2 * i) & 1 and flat.mask >> (2 * i + 1) & 1:
                    coeff[r, i] = 2
                    continue
                stacked = np.concatenate([members, [inst.a[i], inst.b[i]]]) if len(members) else np.stack([inst.a[i], inst.b[i]])
                coeff[r, i] = flat.dim + 2 - rank(stacked, inst.p)
        self.coeff = coeff
        self.rhs = np.array([f.dim for f in self.flats], dtype=np.int64)

    def contains(self, y2: Sequence[int]) -> bool:
        y2 = np.asarray(y2, dtype=np.int64)
        if np.any(y2 < 0):
            return False
        return bool(np.all(self.coeff @ y2 <= 2 * self.rhs))

    @cached_property
    def feasible(self) -> np.ndarray:
        grid = half_integral_grid(self.inst.m)
        ok = np.all(grid @ self.coeff.T <= 2 * self.rhs[None, :], axis=1)
        return grid[ok]

    def maximize(self, w: Sequence[int] | None = None, perfect: bool = False) -> Optimum:
        pts = self.feasible
        if perfect:
            pts = pts[pts.sum(axis=1) == self.inst.n]
        if len(pts) == 0:
            return Optimum(None, [])
        w = np.ones(self.inst.m, dtype=np.int64) if w is None else np.asarray(w, dtype=np.int64)
        vals = pts @ w
        best = int(vals.max())
        return Optimum(best, [tuple(int(v) for v in row) for row in pts[vals == best]])


def is_feasible(inst: Instance, y2: Sequence[int]) -> bool:
    return Polytope(inst).contains(y2)


def max_matching(inst: Instance, w: Sequence[int] | None = None, perfect: bool = False) -> Optimum:
    """Maximise w.y (cardinality if ``w`` is None) over the half-integral points."""
    return Polytope(inst).maximize(w, perfect)


def is_isolating(inst: Instance, w: Sequence[int], perfect: bool = False, polytope: Polytope | None = None) -> bool:
    """True iff ``w`` has exactly one maximiser (over perfect matchings if asked)."""
    poly = polytope or Polytope(inst)
    return len(poly.maximize(w, perfect).maximizers) == 1


@dataclass(frozen=True)
class FaceSystem:
    """Equalities ``D y = b`` plus ``y_e = 0`` for e in ``zeros`` describing an optimal face."""

    D: np.ndarray
    b: np.ndarray
    zeros: tuple[int, ...]

    def satisfied_by(self, y2: Sequence[int]) -> bool:
        y2 = np.asarray(y2, dtype=np.int64)
        return bool(np.all(self.D @ y2 == 2 * self.b) and np.all(y2[list(self.zeros)] == 0))


def face_system(inst: Instance, w: Sequence[int], polytope: Polytope | None = None) -> FaceSystem:
    """Tight flat rows and tight nonnegativity constraints of the w-optimal face."""
    poly = polytope or Polytope(inst)
    opt = poly.maximize(w)
    pts = np.array(opt.maximizers, dtype=np.int64).reshape(-1, inst.m)
    tight = np.all(pts @ poly.coeff.T == 2 * poly.rhs[None, :], axis=0)
    zeros = tuple(int(e) for e in np.nonzero(np.all(pts == 0, axis=0))[0])
    rows = poly.coeff[tight]
    rhs = poly.rhs[tight]
    # drop the trivial 0 <= 0 row of the empty flat and duplicates
    keep = {}
    for r, b in zip(rows, rhs):
        if r.any() or b:
            keep.setdefault((tuple(r), int(b)), None)
    D = np.array([k[0] for k in keep], dtype=np.int64).reshape(-1, inst.m)
    b = np.array([k[1] for k in keep], dtype=np.int64)
    return FaceSystem(D, b, zeros)
