"""Line instances, their rank-two skew-symmetric coefficients, and blow-up matrices.

Half-integral vectors are carried as tuples of doubled entries in {0, 1, 2}
throughout the package, so ``(1, 1, 1)`` means y = (1/2, 1/2, 1/2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import (
    DEFAULT_PRIME,
    QuadPoly,
    QuadPolyMatrix,
    det,
    kron,
    pfaffian,
    rank,
    to_field,
)
from .kernels import matmul_mod

HalfIntegral = tuple[int, ...]


class DependentLine(ValueError):
    """A line was given by a linearly dependent pair of vectors."""


def coeff_matrix(a, b, p: int = DEFAULT_PRIME) -> np.ndarray:
    """``a b^T - b a^T`` over F_p; rejects dependent pairs."""
    a = to_field(a, p)
    b = to_field(b, p)
    if rank(np.stack([a, b]), p) < 2:
        raise DependentLine(f"vectors {a.tolist()} and {b.tolist()} do not span a line")
    return (np.outer(a, b) - np.outer(b, a)) % p


@dataclass(frozen=True, eq=False)
class Instance:
    """m lines ``<a_i, b_i>`` in F_p^n."""

    n: int
    a: np.ndarray
    b: np.ndarray
    p: int = DEFAULT_PRIME
    coeffs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = int(self.n)
        a = to_field(np.asarray(self.a, dtype=object).reshape(-1, n) if np.size(self.a) else np.zeros((0, n)), self.p)
        b = to_field(np.asarray(self.b, dtype=object).reshape(-1, n) if np.size(self.b) else np.zeros((0, n)), self.p)
        if a.shape != b.shape:
            raise ValueError("a and b must have the same number of lines")
        coeffs = np.zeros((a.shape[0], n, n), dtype=np.int64)
        for i in range(a.shape[0]):
            coeffs[i] = coeff_matrix(a[i], b[i], self.p)
        for arr in (a, b, coeffs):
            arr.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_lines(cls, lines: Sequence[tuple[Sequence[int], Sequence[int]]], n: int, p: int = DEFAULT_PRIME):
        a = [l[0] for l in lines]
        b = [l[1] for l in lines]
        return cls(n, np.array(a, dtype=object).reshape(-1, n), np.array(b, dtype=object).reshape(-1, n), p)

    @property
    def m(self) -> int:
        return self.a.shape[0]

    def basis(self, i: int) -> np.ndarray:
        """The n x 2 matrix ``[a_i b_i]``."""
        return np.stack([self.a[i], self.b[i]], axis=1)

    def ground_vectors(self) -> np.ndarray:
        """E = (a_1, b_1, ..., a_m, b_m) as rows."""
        out = np.empty((2 * self.m, self.n), dtype=np.int64)
        out[0::2] = self.a
        out[1::2] = self.b
        return out

    def __repr__(self) -> str:
        return f"Instance(n={self.n}, m={self.m}, p={self.p})"


def blowup2_eval(inst: Instance, xs: Sequence) -> np.ndarray:
    """``sum_i X_i (x) A_i`` for field 2x2 matrices X_i."""
    if len(xs) != inst.m:
        raise ValueError(f"expected {inst.m} substitution matrices, got {len(xs)}")
    p = inst.p
    out = np.zeros((2 * inst.n, 2 * inst.n), dtype=np.int64)
    for x, a in zip(xs, inst.coeffs):
        x = to_field(x, p)
        if x.shape != (2, 2):
            raise ValueError("substitution matrices must be 2x2")
        out = (out + kron(x, a, p)) % p
    return out


def random_substitution(inst: Instance, rng: np.random.Generator, y2: HalfIntegral | None = None) -> list[np.ndarray]:
    """Random X_i; with ``y2`` given, X_i = U_i U_i^T for a random 2 x y2_i block U_i."""
    p = inst.p
    xs = []
    for i in range(inst.m):
        if y2 is None:
            xs.append(rng.integers(0, p, size=(2, 2), dtype=np.int64))
        else:
            u = rng.integers(0, p, size=(2, y2[i]), dtype=np.int64)
            xs.append(matmul_mod(u, u.T, p))
    return xs


def ncrank_estimate(inst: Instance, trials: int = 3, rng: np.random.Generator | None = None) -> int:
    """Non-commutative rank as half the best rank of random second-order blow-ups."""
    rng = rng if rng is not None else np.random.default_rng(0)
    if inst.m == 0:
        return 0
    best = 0
    for _ in range(max(1, trials)):
        best = max(best, rank(blowup2_eval(inst, random_substitution(inst, rng)), inst.p))
        if best == 2 * inst.n:
            break
    return best // 2


def _t(pq: str, w: int, p: int) -> QuadPoly:
    return QuadPoly.var("t" + pq, w, p)


def substitution_block(w: int, v2: int, p: int = DEFAULT_PRIME) -> list[list[QuadPoly]]:
    """V = T T^T with T the 2x2 (v2 = 2) or 2x1 (v2 = 1) block of monomials t_pq**w."""
    if v2 == 0:
        return [[QuadPoly(p=p), QuadPoly(p=p)], [QuadPoly(p=p), QuadPoly(p=p)]]
    cols = ("1", "2") if v2 == 2 else ("1",)
    block = []
    for r in "12":
        row = []
        for c in "12":
            row.append(sum((_t(r + k, w, p) * _t(c + k, w, p) for k in cols), QuadPoly(p=p)))
        block.append(row)
    return block


def build_Atilde(inst: Instance, w: Sequence[int], v2: HalfIntegral | None = None) -> QuadPolyMatrix:
    """``sum_i V_i (x) A_i`` with monomial substitution blocks; ``v2`` defaults to all ones."""
    p = inst.p
    if v2 is None:
        v2 = (2,) * inst.m
    if len(w) != inst.m or len(v2) != inst.m:
        raise ValueError("weight and pattern vectors must have one entry per line")
    n = inst.n
    out = QuadPolyMatrix.zeros(2 * n, 2 * n, p)
    rows = out.entries
    for i in range(inst.m):
        if v2[i] == 0:
            continue
        block = substitution_block(int(w[i]), int(v2[i]), p)
        a = inst.coeffs[i]
        nz = list(zip(*np.nonzero(a)))
        for bp in range(2):
            for bq in range(2):
                poly = block[bp][bq]
                if poly.is_zero():
                    continue
                for r, c in nz:
                    rr, cc = bp * n + r, bq * n + c
                    rows[rr][cc] = rows[rr][cc] + poly * int(a[r, c])
    return out


def _selections(y2i: int, z2i: int) -> list[tuple[int, ...]]:
    # column choices of U_i (x) B_i, 0-based
    if z2i == 0:
        return [()]
    if z2i == 2:
        return [(0, 1, 2, 3)]
    if y2i == 2:
        return [(0, 1), (2, 3)]
    return [(0, 1)]


def pfaffian_expansion_terms(inst: Instance, y2: HalfIntegral, us: Sequence[np.ndarray]) -> int:
    """Right-hand side of the Pfaffian expansion at concrete U_i blocks."""
    p = inst.p
    n = inst.n
    blocks = [kron(u, inst.basis(i), p) if y2[i] else None for i, u in enumerate(us)]
    total = 0
    ranges = [range(y + 1) for y in y2]
    for z2 in itertools.product(*ranges):
        if sum(z2) != n:
            continue
        options = [_selections(y2[i], z2[i]) for i in range(inst.m)]
        for choice in itertools.product(*options):
            cols = [blocks[i][:, list(sel)] for i, sel in enumerate(choice) if sel]
            mat = np.concatenate(cols, axis=1) if cols else np.zeros((2 * n, 0), dtype=np.int64)
            total += det(mat, p)
    return total % p


def pfaffian_expansion_check(
    inst: Instance, y2: HalfIntegral, trials: int = 20, rng: np.random.Generator | None = None
) -> bool:
    """Compare pf(A^{2}(y)) with the expansion over sub-vectors z <= y at random U_i."""
    rng = rng if rng is not None else np.random.default_rng(0)
    p = inst.p
    for _ in range(trials):
        us = [rng.integers(0, p, size=(2, y2[i]), dtype=np.int64) for i in range(inst.m)]
        xs = [matmul_mod(u, u.T, p) for u in us]
        lhs = pfaffian(blowup2_eval(inst, xs), p) if inst.m else (1 if inst.n == 0 else 0)
        if lhs != pfaffian_expansion_terms(inst, y2, us):
            return False
    return True
