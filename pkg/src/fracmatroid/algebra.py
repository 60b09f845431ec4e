"""Exact linear algebra over F_p and matrices of polynomials in t11, t12, t21, t22.

Field matrices are plain int64 numpy arrays holding residues mod ``p``.  The
polynomial side is deliberately small: :class:`QuadPoly` is a sparse
polynomial in exactly four variables, and :class:`QuadPolyMatrix` a dense
matrix of them.  Determinant degrees are extracted by evaluation and
interpolation, never by symbolic expansion.
"""

from __future__ import annotations

import functools
import itertools
import math
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .kernels import matmul_mod

# 15 * 2**27 + 1; supports power-of-two evaluation grids up to 2**27 points
DEFAULT_PRIME = 2013265921
NEG_INF = -math.inf

VARIABLES = ("t11", "t12", "t21", "t22")
Exponent = tuple[int, int, int, int]


class FieldTooSmall(ValueError):
    """The prime cannot host the evaluation points a computation needs."""


@functools.lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    """Validate a field characteristic; returns ``p``."""
    from sympy import isprime

    p = int(p)
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if not 3 <= p < 2**31:
        raise ValueError(f"prime must lie in [3, 2**31), got {p}")
    return p


@functools.lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    if p == DEFAULT_PRIME:
        return 31
    from sympy import primitive_root as _pr

    return int(_pr(p))


def to_field(a, p: int = DEFAULT_PRIME) -> np.ndarray:
    arr = np.asarray(a)
    if arr.dtype == object:
        arr = np.vectorize(lambda v: int(v) % p, otypes=[np.int64])(arr)
        return arr.astype(np.int64)
    return arr.astype(np.int64) % p


def balanced(v: int, p: int) -> int:
    """Representative of ``v mod p`` in (-p/2, p/2]."""
    v %= p
    return v - p if v > p // 2 else v


def rank(m, p: int = DEFAULT_PRIME) -> int:
    return kernels.rank_mod(to_field(m, p), p)


def det(m, p: int = DEFAULT_PRIME) -> int:
    m = to_field(m, p)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"det needs a square matrix, got shape {m.shape}")
    return kernels.det_mod(m, p)


def is_skew_symmetric(m, p: int = DEFAULT_PRIME) -> bool:
    m = to_field(m, p)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and bool(np.all((m + m.T) % p == 0))


def pfaffian(m, p: int = DEFAULT_PRIME) -> int:
    """Pfaffian of a skew-symmetric matrix; zero for odd order."""
    m = to_field(m, p)
    if not is_skew_symmetric(m, p):
        raise ValueError("pfaffian needs a skew-symmetric matrix")
    if m.shape[0] % 2:
        return 0
    return kernels.pfaffian_mod(m, p)


def random_skew(k: int, rng: np.random.Generator, p: int = DEFAULT_PRIME) -> np.ndarray:
    a = rng.integers(0, p, size=(k, k), dtype=np.int64)
    a = np.triu(a, 1)
    return (a - a.T) % p


# ---------------------------------------------------------------------------
# polynomials in four variables
# ---------------------------------------------------------------------------


class QuadPoly:
    """Sparse polynomial over F_p in t11, t12, t21, t22.

    ``terms`` maps exponent 4-tuples to nonzero coefficients.
    """

    __slots__ = ("terms", "p")

    def __init__(self, terms: Mapping[Exponent, int] | None = None, p: int = DEFAULT_PRIME):
        self.p = p
        self.terms: dict[Exponent, int] = {}
        for e, c in (terms or {}).items():
            c %= p
            if c:
                self.terms[tuple(e)] = c

    @classmethod
    def constant(cls, c: int, p: int = DEFAULT_PRIME) -> QuadPoly:
        return cls({(0, 0, 0, 0): c}, p)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff: int = 1, p: int = DEFAULT_PRIME) -> QuadPoly:
        return cls({tuple(exps): coeff}, p)

    @classmethod
    def var(cls, name: str, power: int = 1, p: int = DEFAULT_PRIME) -> QuadPoly:
        e = [0, 0, 0, 0]
        e[VARIABLES.index(name)] = power
        return cls.monomial(e, 1, p)

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> float:
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def degree_in(self, k: int) -> int:
        return max((e[k] for e in self.terms), default=0)

    def __add__(self, other) -> QuadPoly:
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return QuadPoly(out, self.p)

    __radd__ = __add__

    def __neg__(self) -> QuadPoly:
        return QuadPoly({e: -c for e, c in self.terms.items()}, self.p)

    def __sub__(self, other) -> QuadPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> QuadPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> QuadPoly:
        if isinstance(other, (int, np.integer)):
            return QuadPoly({e: c * int(other) for e, c in self.terms.items()}, self.p)
        other = self._coerce(other)
        out: dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                out[e] = (out.get(e, 0) + c1 * c2) % self.p
        return QuadPoly(out, self.p)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, np.integer)):
            other = QuadPoly.constant(int(other), self.p)
        return isinstance(other, QuadPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _coerce(self, other) -> QuadPoly:
        if isinstance(other, QuadPoly):
            return other
        return QuadPoly.constant(int(other), self.p)

    def evaluate(self, t: Sequence[int]) -> int:
        p = self.p
        acc = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(t, e):
                if k:
                    v = v * pow(int(x), k, p) % p
            acc += v
        return acc % p

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v for v, k in zip(VARIABLES, e) if k
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


class QuadPolyMatrix:
    """Dense matrix of :class:`QuadPoly` entries."""

    def __init__(self, entries: Iterable[Iterable[QuadPoly]], p: int = DEFAULT_PRIME):
        self.entries = [list(row) for row in entries]
        self.p = p
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise ValueError("ragged QuadPolyMatrix")

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int = DEFAULT_PRIME) -> QuadPolyMatrix:
        return cls([[QuadPoly(p=p) for _ in range(cols)] for _ in range(rows)], p)

    @classmethod
    def from_field(cls, m, p: int = DEFAULT_PRIME) -> QuadPolyMatrix:
        m = to_field(m, p)
        return cls([[QuadPoly.constant(int(v), p) for v in row] for row in m], p)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), (len(self.entries[0]) if self.entries else 0)

    def __getitem__(self, ij) -> QuadPoly:
        i, j = ij
        return self.entries[i][j]

    def __add__(self, other: QuadPolyMatrix) -> QuadPolyMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return QuadPolyMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)], self.p
        )

    def is_skew_symmetric(self) -> bool:
        r, c = self.shape
        if r != c:
            return False
        return all(
            (self.entries[i][j] + self.entries[j][i]).is_zero() for i in range(r) for j in range(i, r)
        )

    def evaluate(self, t: Sequence[int]) -> np.ndarray:
        """Field matrix obtained by substituting values for the four variables."""
        r, c = self.shape
        out = np.zeros((r, c), dtype=np.int64)
        for i in range(r):
            for j in range(c):
                out[i, j] = self.entries[i][j].evaluate(t)
        return out

    def project(self, alpha: Sequence[int]) -> dict[int, np.ndarray]:
        """Substitute ``t_k = alpha_k * u`` and group by the power of u.

        Returns a map ``degree -> coefficient matrix``; zero matrices omitted.
        """
        p = self.p
        r, c = self.shape
        out: dict[int, np.ndarray] = {}
        for i in range(r):
            for j in range(c):
                for e, coef in self.entries[i][j].terms.items():
                    v = coef
                    for a, k in zip(alpha, e):
                        if k:
                            v = v * pow(int(a), k, p) % p
                    d = sum(e)
                    if d not in out:
                        out[d] = np.zeros((r, c), dtype=np.int64)
                    out[d][i, j] = (out[d][i, j] + v) % p
        return {d: m for d, m in out.items() if m.any()}

    def __repr__(self) -> str:
        return f"QuadPolyMatrix(shape={self.shape})"


def kron(a, b, p: int = DEFAULT_PRIME):
    """Kronecker product; ``a`` may be a field matrix or a QuadPolyMatrix."""
    b = to_field(b, p)
    if isinstance(a, QuadPolyMatrix):
        ra, ca = a.shape
        rb, cb = b.shape
        out = QuadPolyMatrix.zeros(ra * rb, ca * cb, a.p)
        for i in range(ra):
            for j in range(ca):
                entry = a.entries[i][j]
                if entry.is_zero():
                    continue
                for k in range(rb):
                    for l in range(cb):
                        if b[k, l]:
                            out.entries[i * rb + k][j * cb + l] = entry * int(b[k, l])
        return out
    a = to_field(a, p)
    return _kron_field(a, b, p)


def _kron_field(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    ra, ca = a.shape
    rb, cb = b.shape
    out = (a[:, None, :, None] * b[None, :, None, :]) % p
    return out.reshape(ra * rb, ca * cb)


# ---------------------------------------------------------------------------
# determinant degree
# ---------------------------------------------------------------------------


def _degree_bound(degree_table: np.ndarray) -> int:
    """Row- and column-sum bound on det degree from per-entry degrees (-1 = zero entry)."""
    if degree_table.size == 0:
        return 0
    rows = degree_table.max(axis=1)
    cols = degree_table.max(axis=0)
    if rows.min() < 0 or cols.min() < 0:
        return -1
    return int(min(rows.sum(), cols.sum()))


def _valuation_bound(low_table: np.ndarray) -> int:
    """Lower bound on the lowest u-degree of det from per-entry minimum degrees."""
    big = np.iinfo(np.int64).max
    rows = np.where(low_table < 0, big, low_table).min(axis=1)
    cols = np.where(low_table < 0, big, low_table).min(axis=0)
    return int(max(rows.sum(), cols.sum()))


def _univariate_det_degree(terms: dict[int, np.ndarray], k: int, p: int) -> float:
    """Degree in u of det(sum_d u**d * terms[d]), exactly.

    The det's support lies in a window [low, high] read off the entry degrees,
    so evaluating at N > high - low roots of unity recovers every coefficient
    without aliasing (coefficient d lands at index d mod N).
    """
    if k == 0:
        return 0
    if not terms:
        return NEG_INF
    degs = np.array(sorted(terms), dtype=np.int64)
    coeffs = np.stack([terms[d] for d in degs])
    g = functools.reduce(math.gcd, (int(d) for d in degs), 0) or 1
    degs = degs // g
    hi_table = np.full((k, k), -1, dtype=np.int64)
    lo_table = np.full((k, k), -1, dtype=np.int64)
    for d, c in zip(degs, coeffs):
        nz = c != 0
        hi_table = np.where(nz, np.maximum(hi_table, d), hi_table)
        lo_table = np.where(nz & ((lo_table < 0) | (lo_table > d)), d, lo_table)
    high = _degree_bound(hi_table)
    if high < 0:
        return NEG_INF
    low = _valuation_bound(lo_table)
    if low > high:
        return NEG_INF
    span = high - low
    size = 1 << span.bit_length()
    if (p - 1) % size == 0:
        root = pow(primitive_root(p), (p - 1) // size, p)
        table = _powers(root, size, p)
        values = kernels.det_on_root_grid(coeffs, degs, table, p)
        poly = kernels.intt(values, root, p)
        nz = np.nonzero(poly)[0]
        if nz.size == 0:
            return NEG_INF
        true_degs = low + (nz - low) % size
        return int(true_degs.max()) * g
    size = high + 1
    if size >= p:
        raise FieldTooSmall(f"need {size} evaluation points but p = {p}")
    if size > 1 << 14:
        raise FieldTooSmall(
            f"prime {p} has no 2-power roots of unity of order {size}; use a larger NTT prime"
        )
    points = np.arange(1, size + 1, dtype=np.int64)
    values = kernels.det_at_points(coeffs, degs, points, p)
    poly = _interpolate(points, values, p)
    nz = np.nonzero(poly)[0]
    if nz.size == 0:
        return NEG_INF
    return int(nz[-1]) * g


def _powers(root: int, size: int, p: int) -> np.ndarray:
    out = np.empty(size, dtype=np.int64)
    out[0] = 1
    filled = 1
    while filled < size:
        step = pow(root, filled, p)
        take = min(filled, size - filled)
        out[filled : filled + take] = out[:take] * step % p
        filled += take
    return out


def _interpolate(xs: np.ndarray, ys: np.ndarray, p: int) -> np.ndarray:
    """Coefficients of the polynomial through (xs, ys), via Newton divided differences."""
    n = len(xs)
    xs = [int(x) for x in xs]
    dd = [int(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) * pow(xs[i] - xs[i - j], p - 2, p) % p
    coeffs = [0] * n
    for i in range(n - 1, -1, -1):
        # coeffs = coeffs * (u - xs[i]) + dd[i]
        new = [0] * n
        for k in range(n - 1):
            new[k + 1] = (new[k + 1] + coeffs[k]) % p
            new[k] = (new[k] - coeffs[k] * xs[i]) % p
        new[0] = (new[0] + dd[i]) % p
        coeffs = new
    return np.array(coeffs, dtype=np.int64)


def total_degree_of_det(
    m: QuadPolyMatrix,
    mode: str = "randomized",
    trials: int = 3,
    rng: np.random.Generator | None = None,
) -> float:
    """Total degree of det(m) in the four variables; ``-inf`` for the zero polynomial.

    ``randomized`` projects t_k -> alpha_k * u for random alpha and reads the
    degree of the univariate determinant, maximised over ``trials`` draws.
    ``deterministic`` interpolates det on a full 4-D grid (tiny inputs only).
    """
    r, c = m.shape
    if r != c:
        raise ValueError("total_degree_of_det needs a square matrix")
    if mode == "deterministic":
        coeffs = det_coefficients(m)
        if not coeffs:
            return NEG_INF
        return max(sum(e) for e in coeffs)
    if mode != "randomized":
        raise ValueError(f"unknown mode {mode!r}")
    rng = rng if rng is not None else np.random.default_rng(0)
    p = m.p
    best = NEG_INF
    for _ in range(max(1, trials)):
        alpha = rng.integers(1, p, size=4)
        best = max(best, _univariate_det_degree(m.project(alpha), r, p))
    return best


def det_coefficients(m: QuadPolyMatrix) -> dict[Exponent, int]:
    """All coefficients of det(m) by dense interpolation on a 4-D grid."""
    p = m.p
    k = m.shape[0]
    if k == 0:
        return {(0, 0, 0, 0): 1}
    bounds = []
    for v in range(4):
        table = np.array(
            [[e.degree_in(v) if not e.is_zero() else -1 for e in row] for row in m.entries]
        )
        b = _degree_bound(table)
        if b < 0:
            return {}
        bounds.append(b)
    npts = [b + 1 for b in bounds]
    if math.prod(npts) > 200_000:
        raise ValueError(f"grid of {math.prod(npts)} points is too large for deterministic mode")
    if max(npts) >= p:
        raise FieldTooSmall("grid larger than the field")
    grids = [np.arange(n, dtype=np.int64) for n in npts]
    pts = np.array(list(itertools.product(*grids)), dtype=np.int64)
    mats = np.zeros((len(pts), k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            for e, coef in m.entries[i][j].terms.items():
                v = np.full(len(pts), coef, dtype=np.int64)
                for ax in range(4):
                    if e[ax]:
                        v = v * kernels.modpow_vec(pts[:, ax], e[ax], p) % p
                mats[:, i, j] = (mats[:, i, j] + v) % p
    vals = kernels.batched_det_mod(mats, p).reshape(npts)
    # solve the Vandermonde system along each axis in turn
    for ax in range(4):
        vinv = _vandermonde_inverse(npts[ax], p)
        vals = np.moveaxis(vals, ax, 0)
        shp = vals.shape
        vals = matmul_mod(vinv, vals.reshape(shp[0], -1), p).reshape(shp)
        vals = np.moveaxis(vals, 0, ax)
    out = {}
    for idx in zip(*np.nonzero(vals)):
        out[tuple(int(i) for i in idx)] = int(vals[idx])
    return out


def _vandermonde_inverse(n: int, p: int) -> np.ndarray:
    v = np.array([[pow(x, j, p) for j in range(n)] for x in range(n)], dtype=np.int64)
    return inverse(v, p)


def inverse(m, p: int = DEFAULT_PRIME) -> np.ndarray:
    m = to_field(m, p)
    k = m.shape[0]
    aug = np.concatenate([m, np.eye(k, dtype=np.int64)], axis=1)
    r, piv = kernels.rref_mod(aug, p)
    if len(piv) < k or piv[k - 1] >= k:
        raise ValueError("matrix is singular")
    return r[:, k:]


def is_nonzero_poly_det(
    m: QuadPolyMatrix,
    trials: int = 3,
    rng: np.random.Generator | None = None,
    deterministic: bool = False,
) -> bool:
    """One-sided test that det(m) is not the zero polynomial.

    A random point with nonzero determinant is a certificate; a false negative
    happens with probability at most deg/p per trial.
    """
    r, c = m.shape
    if r != c:
        raise ValueError("square matrix required")
    if deterministic:
        return bool(det_coefficients(m))
    rng = rng if rng is not None else np.random.default_rng(0)
    for _ in range(max(1, trials)):
        t = rng.integers(1, m.p, size=4)
        if det(m.evaluate(t), m.p) != 0:
            return True
    return False
