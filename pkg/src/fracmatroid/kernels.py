"""Hot modular-arithmetic kernels over a prime field F_p, p < 2**31.

Every kernel exists twice: a scalar-loop version compiled with numba, and a
vectorised numpy version.  The numba path is used unless numba is missing or
``FRACMATROID_DISABLE_NUMBA`` is set.  Inputs are int64 arrays of residues in
``[0, p)``; products of two residues fit in int64 because ``p < 2**31``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._accel import HAVE_NUMBA, njit

# ---------------------------------------------------------------------------
# scalar loops (compiled by numba when available)
# ---------------------------------------------------------------------------


def _modpow_loop(a, e, p):
    r = 1
    a = a % p
    while e > 0:
        if e & 1:
            r = r * a % p
        a = a * a % p
        e >>= 1
    return r


def _make_loops(jit):
    modpow = jit(_modpow_loop)

    def det_inplace(a, p):
        k = a.shape[0]
        det = 1
        for c in range(k):
            piv = -1
            for r in range(c, k):
                if a[r, c] != 0:
                    piv = r
                    break
            if piv < 0:
                return 0
            if piv != c:
                for j in range(c, k):
                    t = a[c, j]
                    a[c, j] = a[piv, j]
                    a[piv, j] = t
                det = (p - det) % p
            det = det * a[c, c] % p
            inv = modpow(a[c, c], p - 2, p)
            for r in range(c + 1, k):
                if a[r, c] != 0:
                    f = a[r, c] * inv % p
                    for j in range(c, k):
                        a[r, j] = (a[r, j] - f * a[c, j] % p + p) % p
        return det

    det_inplace = jit(det_inplace)

    def det(a, p):
        return det_inplace(a.copy(), p)

    def batched_det(a, p):
        out = np.empty(a.shape[0], dtype=np.int64)
        for b in range(a.shape[0]):
            out[b] = det_inplace(a[b].copy(), p)
        return out

    def rref(a, p):
        a = a.copy()
        rows, cols = a.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    t = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = t
            inv = modpow(a[r, c], p - 2, p)
            for j in range(cols):
                a[r, j] = a[r, j] * inv % p
            for i in range(rows):
                if i != r and a[i, c] != 0:
                    f = a[i, c]
                    for j in range(cols):
                        a[i, j] = (a[i, j] - f * a[r, j] % p + p) % p
            pivots[r] = c
            r += 1
        return a[:r], pivots[:r]

    def rank(a, p):
        a = a.copy()
        rows, cols = a.shape
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(c, cols):
                    t = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = t
            inv = modpow(a[r, c], p - 2, p)
            for i in range(r + 1, rows):
                if a[i, c] != 0:
                    f = a[i, c] * inv % p
                    for j in range(c, cols):
                        a[i, j] = (a[i, j] - f * a[r, j] % p + p) % p
            r += 1
        return r

    def pfaffian(a, p):
        a = a.copy()
        k = a.shape[0]
        if k % 2 == 1:
            return 0
        pf = 1
        for c in range(0, k, 2):
            piv = -1
            for j in range(c + 1, k):
                if a[c, j] != 0:
                    piv = j
                    break
            if piv < 0:
                return 0
            if piv != c + 1:
                s = c + 1
                for j in range(k):
                    t = a[s, j]
                    a[s, j] = a[piv, j]
                    a[piv, j] = t
                for i in range(k):
                    t = a[i, s]
                    a[i, s] = a[i, piv]
                    a[i, piv] = t
                pf = (p - pf) % p
            pf = pf * a[c, c + 1] % p
            inv = modpow(a[c, c + 1], p - 2, p)
            for i in range(c + 2, k):
                tau = a[c, i] * inv % p
                if tau != 0:
                    for r in range(c, k):
                        a[r, i] = (a[r, i] - tau * a[r, c + 1] % p + p) % p
                    for r in range(c, k):
                        a[i, r] = (a[i, r] - tau * a[c + 1, r] % p + p) % p
        return pf

    def det_at_points(coeffs, degs, points, p):
        nterms, k, _ = coeffs.shape
        out = np.empty(points.shape[0], dtype=np.int64)
        mat = np.empty((k, k), dtype=np.int64)
        for t in range(points.shape[0]):
            x = points[t]
            for i in range(k):
                for j in range(k):
                    mat[i, j] = 0
            for d in range(nterms):
                xp = modpow(x, degs[d], p)
                for i in range(k):
                    for j in range(k):
                        c = coeffs[d, i, j]
                        if c != 0:
                            mat[i, j] = (mat[i, j] + xp * c) % p
            out[t] = det_inplace(mat, p)
        return out

    def det_on_root_grid(coeffs, degs, table, p):
        nterms, k, _ = coeffs.shape
        n = table.shape[0]
        out = np.empty(n, dtype=np.int64)
        mat = np.empty((k, k), dtype=np.int64)
        dmod = degs % n
        for t in range(n):
            for i in range(k):
                for j in range(k):
                    mat[i, j] = 0
            for d in range(nterms):
                xp = table[(t * dmod[d]) % n]
                for i in range(k):
                    for j in range(k):
                        c = coeffs[d, i, j]
                        if c != 0:
                            mat[i, j] = (mat[i, j] + xp * c) % p
            out[t] = det_inplace(mat, p)
        return out

    def ntt(a, root, p):
        n = a.shape[0]
        a = a.copy()
        j = 0
        for i in range(1, n):
            bit = n >> 1
            while j & bit:
                j ^= bit
                bit >>= 1
            j ^= bit
            if i < j:
                t = a[i]
                a[i] = a[j]
                a[j] = t
        length = 2
        while length <= n:
            wlen = modpow(root, n // length, p)
            half = length // 2
            tw = np.empty(half, dtype=np.int64)
            tw[0] = 1
            for h in range(1, half):
                tw[h] = tw[h - 1] * wlen % p
            for s in range(0, n, length):
                for h in range(half):
                    u = a[s + h]
                    v = a[s + h + half] * tw[h] % p
                    a[s + h] = (u + v) % p
                    a[s + h + half] = (u - v + p) % p
            length <<= 1
        return a

    return {
        "det": jit(det),
        "batched_det": jit(batched_det),
        "rref": jit(rref),
        "rank": jit(rank),
        "pfaffian": jit(pfaffian),
        "det_at_points": jit(det_at_points),
        "det_on_root_grid": jit(det_on_root_grid),
        "ntt": jit(ntt),
    }


# ---------------------------------------------------------------------------
# numpy versions
# ---------------------------------------------------------------------------


def modpow_vec(a: np.ndarray, e: int, p: int) -> np.ndarray:
    """Elementwise ``a**e mod p`` for a scalar exponent."""
    a = np.asarray(a, dtype=np.int64) % p
    r = np.ones_like(a)
    while e > 0:
        if e & 1:
            r = r * a % p
        a = a * a % p
        e >>= 1
    return r


def _modpow_elementwise(a: np.ndarray, e: np.ndarray, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64) % p
    e = np.asarray(e, dtype=np.int64).copy()
    a, e = np.broadcast_arrays(a, e)
    a = a.copy()
    e = e.copy()
    r = np.ones_like(a)
    while np.any(e > 0):
        odd = (e & 1).astype(bool)
        r = np.where(odd, r * a % p, r)
        a = a * a % p
        e >>= 1
    return r


def _np_batched_det(a: np.ndarray, p: int) -> np.ndarray:
    a = np.array(a, dtype=np.int64) % p
    nb, k, _ = a.shape
    det = np.ones(nb, dtype=np.int64)
    idx = np.arange(nb)
    for c in range(k):
        nz = a[:, c:, c] != 0
        has = nz.any(axis=1)
        piv = c + nz.argmax(axis=1)
        swap = has & (piv != c)
        row_c = a[idx, c].copy()
        a[idx, c] = a[idx, piv]
        a[idx, piv] = row_c
        det = np.where(swap, (p - det) % p, det)
        pv = a[:, c, c]
        det = det * pv % p
        inv = modpow_vec(np.where(pv == 0, 1, pv), p - 2, p)
        f = a[:, c + 1 :, c] * inv[:, None] % p
        a[:, c + 1 :, c:] = (a[:, c + 1 :, c:] - f[:, :, None] * a[:, None, c, c:] % p) % p
    return det


def _np_det(a: np.ndarray, p: int) -> int:
    return int(_np_batched_det(a[None], p)[0])


def _np_rref(a: np.ndarray, p: int):
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), p - 2, p) % p
        f = a[:, c].copy()
        f[r] = 0
        a = (a - f[:, None] * a[r][None, :] % p) % p
        pivots.append(c)
        r += 1
    return a[:r], np.array(pivots, dtype=np.int64)


def _np_rank(a: np.ndarray, p: int) -> int:
    return len(_np_rref(a, p)[1])


def _np_pfaffian(a: np.ndarray, p: int) -> int:
    a = np.array(a, dtype=np.int64) % p
    k = a.shape[0]
    if k % 2:
        return 0
    pf = 1
    for c in range(0, k, 2):
        nz = np.nonzero(a[c, c + 1 :])[0]
        if nz.size == 0:
            return 0
        piv = c + 1 + nz[0]
        if piv != c + 1:
            s = c + 1
            a[[s, piv]] = a[[piv, s]]
            a[:, [s, piv]] = a[:, [piv, s]]
            pf = (p - pf) % p
        pf = pf * int(a[c, c + 1]) % p
        inv = pow(int(a[c, c + 1]), p - 2, p)
        tau = a[c, c + 2 :] * inv % p
        a[:, c + 2 :] = (a[:, c + 2 :] - a[:, c + 1, None] * tau[None, :] % p) % p
        a[c + 2 :, :] = (a[c + 2 :, :] - tau[:, None] * a[c + 1, None, :] % p) % p
    return pf


def _np_det_at_points(coeffs, degs, points, p, chunk: int = 4096):
    nterms, k, _ = coeffs.shape
    out = np.empty(points.shape[0], dtype=np.int64)
    for s in range(0, points.shape[0], chunk):
        pts = points[s : s + chunk]
        mats = np.zeros((pts.shape[0], k, k), dtype=np.int64)
        for d in range(nterms):
            xp = modpow_vec(pts, int(degs[d]), p)
            mats = (mats + xp[:, None, None] * coeffs[d][None]) % p
        out[s : s + chunk] = _np_batched_det(mats, p)
    return out


def _np_det_on_root_grid(coeffs, degs, table, p, chunk: int = 4096):
    nterms, k, _ = coeffs.shape
    n = table.shape[0]
    out = np.empty(n, dtype=np.int64)
    dmod = np.asarray(degs, dtype=np.int64) % n
    for s in range(0, n, chunk):
        t = np.arange(s, min(n, s + chunk), dtype=np.int64)
        mats = np.zeros((t.shape[0], k, k), dtype=np.int64)
        for d in range(nterms):
            xp = table[(t * dmod[d]) % n]
            mats = (mats + xp[:, None, None] * coeffs[d][None]) % p
        out[s : s + chunk] = _np_batched_det(mats, p)
    return out


def _bitrev_perm(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def _np_ntt(a, root, p):
    n = a.shape[0]
    a = np.asarray(a, dtype=np.int64)[_bitrev_perm(n)] % p
    length = 2
    while length <= n:
        half = length // 2
        wlen = pow(int(root), n // length, p)
        tw = np.empty(half, dtype=np.int64)
        tw[0] = 1
        # doubling fill of the twiddle table
        filled = 1
        while filled < half:
            step = pow(wlen, filled, p)
            take = min(filled, half - filled)
            tw[filled : filled + take] = tw[:take] * step % p
            filled += take
        blocks = a.reshape(-1, length)
        u = blocks[:, :half]
        v = blocks[:, half:] * tw[None, :] % p
        a = np.concatenate(((u + v) % p, (u - v) % p), axis=1).reshape(-1)
        length <<= 1
    return a


# ---------------------------------------------------------------------------
# backend registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Backend:
    name: str
    det: Callable
    batched_det: Callable
    rref: Callable
    rank: Callable
    pfaffian: Callable
    det_at_points: Callable
    det_on_root_grid: Callable
    ntt: Callable


NUMPY = Backend(
    "numpy",
    det=_np_det,
    batched_det=_np_batched_det,
    rref=_np_rref,
    rank=_np_rank,
    pfaffian=_np_pfaffian,
    det_at_points=_np_det_at_points,
    det_on_root_grid=_np_det_on_root_grid,
    ntt=_np_ntt,
)

if HAVE_NUMBA:
    _loops = _make_loops(lambda f: njit(cache=True, nogil=True)(f))
    NUMBA: Backend | None = Backend("numba", **_loops)
else:
    NUMBA = None

ACTIVE: Backend = NUMBA if NUMBA is not None else NUMPY


def _arr(a, p: int) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(a, dtype=np.int64) % p)


def det_mod(a, p: int) -> int:
    a = _arr(a, p)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"determinant needs a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        return 1
    return int(ACTIVE.det(a, p))


def batched_det_mod(a, p: int) -> np.ndarray:
    a = _arr(a, p)
    if a.shape[1] == 0:
        return np.ones(a.shape[0], dtype=np.int64)
    return ACTIVE.batched_det(a, p)


def rank_mod(a, p: int) -> int:
    a = _arr(a, p)
    if a.size == 0:
        return 0
    return int(ACTIVE.rank(a, p))


def rref_mod(a, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    a = _arr(a, p)
    if a.size == 0:
        return a.reshape(0, a.shape[1] if a.ndim == 2 else 0), np.zeros(0, dtype=np.int64)
    r, piv = ACTIVE.rref(a, p)
    return np.asarray(r), np.asarray(piv)


def pfaffian_mod(a, p: int) -> int:
    a = _arr(a, p)
    if a.shape[0] == 0:
        return 1
    return int(ACTIVE.pfaffian(a, p))


def det_at_points(coeffs, degs, points, p: int) -> np.ndarray:
    """Evaluate ``det(sum_d x**degs[d] * coeffs[d])`` at every x in ``points``."""
    coeffs = _arr(coeffs, p)
    degs = np.ascontiguousarray(degs, dtype=np.int64)
    points = _arr(points, p)
    if coeffs.shape[1] == 0:
        return np.ones(points.shape[0], dtype=np.int64)
    return ACTIVE.det_at_points(coeffs, degs, points, p)


def det_on_root_grid(coeffs, degs, table, p: int) -> np.ndarray:
    """Like :func:`det_at_points` at x = table[k], where ``table`` holds all powers of a root of unity."""
    coeffs = _arr(coeffs, p)
    degs = np.ascontiguousarray(degs, dtype=np.int64)
    table = _arr(table, p)
    if coeffs.shape[1] == 0:
        return np.ones(table.shape[0], dtype=np.int64)
    return ACTIVE.det_on_root_grid(coeffs, degs, table, p)


def ntt(a, root: int, p: int) -> np.ndarray:
    """Evaluate the coefficient vector ``a`` at the powers of ``root`` (len(a) a power of 2)."""
    return ACTIVE.ntt(_arr(a, p), int(root), p)


def intt(a, root: int, p: int) -> np.ndarray:
    n = len(a)
    out = ntt(a, pow(int(root), p - 2, p), p)
    return out * pow(n, p - 2, p) % p


def matmul_mod(a, b, p: int) -> np.ndarray:
    """Matrix product mod p without int64 overflow."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    out = np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    for k in range(a.shape[-1]):
        out = (out + a[..., k, None] * b[k] % p) % p
    return out
