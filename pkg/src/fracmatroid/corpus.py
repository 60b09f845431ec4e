"""Deterministic instance generators and the tiny validation corpus."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import DEFAULT_PRIME, rank
from .instance import Instance


def unit(n: int, k: int) -> list[int]:
    v = [0] * n
    v[k] = 1
    return v


def graph_instance(edges: Sequence[tuple[int, int]], vertices: int | None = None, p: int = DEFAULT_PRIME) -> Instance:
    """One line <e_u, e_v> per edge of a loopless graph."""
    n = vertices if vertices is not None else 1 + max((max(e) for e in edges), default=-1)
    for u, v in edges:
        if u == v:
            raise ValueError("graph must be loopless")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) outside {n} vertices")
    return Instance.from_lines([(unit(n, u), unit(n, v)) for u, v in edges], n, p)


def random_instance(m: int, n: int, seed: int, p: int = DEFAULT_PRIME, bound: int = 2, density: float = 0.6) -> Instance:
    """m random lines with small sparse integer entries; dependent pairs are resampled."""
    if n < 2 and m > 0:
        raise ValueError("lines need n >= 2")
    rng = np.random.default_rng(seed)
    lines = []
    while len(lines) < m:
        a, b = (
            np.where(rng.random(n) < density, rng.integers(-bound, bound + 1, size=n), 0) for _ in range(2)
        )
        if rank(np.stack([a, b]), p) == 2:
            lines.append((a.tolist(), b.tolist()))
    return Instance.from_lines(lines, n, p)


def intersection_instance(us: Sequence[Sequence[int]], vs: Sequence[Sequence[int]], p: int = DEFAULT_PRIME) -> Instance:
    """Lines <(u_i, 0), (0, v_i)> in F^{2r}; perfect matchings are the common bases."""
    if len(us) != len(vs):
        raise ValueError("both matroids need the same ground set")
    r = len(us[0]) if us else 0
    lines = [(list(u) + [0] * r, [0] * r + list(v)) for u, v in zip(us, vs)]
    return Instance.from_lines(lines, 2 * r, p)


def random_intersection_instance(m: int, r: int, seed: int, p: int = DEFAULT_PRIME, bound: int = 2) -> Instance:
    rng = np.random.default_rng(seed)

    def nonzero() -> list[int]:
        while True:
            v = rng.integers(-bound, bound + 1, size=r)
            if v.any():
                return v.tolist()

    return intersection_instance([nonzero() for _ in range(m)], [nonzero() for _ in range(m)], p)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    inst: Instance


def _graphs(max_vertices: int, max_edges: int):
    for n in range(2, max_vertices + 1):
        pairs = list(itertools.combinations(range(n), 2))
        for k in range(1, max_edges + 1):
            for edges in itertools.combinations(pairs, k):
                yield n, edges


def tiny_corpus(seed: int = 0, random_count: int = 60, max_m: int = 4, max_n: int = 4) -> list[CorpusEntry]:
    """Named instances with m <= 4 and n <= 4: graphs, intersections, random lines."""
    out = [
        CorpusEntry("single-line", graph_instance([(0, 1)])),
        CorpusEntry("K3", graph_instance([(0, 1), (1, 2), (0, 2)])),
        CorpusEntry("C4", graph_instance([(0, 1), (1, 2), (2, 3), (3, 0)])),
        CorpusEntry("star3", graph_instance([(0, 1), (0, 2), (0, 3)])),
        CorpusEntry("line-in-F3", Instance.from_lines([(unit(3, 0), unit(3, 1))], 3)),
    ]
    for n, edges in _graphs(max_n, max_m):
        if len(edges) > 1 or n > 2:
            out.append(CorpusEntry(f"graph n={n} {list(edges)}", graph_instance(edges, n)))
    for k in range(12):
        m = 2 + k % (max_m - 1)
        out.append(CorpusEntry(f"intersection m={m} r=2 seed={seed + k}", random_intersection_instance(m, 2, seed + k)))
    rng = np.random.default_rng(seed)
    for k in range(random_count):
        m = int(rng.integers(1, max_m + 1))
        n = int(rng.integers(2, max_n + 1))
        s = int(rng.integers(2**31))
        out.append(CorpusEntry(f"random m={m} n={n} seed={s}", random_instance(m, n, s)))
    return out
