"""Alternating circuits of the multigraph of a {0,1,2} constraint matrix.

A matrix D with column sums 2 is read as a multigraph G_D: column e is an
edge between the two rows holding a 1, or a loop at the row holding a 2.
Integer kernel vectors of D decompose into alternating indicator vectors of
closed even walks in G_D, which makes shortest and near-shortest kernel
vectors searchable by walking the graph instead of by generic lattice
reduction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np


class Membership(enum.Enum):
    NOT_IN_LATTICE = "not_in_lattice"


NOT_IN_LATTICE = Membership.NOT_IN_LATTICE


def constraint_matrix(d) -> np.ndarray:
    """Validate D: entries in {0,1,2}, every column summing to 2."""
    d = np.asarray(d, dtype=np.int64)
    if d.ndim != 2:
        raise ValueError("constraint matrix must be 2-D")
    if d.size and (d.min() < 0 or d.max() > 2):
        raise ValueError("entries must lie in {0, 1, 2}")
    sums = d.sum(axis=0)
    if np.any(sums != 2):
        bad = np.nonzero(sums != 2)[0].tolist()
        raise ValueError(f"columns {bad} do not sum to 2")
    return d


@dataclass(frozen=True)
class MultiGraph:
    num_vertices: int
    edges: tuple[tuple[int, int], ...]  # (s, t); s == t for a loop

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def incident(self, v: int) -> list[tuple[int, int]]:
        """(edge, other endpoint) pairs at v in edge order; loops appear once."""
        out = []
        for e, (s, t) in enumerate(self.edges):
            if s == v:
                out.append((e, t))
            elif t == v:
                out.append((e, s))
        return out


def build_graph(d) -> MultiGraph:
    d = constraint_matrix(d)
    edges = []
    for e in range(d.shape[1]):
        rows = np.nonzero(d[:, e])[0]
        if len(rows) == 1:
            edges.append((int(rows[0]), int(rows[0])))
        else:
            edges.append((int(rows[0]), int(rows[1])))
    return MultiGraph(d.shape[0], tuple(edges))


@dataclass(frozen=True)
class AlternatingCircuit:
    vertices: tuple[int, ...]  # v_0 .. v_k with v_k == v_0
    edges: tuple[int, ...]
    num_edges_total: int

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def indicator(self) -> np.ndarray:
        out = np.zeros(self.num_edges_total, dtype=np.int64)
        for j, e in enumerate(self.edges):
            out[e] += 1 if j % 2 == 0 else -1
        return out


def decompose(d, x: Sequence[int]) -> list[AlternatingCircuit] | Membership:
    """Split a kernel vector of D into conformal alternating circuits.

    Returns ``NOT_IN_LATTICE`` when a walk cannot be extended, which happens
    exactly when ``D x != 0``.  Ties between candidate edges go to the lowest
    edge index.
    """
    graph = build_graph(d)
    x = np.array(x, dtype=np.int64)
    if x.shape != (graph.num_edges,):
        raise ValueError(f"x must have {graph.num_edges} entries")
    adjacency = [graph.incident(v) for v in range(graph.num_vertices)]
    circuits = []
    while np.any(x != 0):
        positive = np.nonzero(x > 0)[0]
        if len(positive) == 0:
            return NOT_IN_LATTICE
        y = np.zeros_like(x)
        e0 = int(positive[0])
        y[e0] = 1
        v0, v1 = graph.edges[e0]
        verts = [v0, v1]
        walk = [e0]
        j = 1
        while True:
            sign = -1 if j % 2 else 1
            step = None
            for e, u in adjacency[verts[j]]:
                if abs(x[e]) > abs(y[e]) and sign * x[e] > 0:
                    step = (e, u)
                    break
            if step is None:
                return NOT_IN_LATTICE
            e, u = step
            y[e] += sign
            walk.append(e)
            verts.append(u)
            j += 1
            if j % 2 == 0 and verts[j] == v0:
                x = x - y
                circuits.append(AlternatingCircuit(tuple(verts), tuple(walk), graph.num_edges))
                break
    return circuits


def _rational_rank(d: np.ndarray) -> int:
    rows = [[Fraction(int(v)) for v in row] for row in d]
    r = 0
    cols = d.shape[1] if d.ndim == 2 else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def lattice_is_trivial(d) -> bool:
    d = constraint_matrix(d)
    return _rational_rank(d) == d.shape[1]


def _closed_walks(graph: MultiGraph, max_len: int) -> Iterator[tuple[int, set[tuple[int, ...]]]]:
    """Yield (length, indicator vectors of closed conformal alternating walks of that length).

    A walk is conformal when every edge is always traversed with the same
    sign.  States are deduplicated on (start, current vertex, indicator), which
    fully determines the continuations.
    """
    m = graph.num_edges
    adjacency = [graph.incident(v) for v in range(graph.num_vertices)]
    layer = set()
    for e, (s, t) in enumerate(graph.edges):
        y = [0] * m
        y[e] = 1
        layer.add((s, t, tuple(y)))
        if s != t:
            layer.add((t, s, tuple(y)))
    length = 1
    while layer and length < max_len:
        sign = -1 if length % 2 else 1
        nxt = set()
        closed = set()
        for v0, v, y in layer:
            for e, u in adjacency[v]:
                if y[e] * sign < 0:
                    continue
                y2 = list(y)
                y2[e] += sign
                y2 = tuple(y2)
                nxt.add((v0, u, y2))
                if sign == -1 and u == v0:
                    closed.add(y2)
        length += 1
        layer = nxt
        yield length, closed


def shortest_length(d) -> float:
    """lambda(L_D): least L1 norm of a nonzero kernel vector, ``inf`` if none."""
    d = constraint_matrix(d)
    if lattice_is_trivial(d):
        return math.inf
    graph = build_graph(d)
    for length, closed in _closed_walks(graph, 4 * graph.num_edges + 2):
        if closed:
            return length
    raise RuntimeError("nontrivial lattice without a short alternating circuit")


def near_shortest(d, c: float | Fraction = 2) -> list[tuple[int, ...]]:
    """All kernel vectors with L1 norm strictly below ``c * lambda`` (c <= 2)."""
    if c > 2:
        raise ValueError("walk enumeration is complete only for c <= 2")
    d = constraint_matrix(d)
    lam = shortest_length(d)
    if lam == math.inf:
        return []
    graph = build_graph(d)
    limit = c * lam
    found: set[tuple[int, ...]] = set()
    for length, closed in _closed_walks(graph, math.ceil(limit)):
        if length >= limit:
            break
        found |= closed
    return sorted(found)
