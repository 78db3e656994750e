"""Vietoris-Rips flag complexes of finite metric spaces."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BudgetExceeded, simplex_budget
from .homology import ExplicitComplex
from .metric import SQUARED, Distance, FiniteMetricSpace, format_value


@dataclass(frozen=True, slots=True)
class Simplex:
    """Sorted vertex indices plus the level of the diameter (see ``FiniteMetricSpace.levels``)."""

    vertices: tuple
    level: int

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


def make_simplex(space: FiniteMetricSpace, vertices) -> Simplex:
    vs = tuple(sorted(set(int(v) for v in vertices)))
    if not vs:
        raise ValueError("a simplex needs at least one vertex")
    if vs[0] < 0 or vs[-1] >= space.n:
        raise ValueError(f"vertex out of range in {vs}")
    if len(vs) == 1:
        return Simplex(vs, 0)
    sub = space.index[np.ix_(vs, vs)]
    return Simplex(vs, int(sub.max()))


def simplex_diameter(space: FiniteMetricSpace, vertices) -> Distance:
    """Maximal pairwise distance of the vertex set; 0 for a single vertex."""
    if not len(vertices):
        raise ValueError("empty vertex set has no diameter")
    s = make_simplex(space, vertices)
    return space.wrap(space.levels[s.level])


def neighbor_graph(space: FiniteMetricSpace, t) -> list:
    """Adjacency sets of the graph with an edge iff ``0 < d <= t`` (stored units)."""
    k = space.level_le(t)
    adj = space.index <= k
    np.fill_diagonal(adj, False)
    return [frozenset(int(j) for j in np.flatnonzero(row)) for row in adj]


@dataclass
class VRComplex:
    """``VR_t(X)`` truncated to simplices of dimension ``<= max_dim``."""

    space: FiniteMetricSpace
    scale: object
    level: int
    max_dim: int
    simplices: list = field(default_factory=list)  # simplices[k] = k-simplices in lex order

    def __iter__(self):
        for layer in self.simplices:
            yield from layer

    def __len__(self):
        return sum(len(layer) for layer in self.simplices)

    def f_vector(self) -> tuple:
        return tuple(len(layer) for layer in self.simplices)

    @cached_property
    def lookup(self) -> dict:
        return {s.vertices: s for s in self}

    def __contains__(self, vertices) -> bool:
        return tuple(sorted(vertices)) in self.lookup

    def to_explicit(self) -> ExplicitComplex:
        return ExplicitComplex((s.vertices for s in self), check=False)

    def to_jsonl(self) -> str:
        sq = self.space.kind == SQUARED
        lines = []
        for s in self:
            rec = {"v": list(s.vertices), "diam": format_value(self.space.levels[s.level])}
            if sq:
                rec["sq"] = True
            lines.append(json.dumps(rec, separators=(",", ":")))
        return "\n".join(lines) + ("\n" if lines else "")


def _higher_neighbor_bits(space, k):
    adj = space.index <= k
    n = space.n
    bits = []
    for i in range(n):
        row = adj[i, i + 1:]
        b = 0
        for j in np.flatnonzero(row):
            b |= 1 << (i + 1 + int(j))
        bits.append(b)
    return bits


def enumerate_simplices(space: FiniteMetricSpace, t, max_dim: int, budget=None) -> VRComplex:
    """All cliques of size ``<= max_dim + 1`` of the neighbour graph at scale ``t``.

    Cliques are grown by increasing vertex index, so every dimension comes out
    in lexicographic order.
    """
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    budget = simplex_budget(budget)
    k = space.level_le(t)
    idx = space.index
    nbrs = _higher_neighbor_bits(space, k)
    layers = [[] for _ in range(max_dim + 1)]
    count = 0
    cap = max_dim + 1

    def grow(clique, level, cand):
        nonlocal count
        count += 1
        if count > budget:
            raise BudgetExceeded(f"VR complex at scale {format_value(t)}", budget)
        layers[len(clique) - 1].append(Simplex(tuple(clique), level))
        if len(clique) == cap:
            return
        row_max = None
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            row_max = max(level, int(idx[v, clique].max()))
            clique.append(v)
            grow(clique, row_max, cand & nbrs[v])
            clique.pop()

    for v in range(space.n):
        grow([v], 0, nbrs[v])
    return VRComplex(space, t, k, max_dim, layers)


def morse_key(s: Simplex):
    """Sort key realising the lexicographic (diam, -dim) order, ties by vertex list."""
    return (s.level, -s.dim, s.vertices)


def attachment_order(cx: VRComplex) -> list:
    """Simplices sorted by (diam, -dim), then by vertex list."""
    return sorted(cx, key=morse_key)
