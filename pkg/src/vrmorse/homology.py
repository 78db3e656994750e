"""Reduced simplicial homology over GF(2) for small explicit complexes.

Boundary matrices are reduced column by column with columns stored as Python
integers used as bitsets, which is fast enough for the tens of thousands of
simplices that show up in link and sublevel checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import BudgetExceeded, simplex_budget


class ExplicitComplex:
    """A finite abstract simplicial complex given by all of its simplices.

    Simplices are stored as sorted tuples of mutually comparable vertices.
    Construction checks face-closure unless ``check=False``.
    """

    def __init__(self, simplices=(), check=True):
        seen = set()
        by_dim = {}
        for s in simplices:
            s = tuple(sorted(s))
            if not s:
                continue
            if len(set(s)) != len(s):
                raise ValueError(f"repeated vertex in simplex {s}")
            if s in seen:
                continue
            seen.add(s)
            by_dim.setdefault(len(s) - 1, []).append(s)
        top = max(by_dim) if by_dim else -1
        self._by_dim = [sorted(by_dim.get(k, [])) for k in range(top + 1)]
        self._set = frozenset(seen)
        if check:
            for s in seen:
                if len(s) > 1:
                    for face in combinations(s, len(s) - 1):
                        if face not in self._set:
                            raise ValueError(f"complex is not face-closed: {face} missing (face of {s})")

    @classmethod
    def closure(cls, generators):
        """Smallest complex containing every given simplex."""
        out = set()
        for g in generators:
            g = tuple(sorted(g))
            for k in range(1, len(g) + 1):
                out.update(combinations(g, k))
        return cls(out, check=False)

    @property
    def dim(self) -> int:
        return len(self._by_dim) - 1

    def simplices(self, k=None):
        if k is None:
            return [s for layer in self._by_dim for s in layer]
        if 0 <= k < len(self._by_dim):
            return list(self._by_dim[k])
        return []

    def count(self, k) -> int:
        return len(self._by_dim[k]) if 0 <= k < len(self._by_dim) else 0

    def f_vector(self) -> tuple:
        return tuple(len(layer) for layer in self._by_dim)

    def vertices(self):
        return [s[0] for s in self.simplices(0)]

    def __contains__(self, s):
        return tuple(sorted(s)) in self._set

    def __len__(self):
        return len(self._set)

    def __iter__(self):
        return iter(self.simplices())

    def is_empty(self) -> bool:
        return not self._set

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.f_vector()))

    def __repr__(self):
        return f"ExplicitComplex(f={self.f_vector()})"


def join(a: ExplicitComplex, b: ExplicitComplex) -> ExplicitComplex:
    """Simplicial join; vertices are relabelled ``(0, v)`` and ``(1, w)``."""
    left = [()] + [tuple((0, v) for v in s) for s in a]
    right = [()] + [tuple((1, w) for w in s) for s in b]
    return ExplicitComplex((x + y for x in left for y in right), check=False)


def cone(cx: ExplicitComplex, apex="apex") -> ExplicitComplex:
    """Cone on ``cx``; vertices become ``(0, v)`` and the apex ``(1, apex)``."""
    return join(cx, ExplicitComplex([(apex,)]))


def boundary_matrix(cx: ExplicitComplex, k: int) -> np.ndarray:
    """GF(2) boundary matrix with rows the (k-1)-simplices and columns the k-simplices."""
    if k < 0:
        raise ValueError("k must be non-negative")
    cols = cx.simplices(k)
    rows = cx.simplices(k - 1) if k >= 1 else []
    row_of = {s: i for i, s in enumerate(rows)}
    out = np.zeros((len(rows), len(cols)), dtype=np.uint8)
    if k == 0:
        return out
    for j, s in enumerate(cols):
        for face in combinations(s, k):
            try:
                out[row_of[face], j] = 1
            except KeyError:
                raise ValueError(f"complex is not face-closed: {face} missing") from None
    return out


def _boundary_columns(cx, k, row_of):
    cols = []
    for s in cx.simplices(k):
        bits = 0
        for face in combinations(s, k):
            bits |= 1 << row_of[face]
        cols.append(bits)
    return cols


def gf2_rank(columns) -> int:
    """Rank over GF(2) of a matrix whose columns are integer bitsets."""
    pivots = {}
    for c in columns:
        while c:
            p = c.bit_length() - 1
            other = pivots.get(p)
            if other is None:
                pivots[p] = c
                break
            c ^= other
    return len(pivots)


@dataclass(frozen=True)
class BettiVector:
    """Reduced Betti numbers ``b~_0 .. b~_k`` over GF(2).

    The empty complex has ``b~_{-1} = 1``, recorded by ``empty=True``; it is
    never acyclic.
    """

    reduced: tuple
    empty: bool = False

    def __iter__(self):
        return iter(self.reduced)

    def __len__(self):
        return len(self.reduced)

    def __getitem__(self, k):
        return self.reduced[k]

    @property
    def acyclic(self) -> bool:
        return not self.empty and not any(self.reduced)

    def padded(self, length: int) -> tuple:
        return tuple(self.reduced[:length]) + (0,) * max(0, length - len(self.reduced))

    def to_json(self):
        return {"betti": list(self.reduced), "empty": self.empty}


def betti_numbers(cx: ExplicitComplex, max_k: int, budget=None) -> BettiVector:
    """Reduced GF(2) Betti numbers up to degree ``max_k``.

    Degree ``k`` is exact only if ``cx`` contains all of its (k+1)-simplices,
    which holds for any complex not truncated below dimension ``max_k + 1``.
    """
    if max_k < 0:
        raise ValueError("max_k must be non-negative")
    budget = simplex_budget(budget)
    if len(cx) > budget:
        raise BudgetExceeded(f"complex with {len(cx)} simplices", budget)
    if cx.is_empty():
        return BettiVector((0,) * (max_k + 1), empty=True)
    ranks = [1]  # augmentation: rank of the map to the ground field
    for k in range(1, max_k + 2):
        if cx.count(k) == 0:
            ranks.append(0)
            continue
        row_of = {s: i for i, s in enumerate(cx.simplices(k - 1))}
        ranks.append(gf2_rank(_boundary_columns(cx, k, row_of)))
    betti = tuple(cx.count(k) - ranks[k] - ranks[k + 1] for k in range(max_k + 1))
    return BettiVector(betti)


def is_acyclic(cx: ExplicitComplex, max_k: int, budget=None) -> bool:
    return betti_numbers(cx, max_k, budget).acyclic
