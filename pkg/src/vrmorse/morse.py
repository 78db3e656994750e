"""The Morse function (diam, -dim) on the barycentric subdivision of VR(X).

A vertex of the subdivision is a simplex ``sigma`` of the full complex on X.
Its descending link is spanned by

* descending faces: proper faces with strictly smaller diameter, and
* descending cofaces: ``sigma | S`` with the same diameter, i.e. ``S`` is a
  nonempty clique of the graph on ``W = {w : d(w, f) <= diam(sigma) for f in sigma}``
  with edges at distance ``<= diam(sigma)``.

Every descending face is a face of every descending coface, so the link is the
join of the two parts.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .complex import Simplex, VRComplex, make_simplex
from .errors import BudgetExceeded, simplex_budget
from .homology import BettiVector, ExplicitComplex, betti_numbers
from .metric import FiniteMetricSpace

GLOBAL_HOMOLOGY_CAP = 7


class MorseValue(NamedTuple):
    """(diam, -dim); tuple comparison is the lexicographic order."""

    diam: object
    negdim: int


def _simplex(space, sigma) -> Simplex:
    return sigma if isinstance(sigma, Simplex) else make_simplex(space, sigma)


def morse_value(space: FiniteMetricSpace, sigma) -> MorseValue:
    s = _simplex(space, sigma)
    return MorseValue(space.levels[s.level], -s.dim)


def descending_face_link(space: FiniteMetricSpace, sigma) -> list:
    """Proper nonempty faces of ``sigma`` with strictly smaller diameter."""
    s = _simplex(space, sigma)
    idx = space.index
    out = []
    for r in range(1, len(s.vertices)):
        for face in combinations(s.vertices, r):
            lv = 0 if r == 1 else int(idx[np.ix_(face, face)].max())
            if lv < s.level:
                out.append(face)
    return out


@dataclass(frozen=True)
class CofaceData:
    vertices: tuple  # W
    edges: tuple  # pairs of W at distance <= diam(sigma)


def descending_coface_data(space: FiniteMetricSpace, sigma, t_ambient=None) -> CofaceData:
    """The graph whose flag complex is the descending coface link.

    ``W`` ranges over the whole space; descending cofaces have the same
    diameter as ``sigma`` so they lie in every VR complex containing ``sigma``.
    """
    s = _simplex(space, sigma)
    if t_ambient is not None and space.level_le(t_ambient) < s.level:
        raise ValueError("simplex is not in the VR complex at the ambient scale")
    idx = space.index
    verts = list(s.vertices)
    mask = (idx[verts] <= s.level).all(axis=0)
    mask[verts] = False
    w = [int(x) for x in np.flatnonzero(mask)]
    edges = tuple((a, b) for a, b in combinations(w, 2) if idx[a, b] <= s.level)
    return CofaceData(tuple(w), edges)


def _cliques(vertices, edges, max_size):
    """Nonempty cliques (sorted tuples) of a graph, up to ``max_size`` vertices."""
    pos = {v: i for i, v in enumerate(vertices)}
    higher = [0] * len(vertices)
    for a, b in edges:
        i, j = sorted((pos[a], pos[b]))
        higher[i] |= 1 << j
    out = []

    def grow(clique, cand):
        out.append(tuple(vertices[i] for i in clique))
        if len(clique) == max_size:
            return
        while cand:
            low = cand & -cand
            cand ^= low
            j = low.bit_length() - 1
            clique.append(j)
            grow(clique, cand & higher[j])
            clique.pop()

    if max_size >= 1:
        for i in range(len(vertices)):
            grow([i], higher[i])
    return out


@dataclass(frozen=True)
class DescendingLink:
    simplex: Simplex
    face_part: tuple
    coface: CofaceData

    @property
    def is_empty(self) -> bool:
        return not self.face_part and not self.coface.vertices

    def coface_cliques(self, max_size=None):
        size = len(self.coface.vertices) if max_size is None else max_size
        return _cliques(list(self.coface.vertices), self.coface.edges, size)

    def barycentric_vertices(self) -> set:
        """Descending faces and descending cofaces as vertex tuples."""
        base = self.simplex.vertices
        cof = {tuple(sorted(base + c)) for c in self.coface_cliques()}
        return set(self.face_part) | cof

    def complex(self, max_dim=None, budget=None) -> ExplicitComplex:
        """The join (descending face complex) * flag(W), up to ``max_dim``.

        The descending faces form a subcomplex of the boundary of ``sigma``;
        its barycentric subdivision is the face link, so the two agree up to
        homeomorphism.  Vertices are point indices.
        """
        budget = simplex_budget(budget)
        cap = None if max_dim is None else max_dim + 1
        faces = [()] + list(self.face_part)
        cof = [()] + self.coface_cliques(cap)
        if len(faces) * len(cof) - 1 > budget:
            raise BudgetExceeded("descending link join", budget)
        out = []
        for a in faces:
            for b in cof:
                if (a or b) and (cap is None or len(a) + len(b) <= cap):
                    out.append(tuple(sorted(a + b)))
        return ExplicitComplex(out, check=False)


def descending_link(space: FiniteMetricSpace, sigma) -> DescendingLink:
    s = _simplex(space, sigma)
    return DescendingLink(s, tuple(descending_face_link(space, s)), descending_coface_data(space, s))


class LinkKind(str, Enum):
    CONE_FACE = "CONE_FACE"
    CONE_COFACE = "CONE_COFACE"
    ACYCLIC = "ACYCLIC"
    NONTRIVIAL = "NONTRIVIAL"
    EMPTY = "EMPTY"


@dataclass(frozen=True)
class DLinkClassification:
    simplex: tuple
    level: int
    kind: LinkKind
    witness: int | None = None
    betti: tuple | None = None

    @property
    def certified_contractible(self) -> bool:
        # acyclic links are not certified: simple connectivity is never checked
        return self.kind in (LinkKind.CONE_FACE, LinkKind.CONE_COFACE)

    def to_json(self, space=None) -> dict:
        from .metric import format_value

        out = {"simplex": list(self.simplex), "kind": self.kind.value}
        if space is not None:
            out["diam"] = format_value(space.levels[self.level])
        if self.witness is not None:
            out["z"] = self.witness
        if self.betti is not None:
            out["betti"] = list(self.betti)
        if self.kind == LinkKind.ACYCLIC:
            out["certified_contractible"] = False
        return out


def face_cone_witness(link: DescendingLink):
    """Smallest ``z`` in sigma with ``f | {z}`` descending for every descending face ``f``."""
    faces = set(link.face_part)
    if not faces:
        return None
    for z in link.simplex.vertices:
        if all(tuple(sorted(set(f) | {z})) in faces for f in faces):
            return z
    return None


def coface_cone_witness(link: DescendingLink):
    """Smallest ``z`` in W adjacent (within diam sigma) to every other point of W."""
    w = link.coface.vertices
    if not w:
        return None
    nbrs = defaultdict(set)
    for a, b in link.coface.edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    for z in w:
        if len(nbrs[z]) == len(w) - 1:
            return z
    return None


def _flag_dim(link: DescendingLink) -> int:
    if not link.coface.vertices:
        return -1
    cl = link.coface_cliques(GLOBAL_HOMOLOGY_CAP + 2)
    return max(len(c) for c in cl) - 1


def classify_descending_link(space: FiniteMetricSpace, sigma, homology_cap=None, budget=None) -> DLinkClassification:
    """Cone witnesses first (face side, then coface side), then the homology fallback."""
    link = descending_link(space, sigma)
    s = link.simplex
    if link.is_empty:
        return DLinkClassification(s.vertices, s.level, LinkKind.EMPTY)
    z = face_cone_witness(link)
    if z is not None:
        return DLinkClassification(s.vertices, s.level, LinkKind.CONE_FACE, z)
    z = coface_cone_witness(link)
    if z is not None:
        return DLinkClassification(s.vertices, s.level, LinkKind.CONE_COFACE, z)
    if homology_cap is None:
        p = max((len(f) for f in link.face_part), default=0) - 1
        homology_cap = min(p + _flag_dim(link) + 1, GLOBAL_HOMOLOGY_CAP)
    homology_cap = max(homology_cap, 0)
    cx = link.complex(max_dim=homology_cap + 1, budget=budget)
    betti = betti_numbers(cx, homology_cap, budget)
    if betti.acyclic:
        return DLinkClassification(s.vertices, s.level, LinkKind.ACYCLIC, betti=betti.reduced)
    return DLinkClassification(s.vertices, s.level, LinkKind.NONTRIVIAL, betti=_trim(betti))


def _trim(betti: BettiVector) -> tuple:
    vals = list(betti.reduced)
    while len(vals) > 1 and vals[-1] == 0:
        vals.pop()
    return tuple(vals)


# -- attachment order --------------------------------------------------


@dataclass
class AttachmentReport:
    passed: bool
    checked: int
    position: int | None = None
    simplex: tuple | None = None
    expected: frozenset | None = None
    found: frozenset | None = None

    def __bool__(self):
        return self.passed


def _coface_map(simplices):
    cofaces = defaultdict(list)
    for s in simplices:
        for r in range(1, len(s)):
            for f in combinations(s, r):
                cofaces[f].append(s)
    return cofaces


def _sweep(simplices, order, expected_of):
    order = [tuple(s) for s in order]
    universe = [tuple(s) for s in simplices]
    if len(order) != len(universe) or set(order) != set(universe):
        raise ValueError("order is not a permutation of the complex")
    pos = {s: i for i, s in enumerate(order)}
    cofaces = _coface_map(universe)
    for k, s in enumerate(order):
        faces = [f for r in range(1, len(s)) for f in combinations(s, r)]
        nbrs = faces + cofaces.get(s, [])
        found = frozenset(x for x in nbrs if pos[x] < k)
        expected = frozenset(expected_of(s, faces, cofaces.get(s, [])))
        if found != expected:
            return AttachmentReport(False, k, k, s, expected, found)
    return AttachmentReport(True, len(order))


def verify_attachment_property(cx: VRComplex, order) -> AttachmentReport:
    """Sweep ``order``; at each step the attached barycentric neighbours must be the descending link.

    The descending link is computed from the face/coface description, not
    from comparing Morse values, so a pass is a genuine check of the order.
    """
    space = cx.space
    order = [s.vertices if isinstance(s, Simplex) else tuple(s) for s in order]

    def expected_of(s, faces, cofaces):
        link = descending_link(space, s)
        w = set(link.coface.vertices)
        edges = set(link.coface.edges)
        out = set(link.face_part)
        base = set(s)
        for c in cofaces:
            extra = sorted(set(c) - base)
            if set(extra) <= w and all(p in edges for p in combinations(extra, 2)):
                out.add(c)
        return out

    return _sweep([s.vertices for s in cx], order, expected_of)


def verify_order_against_values(cx: ExplicitComplex, order, value) -> AttachmentReport:
    """Generic sweep: attached neighbours must be those with strictly smaller ``value``."""

    def expected_of(s, faces, cofaces):
        v = value(s)
        return [x for x in list(faces) + list(cofaces) if value(x) < v]

    return _sweep(cx.simplices(), order, expected_of)
