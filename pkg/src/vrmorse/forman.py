"""Forman discrete Morse functions and their (h, -dim) recast.

A Forman function ``h`` assigns a number to each simplex so that every
``k``-simplex has at most one codimension-one coface with ``h`` not larger and
at most one codimension-one face with ``h`` not smaller, and never both.  The
simplices then split into redundant (matched with a coface), collapsible
(matched with a face) and critical ones.

The pair ``(h, -dim)``, compared lexicographically on the barycentric
subdivision, is a descending-type Morse function.  A barycentric neighbour
``tau`` of ``sigma`` is descending when ``h(tau) < h(sigma)``, or when the
values tie and ``tau`` is a coface.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations

from .homology import BettiVector, ExplicitComplex, betti_numbers


class SimplexClass(str, Enum):
    REDUNDANT = "REDUNDANT"
    COLLAPSIBLE = "COLLAPSIBLE"
    CRITICAL = "CRITICAL"


def _as_map(cx: ExplicitComplex, h) -> dict:
    if callable(h):
        h = {s: h(s) for s in cx}
    out = {}
    for s in cx:
        try:
            out[s] = h[s]
        except KeyError:
            raise ValueError(f"h is not defined on {s}") from None
    return out


def _facets(s):
    return list(combinations(s, len(s) - 1)) if len(s) > 1 else []


def _cofacets(cx: ExplicitComplex):
    out = {s: [] for s in cx}
    for s in cx:
        for f in _facets(s):
            out[f].append(s)
    return out


@dataclass(frozen=True)
class FormanViolation:
    simplex: tuple
    kind: str  # cofaces | faces | both
    partners: tuple


@dataclass
class FormanReport:
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def _low_cofaces(s, h, cof):
    return tuple(c for c in cof[s] if h[c] <= h[s])


def _high_faces(s, h):
    return tuple(f for f in _facets(s) if h[f] >= h[s])


def validate_forman(cx: ExplicitComplex, h) -> FormanReport:
    """Check both cardinality bounds and their mutual exclusion for every simplex."""
    h = _as_map(cx, h)
    cof = _cofacets(cx)
    bad = []
    for s in cx:
        up = _low_cofaces(s, h, cof)
        down = _high_faces(s, h)
        if len(up) > 1:
            bad.append(FormanViolation(s, "cofaces", up))
        if len(down) > 1:
            bad.append(FormanViolation(s, "faces", down))
        if len(up) == 1 and len(down) == 1:
            bad.append(FormanViolation(s, "both", up + down))
    return FormanReport(bad)


@dataclass
class Classification:
    classes: dict  # simplex -> SimplexClass
    matching: dict  # redundant simplex -> its coface
    critical_counts: tuple

    def partner(self, s):
        """Matched coface of a redundant simplex or matched face of a collapsible one."""
        if s in self.matching:
            return self.matching[s]
        for a, b in self.matching.items():
            if b == s:
                return a
        return None

    def to_json(self) -> dict:
        return {
            "classes": [{"simplex": list(s), "class": c.value} for s, c in self.classes.items()],
            "matching": [[list(a), list(b)] for a, b in self.matching.items()],
            "critical_counts": list(self.critical_counts),
        }


def classify_simplices(cx: ExplicitComplex, h) -> Classification:
    h = _as_map(cx, h)
    report = validate_forman(cx, h)
    if not report.ok:
        v = report.violations[0]
        raise ValueError(f"not a Forman function: {v.simplex} has {v.kind} {v.partners}")
    cof = _cofacets(cx)
    classes, matching = {}, {}
    for s in cx:
        up = _low_cofaces(s, h, cof)
        down = _high_faces(s, h)
        if up:
            classes[s] = SimplexClass.REDUNDANT
            matching[s] = up[0]
        elif down:
            classes[s] = SimplexClass.COLLAPSIBLE
        else:
            classes[s] = SimplexClass.CRITICAL
    matched_faces = {}
    for s, c in classes.items():
        if c == SimplexClass.COLLAPSIBLE:
            matched_faces[s] = _high_faces(s, h)[0]
    # the two matchings must be inverse to each other
    if {v: k for k, v in matching.items()} != matched_faces:
        raise AssertionError("redundant/collapsible matching is not a bijection")
    counts = [0] * (cx.dim + 1)
    for s, c in classes.items():
        if c == SimplexClass.CRITICAL:
            counts[len(s) - 1] += 1
    return Classification(classes, matching, tuple(counts))


# -- recast as (h, -dim) -----------------------------------------------


@dataclass
class BBData:
    values: dict  # simplex -> (h, -dim)
    order: list  # simplices in increasing value, ties by vertex list
    rank: dict  # simplex -> position in ``order`` (the real embedding)

    def adjacent_values_distinct(self) -> bool:
        for s in self.values:
            for f in _facets(s):
                if self.values[f] == self.values[s]:
                    return False
        return True

    def descending_rays_absent(self) -> bool:
        """Every face/coface step changes the value, so descending paths strictly
        decrease a finite total order and must stop."""
        return self.adjacent_values_distinct()

    def needs_dim_tiebreak(self) -> bool:
        """True when some face/coface pair has equal ``h``."""
        return any(self.values[f][0] == self.values[s][0] for s in self.values for f in _facets(s))


def recast_bb(cx: ExplicitComplex, h) -> BBData:
    h = _as_map(cx, h)
    values = {s: (h[s], -(len(s) - 1)) for s in cx}
    order = sorted(cx, key=lambda s: (values[s], s))
    return BBData(values, order, {s: i for i, s in enumerate(order)})


# -- descending links --------------------------------------------------


def _proper_faces(s):
    return [f for r in range(1, len(s)) for f in combinations(s, r)]


def _order_complex(elements) -> ExplicitComplex:
    """Chains of the poset of simplices ordered by inclusion."""
    elems = sorted(set(elements), key=lambda s: (len(s), s))
    above = {a: [b for b in elems if len(b) > len(a) and set(a) <= set(b)] for a in elems}
    pos = {s: i for i, s in enumerate(elems)}
    chains = []

    def grow(chain):
        chains.append(tuple(pos[c] for c in chain))
        for b in above[chain[-1]]:
            chain.append(b)
            grow(chain)
            chain.pop()

    for a in elems:
        grow([a])
    return ExplicitComplex(chains, check=False)


@dataclass(frozen=True)
class LinkCheck:
    simplex: tuple
    cls: SimplexClass
    expected: frozenset
    found: frozenset
    betti: BettiVector
    shape_ok: bool
    homology_ok: bool


@dataclass
class DescendingReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.shape_ok and c.homology_ok for c in self.checks)

    @property
    def mismatches(self) -> list:
        return [c for c in self.checks if not (c.shape_ok and c.homology_ok)]

    def __bool__(self):
        return self.passed


def descending_neighbours(cx: ExplicitComplex, h, s) -> frozenset:
    """Faces and cofaces of ``s`` below it in the (h, -dim) order."""
    h = h if isinstance(h, dict) else _as_map(cx, h)
    faces = [f for f in _proper_faces(s) if h[f] < h[s]]
    base = set(s)
    cofaces = [c for c in cx if len(c) > len(s) and base <= set(c) and h[c] <= h[s]]
    return frozenset(faces + cofaces)


def verify_descending_types(cx: ExplicitComplex, h, classification=None) -> DescendingReport:
    """Materialise each descending link and compare with the predicted shape.

    Redundant: all of the boundary joined with the matched coface (a cone).
    Collapsible: the boundary minus the matched facet (a ball).
    Critical: the whole boundary, a ``(k-1)``-sphere.
    """
    h = _as_map(cx, h)
    cl = classification or classify_simplices(cx, h)
    report = DescendingReport()
    for s in cx:
        c = cl.classes[s]
        faces = set(_proper_faces(s))
        if c == SimplexClass.REDUNDANT:
            expected = faces | {cl.matching[s]}
        elif c == SimplexClass.COLLAPSIBLE:
            expected = faces - {cl.partner(s)}
        else:
            expected = faces
        found = descending_neighbours(cx, h, s)
        link = _order_complex(found)
        k = len(s) - 1
        betti = betti_numbers(link, max(k, 1))
        if c == SimplexClass.CRITICAL:
            sphere = tuple(1 if i == k - 1 else 0 for i in range(max(k, 1) + 1))
            homology_ok = betti.empty if k == 0 else (not betti.empty and betti.reduced == sphere)
        else:
            homology_ok = betti.acyclic
        report.checks.append(LinkCheck(s, c, frozenset(expected), found, betti,
                                       frozenset(expected) == found, homology_ok))
    return report


def weak_morse_inequalities(cx: ExplicitComplex, classification: Classification) -> bool:
    """``b~_k <= c_k`` over GF(2); the critical vertex pays for ``b~_0 + 1``."""
    b = betti_numbers(cx, max(cx.dim, 0))
    c = classification.critical_counts
    if not c or c[0] < b[0] + 1:
        return False
    return all(b[k] <= c[k] for k in range(1, len(c)))


# -- random instances and I/O -------------------------------------------


def random_complex(rng: random.Random, n_vertices=6, n_generators=4, max_dim=3) -> ExplicitComplex:
    gens = []
    for _ in range(n_generators):
        k = rng.randint(1, min(max_dim + 1, n_vertices))
        gens.append(tuple(sorted(rng.sample(range(n_vertices), k))))
    return ExplicitComplex.closure(gens)


def _has_cycle(succ) -> bool:
    state = {}

    def visit(u):
        state[u] = 1
        for v in succ[u]:
            if state.get(v) == 1 or (v not in state and visit(v)):
                return True
        state[u] = 2
        return False

    return any(u not in state and visit(u) for u in succ)


def random_forman_function(cx: ExplicitComplex, rng: random.Random, attempts=None) -> dict:
    """A valid Forman function from a random acyclic matching.

    Every face relation points up except matched pairs, which point down;
    ``h`` is a random topological order of that digraph, so each simplex sits
    strictly above all of its faces other than a matched one.
    """
    simplices = cx.simplices()
    succ = {s: set() for s in simplices}
    for s in simplices:
        for f in _proper_faces(s):
            succ[f].add(s)
    pairs = [(f, s) for s in simplices for f in _facets(s)]
    rng.shuffle(pairs)
    matched = set()
    for f, s in pairs[: attempts or len(pairs)]:
        if f in matched or s in matched:
            continue
        succ[f].discard(s)
        succ[s].add(f)
        if _has_cycle(succ):
            succ[s].discard(f)
            succ[f].add(s)
            continue
        matched.update((f, s))
    indeg = {s: 0 for s in simplices}
    for u in simplices:
        for v in succ[u]:
            indeg[v] += 1
    ready = sorted(s for s in simplices if indeg[s] == 0)
    h = {}
    while ready:
        u = ready.pop(rng.randrange(len(ready)))
        h[u] = len(h)
        for v in sorted(succ[u]):
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
    return h


def load_forman_json(text: str):
    """Parse ``{"simplices": [[0],[1],[0,1]], "h": [0,2,1]}``."""
    data = json.loads(text)
    simplices = [tuple(s) for s in data["simplices"]]
    hs = data["h"]
    if len(hs) != len(simplices):
        raise ValueError("h must have one value per simplex")
    cx = ExplicitComplex(simplices)
    h = {tuple(sorted(s)): _number(v) for s, v in zip(simplices, hs)}
    return cx, h


def _number(v):
    if isinstance(v, str):
        return Fraction(v)
    return v


def forman_report_json(cx: ExplicitComplex, h) -> dict:
    report = validate_forman(cx, h)
    out = {"valid": report.ok,
           "violations": [{"simplex": list(v.simplex), "kind": v.kind,
                           "partners": [list(p) for p in v.partners]} for v in report.violations]}
    if report.ok:
        cl = classify_simplices(cx, h)
        out.update(cl.to_json())
        desc = verify_descending_types(cx, h, cl)
        out["descending_types_ok"] = desc.passed
        out["mismatches"] = [list(c.simplex) for c in desc.mismatches]
        out["weak_morse_inequalities"] = weak_morse_inequalities(cx, cl)
    return out
