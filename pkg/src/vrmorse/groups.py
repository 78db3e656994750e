"""Word metrics on finitely generated groups and finite criterion evidence.

Three kinds of group are supported:

* ``free_abelian``: Z^n, elements are integer tuples.  Standard generators
  give the l1 metric; other generating sets use a BFS distance table.
* ``free_group``: F_k, elements are reduced words (tuples of nonzero ints,
  ``-a`` the inverse of generator ``a``).  ``d(g, h) = |reduced(g^-1 h)|``.
* ``explicit_cayley``: a finite Cayley graph given by its edges; it has to be
  the whole group.

For the first two, left translation is an isometry, so checking pairs
``(1, y)`` covers every pair.  For a pair at distance ``t`` every lens point
and every possible witness lies in the closed ``t``-ball around the identity,
which is therefore the only part of the group a scale-``t`` check touches.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

from .criteria import ScaleVerdict, pinched_strong_link_criterion
from .errors import BudgetExceeded, simplex_budget
from .metric import EXACT, FiniteMetricSpace

FREE_ABELIAN = "free_abelian"
FREE_GROUP = "free_group"
EXPLICIT = "explicit_cayley"


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    rank: int = 0
    generators: tuple = ()  # free_abelian: symmetric tuple of vectors
    edges: tuple = ()  # explicit_cayley: (u, v, generator)
    identity: object = None

    def __post_init__(self):
        if self.kind == FREE_ABELIAN:
            if self.rank < 1:
                raise ValueError("free_abelian needs rank >= 1")
            gens = self.generators or tuple(
                tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))
            sym = set()
            for g in gens:
                g = tuple(int(c) for c in g)
                if len(g) != self.rank:
                    raise ValueError(f"generator {g} has the wrong length")
                if not any(g):
                    raise ValueError("the identity cannot be a generator")
                sym.add(g)
                sym.add(tuple(-c for c in g))
            object.__setattr__(self, "generators", tuple(sorted(sym)))
            object.__setattr__(self, "identity", (0,) * self.rank)
        elif self.kind == FREE_GROUP:
            if self.rank < 1:
                raise ValueError("free_group needs rank >= 1")
            object.__setattr__(self, "identity", ())
            object.__setattr__(self, "generators", tuple(sorted(
                [a for a in range(1, self.rank + 1)] + [-a for a in range(1, self.rank + 1)])))
        elif self.kind == EXPLICIT:
            if not self.edges:
                raise ValueError("explicit Cayley graph needs at least one edge")
            if any(u == v for u, v, _ in self.edges):
                raise ValueError("loops would make the identity a generator")
            if self.identity is None:
                object.__setattr__(self, "identity", self.edges[0][0])
            object.__setattr__(self, "generators", tuple(sorted({str(g) for _, _, g in self.edges})))
        else:
            raise ValueError(f"unknown group kind {self.kind!r}")

    @property
    def translatable(self) -> bool:
        return self.kind in (FREE_ABELIAN, FREE_GROUP)

    @property
    def standard(self) -> bool:
        return self.kind == FREE_ABELIAN and all(sum(map(abs, g)) == 1 for g in self.generators)

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == EXPLICIT:
            out["edges"] = [list(e) for e in self.edges]
            out["identity"] = self.identity
        else:
            out["rank"] = self.rank
        if self.kind == FREE_ABELIAN and not self.standard:
            out["generators"] = [list(g) for g in self.generators]
        return out


def parse_group_spec(text: str, edges=None, identity=None) -> GroupSpec:
    """``free_group:2``, ``free_abelian:3`` or a JSON object; ``explicit`` needs ``edges``."""
    text = text.strip()
    if text.startswith("{"):
        data = json.loads(text)
        kind = data["kind"]
        if kind == EXPLICIT:
            es = tuple(tuple(e) for e in data.get("edges", edges or ()))
            return GroupSpec(EXPLICIT, edges=es, identity=data.get("identity", identity))
        return GroupSpec(kind, int(data["rank"]), tuple(tuple(g) for g in data.get("generators", ())))
    kind, _, arg = text.partition(":")
    if kind in ("explicit", EXPLICIT):
        return GroupSpec(EXPLICIT, edges=tuple(edges or ()), identity=identity)
    if kind not in (FREE_ABELIAN, FREE_GROUP):
        raise ValueError(f"unknown group spec {text!r}")
    return GroupSpec(kind, int(arg or 1))


def reduce_word(word) -> tuple:
    out = []
    for a in word:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def inverse_word(word) -> tuple:
    return tuple(-a for a in reversed(word))


def free_group_distance(g, h) -> int:
    """Length of the reduced word ``g^-1 h`` for reduced ``g`` and ``h``."""
    k = 0
    while k < len(g) and k < len(h) and g[k] == h[k]:
        k += 1
    return len(g) + len(h) - 2 * k


def _bfs(start, neighbours, radius):
    dist = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if dist[u] == radius:
            continue
        for v in neighbours(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


class CayleyBall:
    """All elements at word distance ``<= radius`` from the identity.

    Elements are sorted by distance from the identity, then by canonical form,
    so the identity is index 0.  Pairwise distances are computed in the
    whole group, never in the truncated ball.
    """

    def __init__(self, spec: GroupSpec, radius: int, elements, dist0, distance_fn):
        self.spec = spec
        self.radius = radius
        self.elements = list(elements)
        self.dist0 = list(dist0)
        self._distance = distance_fn
        self.position = {g: i for i, g in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    @property
    def identity(self):
        return self.spec.identity

    def distance(self, g, h) -> int:
        return self._distance(g, h)

    def sphere(self, t: int) -> list:
        return [g for g, d in zip(self.elements, self.dist0) if d == t]

    def sub_ball(self, t: int) -> list:
        return [g for g, d in zip(self.elements, self.dist0) if d <= t]

    def space_of(self, elements) -> FiniteMetricSpace:
        elements = list(elements)
        n = len(elements)
        table = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                table[i][j] = table[j][i] = self._distance(elements[i], elements[j])
        labels = [_label(g) for g in elements]
        return FiniteMetricSpace(labels, table, EXACT,
                                 provenance={"generator": "cayley_ball", "group": self.spec.to_json(),
                                             "radius": self.radius})

    @cached_property
    def space(self) -> FiniteMetricSpace:
        return self.space_of(self.elements)

    def bfs_distance(self, g, h) -> int | None:
        """Path length inside the truncated ball (for cross-checks)."""
        target = h
        seen = {g: 0}
        queue = deque([g])
        while queue:
            u = queue.popleft()
            if u == target:
                return seen[u]
            for v in _neighbours(self.spec, u):
                if v in self.position and v not in seen:
                    seen[v] = seen[u] + 1
                    queue.append(v)
        return None


def _label(g):
    if isinstance(g, tuple):
        return "(" + ",".join(str(c) for c in g) + ")"
    return str(g)


def _explicit_adjacency(spec):
    adj = {}
    for u, v, _ in spec.edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return {k: sorted(vs, key=str) for k, vs in adj.items()}


def _neighbours(spec, g):
    if spec.kind == FREE_ABELIAN:
        return [tuple(a + b for a, b in zip(g, s)) for s in spec.generators]
    if spec.kind == FREE_GROUP:
        return [reduce_word(g + (a,)) for a in spec.generators]
    return _explicit_adjacency(spec).get(g, [])


def cayley_ball(spec: GroupSpec, radius: int, budget=None) -> CayleyBall:
    if radius < 0:
        raise ValueError("radius must be non-negative")
    budget = simplex_budget(budget)
    if spec.kind == FREE_GROUP:
        size = 1 + sum(2 * spec.rank * (2 * spec.rank - 1) ** (k - 1) for k in range(1, radius + 1))
        if size > budget:
            raise BudgetExceeded(f"ball of radius {radius} in F_{spec.rank}", budget)
        words = [()]
        frontier = [()]
        for _ in range(radius):
            frontier = [w + (a,) for w in frontier for a in spec.generators if not w or w[-1] != -a]
            words.extend(frontier)
        elements = sorted(words, key=lambda w: (len(w), w))
        return CayleyBall(spec, radius, elements, [len(w) for w in elements], free_group_distance)

    if spec.kind == FREE_ABELIAN:
        if spec.standard:
            n = spec.rank
            pts = [v for v in product(range(-radius, radius + 1), repeat=n) if sum(map(abs, v)) <= radius]
            if len(pts) > budget:
                raise BudgetExceeded(f"ball of radius {radius} in Z^{n}", budget)
            elements = sorted(pts, key=lambda v: (sum(map(abs, v)), v))

            def l1(g, h):
                return sum(abs(a - b) for a, b in zip(g, h))

            return CayleyBall(spec, radius, elements, [l1(v, spec.identity) for v in elements], l1)
        # general generators: differences of ball elements have length <= 2R
        table = _bfs(spec.identity, lambda g: _neighbours(spec, g), 2 * radius)
        if len(table) > budget:
            raise BudgetExceeded(f"distance table of radius {2 * radius}", budget)
        elements = sorted((g for g, d in table.items() if d <= radius), key=lambda v: (table[v], v))

        def dist(g, h):
            return table[tuple(b - a for a, b in zip(g, h))]

        return CayleyBall(spec, radius, elements, [table[g] for g in elements], dist)

    adj = _explicit_adjacency(spec)
    if spec.identity not in adj:
        raise ValueError(f"identity {spec.identity!r} is not a vertex of the Cayley graph")
    if len(adj) > budget:
        raise BudgetExceeded("explicit Cayley graph", budget)
    full = {u: _bfs(u, lambda g: adj.get(g, []), len(adj)) for u in adj}
    if len(full[spec.identity]) != len(adj):
        raise ValueError("explicit Cayley graph is not connected")
    d0 = full[spec.identity]
    elements = sorted((g for g in adj if d0[g] <= radius), key=lambda g: (d0[g], str(g)))
    return CayleyBall(spec, radius, elements, [d0[g] for g in elements], lambda g, h: full[g][h])


# -- criterion evidence ------------------------------------------------


@dataclass
class GroupVerdict:
    scale: int
    verdict: ScaleVerdict
    elements: list  # labels in the local space
    coverage: str  # translation | all_pairs | anchored

    @property
    def status(self):
        return self.verdict.status

    def label(self, i):
        return self.elements[i]

    def to_json(self) -> dict:
        out = self.verdict.to_json()
        out["scale"] = str(self.scale)
        out["coverage"] = self.coverage
        out["witnesses"] = [{"pair": [self.label(a), self.label(b)], "z": self.label(z)}
                            for (a, b), z in sorted(self.verdict.witnesses.items())]
        if self.verdict.failures:
            out["failures"] = [
                {"pair": [self.label(p) for p in f.pair],
                 "obstruction": [self.label(p) for p in f.obstruction] if f.obstruction else None}
                for f in self.verdict.failures
            ]
        return out


def _local(ball: CayleyBall, t: int):
    if t < 1:
        raise ValueError("scale must be a positive integer")
    if ball.spec.translatable:
        if t > ball.radius:
            raise ValueError(f"scale {t} exceeds the ball radius {ball.radius}: no checkable pairs")
        elems = ball.sub_ball(t)
        return elems, ball.space_of(elems), [0], "translation"
    if len(ball.elements) == len(_explicit_adjacency(ball.spec)):
        return ball.elements, ball.space, None, "all_pairs"
    safe = [i for i, d in enumerate(ball.dist0) if d + t <= ball.radius]
    if not safe:
        raise ValueError(f"scale {t} leaves no boundary-safe points in radius {ball.radius}")
    return ball.elements, ball.space, safe, "anchored"


def boundary_safe_strong_check(ball: CayleyBall, t: int, r=0) -> GroupVerdict:
    """Strong Link Criterion at integer scale ``t`` on the pairs the ball can decide.

    A pair is decidable when the closed ``t``-ball around one of its points
    lies in the ball: the lens and every witness candidate are then inside.
    """
    elems, space, anchors, coverage = _local(ball, t)
    if not any(d == t for d in ball.dist0):
        raise ValueError(f"no element at distance {t}")
    verdict = pinched_strong_link_criterion(space, t, r, anchors)
    return GroupVerdict(t, verdict, [_label(g) for g in elems], coverage)


# -- combings ----------------------------------------------------------


def prefix_combing(g, n):
    """Free group: the length-``n`` prefix of the reduced word."""
    return tuple(g[:n])


def staircase_combing(g, n):
    """Z^n: step along the coordinate with the most remaining distance (ties: lowest axis)."""
    pos = [0] * len(g)
    for _ in range(min(n, sum(map(abs, g)))):
        rem = [abs(a - b) for a, b in zip(g, pos)]
        i = rem.index(max(rem))
        pos[i] += 1 if g[i] > pos[i] else -1
    return tuple(pos)


@dataclass
class CombingResult:
    element: object
    length: int
    step: int | None  # None: no n works
    skipped: bool = False


@dataclass
class CombingReport:
    N: int
    scales: list
    results: list = field(default_factory=list)
    errors: list = field(default_factory=list)  # geodesic-invariant violations

    @property
    def passed(self) -> bool:
        return not self.errors and all(r.skipped or r.step is not None for r in self.results)

    @property
    def failures(self) -> list:
        return [r for r in self.results if not r.skipped and r.step is None]

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "scales": self.scales,
            "passed": self.passed,
            "checked": sum(not r.skipped for r in self.results),
            "failures": [_label(r.element) for r in self.failures],
            "errors": self.errors,
        }


def validate_combing(ball: CayleyBall, oracle, elements=None) -> list:
    """Geodesic combing invariants on the given elements; a list of problems."""
    one = ball.identity
    problems = []
    for g in elements if elements is not None else ball.elements:
        L = ball.distance(one, g)
        path = [oracle(g, n) for n in range(L + 2)]
        if path[0] != one:
            problems.append(f"s({_label(g)})(0) is not the identity")
        for n in range(L + 1):
            if ball.distance(path[n], path[n + 1]) > 1:
                problems.append(f"s({_label(g)}) jumps at step {n}")
            if ball.distance(one, path[n]) != min(n, L):
                problems.append(f"s({_label(g)}) is not geodesic at step {n}")
        if path[L] != g or path[L + 1] != g:
            problems.append(f"s({_label(g)}) does not end at g")
    return problems


def good_combing_check(ball: CayleyBall, oracle, N: int, scales=None) -> CombingReport:
    """For each ``g`` with ``|g| = t >= N`` look for ``n`` putting ``z = s(g)(n)``
    strictly within ``t`` of every ``h`` with ``|h| <= t`` and ``d(h, g) <= t``.

    Only translatable groups are supported.  ``scales`` defaults to
    ``N .. radius // 2`` to keep the pairwise tables small.
    """
    if not ball.spec.translatable:
        raise ValueError("combing checks need a free abelian or free group")
    if scales is None:
        scales = list(range(max(N, 1), ball.radius // 2 + 1))
    scales = sorted(set(int(t) for t in scales))
    if scales and scales[-1] > ball.radius:
        raise ValueError("scale exceeds the ball radius")
    report = CombingReport(N, scales)
    for g, d in zip(ball.elements, ball.dist0):
        if 0 < d < N:
            report.results.append(CombingResult(g, d, None, skipped=True))
    errors = validate_combing(ball, oracle, [g for g, d in zip(ball.elements, ball.dist0) if d in scales])
    if errors:
        report.errors = errors
        return report
    for t in scales:
        if t < N:
            continue
        elems = ball.sub_ball(t)
        pos = {g: i for i, g in enumerate(elems)}
        dist = np.array(ball.space_of(elems).table, dtype=np.int64)
        for g in ball.sphere(t):
            gi = pos[g]
            lens = np.flatnonzero(dist[gi] <= t)  # |h| <= t holds for all of elems
            step = None
            for n in range(t + 1):
                z = pos[oracle(g, n)]
                if (dist[z, lens] < t).all():
                    step = n
                    break
            report.results.append(CombingResult(g, t, step))
    return report


def suggested_threshold(delta) -> int:
    """Smallest integer ``N > 4 * delta + 1`` for a ``delta``-hyperbolic group."""
    if delta < 0:
        raise ValueError("delta must be non-negative")
    bound = 4 * delta + 1
    n = int(bound)
    return n + 1 if n <= bound else n
