"""Link, Strong Link and pinched Strong Link criteria on finite metric spaces.

Balls follow the usual conventions: ``B_t(z)`` is open (``d < t``) and
``Bbar_t(z)`` is closed (``d <= t``).  The face case of the Link Criterion uses
the open ball, the coface case closed balls; the strong criteria ask the
closed lens ``Bbar_t(x) & Bbar_t(y)`` to sit inside an open ball.

``anchors`` restricts checks to pairs (or subsets) containing an anchored
point.  Use it when the finite space is a window into a larger space and the
anchors are points whose whole closed ``t``-ball lies in the window: the lens
then lies in the window, and so does every candidate witness, because the
anchor itself is in the lens.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

import numpy as np

from .metric import APPROX, EXACT, SQUARED, FiniteMetricSpace, format_value


class Status(str, Enum):
    SATISFIED_FACE = "SATISFIED_FACE"
    SATISFIED_COFACE = "SATISFIED_COFACE"
    FAILED = "FAILED"
    CERTIFIED = "CERTIFIED"
    REFUTED = "REFUTED"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class LinkVerdict:
    subset: tuple
    level: int
    status: Status
    witness: int | None = None

    @property
    def satisfied(self) -> bool:
        return self.status in (Status.SATISFIED_FACE, Status.SATISFIED_COFACE)


def _check_subset(space, subset):
    f = tuple(sorted(set(int(v) for v in subset)))
    if not f:
        raise ValueError("subset must be nonempty")
    if f[0] < 0 or f[-1] >= space.n:
        raise ValueError(f"{f} is not a subset of the space")
    return f


def link_criterion(space: FiniteMetricSpace, subset) -> LinkVerdict:
    """Search for a Link Criterion witness for ``F`` (smallest index wins).

    Face case: ``z in F`` with every other point of ``F`` at distance ``< diam F``.
    Coface case: ``z`` outside ``F`` whose closed ball contains the
    intersection of the closed ``diam F`` balls around ``F``.
    """
    f = _check_subset(space, subset)
    if len(f) == 1:
        return LinkVerdict(f, 0, Status.SATISFIED_FACE, f[0])
    idx = space.index
    rows = idx[list(f)]
    k = int(rows[:, list(f)].max())
    for z in f:
        others = [v for v in f if v != z]
        if (idx[z, others] < k).all():
            return LinkVerdict(f, k, Status.SATISFIED_FACE, z)
    inter = np.flatnonzero((rows <= k).all(axis=0))
    ok = (idx[:, inter] <= k).all(axis=1)
    ok[list(f)] = False
    hits = np.flatnonzero(ok)
    if len(hits):
        return LinkVerdict(f, k, Status.SATISFIED_COFACE, int(hits[0]))
    return LinkVerdict(f, k, Status.FAILED)


def lens(space: FiniteMetricSpace, x: int, y: int, level: int) -> np.ndarray:
    """Indices of ``Bbar_t(x) & Bbar_t(y)`` where ``t = levels[level]``."""
    idx = space.index
    return np.flatnonzero((idx[x] <= level) & (idx[y] <= level))


@dataclass(frozen=True)
class PairFailure:
    """A pair at distance ``t`` whose lens fits in no admissible ball.

    ``blockers[z]`` is a lens point outside the target ball of ``z``.
    ``obstruction`` is a pair of lens points too far apart to share any target
    ball (distance at least twice its radius), when one exists.
    """

    pair: tuple
    lens: tuple
    blockers: dict
    obstruction: tuple | None = None


@dataclass
class ScaleVerdict:
    level: int
    value: object
    status: Status
    pinch: object = 0
    witnesses: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    refuting_subset: tuple | None = None
    checked_pairs: int = 0
    anchored: bool = False

    @property
    def certified(self) -> bool:
        return self.status == Status.CERTIFIED

    @property
    def pair(self):
        return self.failures[0].pair if self.failures else None

    def failure_for(self, pair):
        pair = tuple(sorted(pair))
        for f in self.failures:
            if f.pair == pair:
                return f
        return None

    def to_json(self, kind=EXACT) -> dict:
        out = {"scale": format_value(self.value), "status": self.status.value,
               "checked_pairs": self.checked_pairs}
        if kind == SQUARED:
            out["sq"] = True
        if self.pinch:
            out["r"] = format_value(self.pinch)
        out["witnesses"] = [{"pair": list(p), "z": _jsonable(z)} for p, z in sorted(self.witnesses.items())]
        if self.failures:
            out["failures"] = [
                {"pair": list(f.pair), "obstruction": list(f.obstruction) if f.obstruction else None}
                for f in self.failures
            ]
        if self.refuting_subset is not None:
            out["refuting_subset"] = list(self.refuting_subset)
        if self.anchored:
            out["anchored"] = True
        return out


def _jsonable(z):
    if isinstance(z, (tuple, list, np.ndarray)):
        return [float(c) for c in z]
    return z


def _scale_level(space, t):
    """Level realising ``t`` exactly, or ``None`` if no pair is at distance ``t``."""
    try:
        k = space.level_of(t)
    except KeyError:
        return None
    return k if k > 0 else None


def _pairs(space, level, anchors):
    xs, ys = np.nonzero(np.triu(space.index == level, 1))
    pairs = list(zip(xs.tolist(), ys.tolist()))
    if anchors is not None:
        a = set(anchors)
        pairs = [p for p in pairs if p[0] in a or p[1] in a]
    return pairs


def _far_pair(space, pts, level, radius_level, r):
    """Two lens points at distance >= 2 * (t - r), if any (real units)."""
    t = space.levels[level]
    idx = space.index
    pts = list(pts)
    sub = idx[np.ix_(pts, pts)]
    for lv in range(sub.max(), radius_level, -1):
        e = space.levels[lv]
        if r == 0 and space.kind == EXACT:
            far = e >= 2 * t
        elif r == 0 and space.kind == SQUARED:
            far = e >= 4 * t
        elif space.kind == APPROX:
            far = e >= 2 * (t - r) - space.eps
        else:
            far = space.real(e) >= 2 * (space.real(t) - float(r))
        if not far:
            break
        i, j = np.argwhere(sub == lv)[0]
        if i != j:
            return tuple(sorted((int(pts[i]), int(pts[j]))))
    return None


def pinched_strong_link_criterion(space: FiniteMetricSpace, t, r=0, anchors=None) -> ScaleVerdict:
    """Every pair at distance ``t`` needs ``z`` with its lens inside ``B_{t-r}(z)``.

    ``t`` is in stored units; ``r`` in real units (rational ``r`` compares
    exactly).  Scales that no pair realises pass vacuously.
    """
    if r < 0:
        raise ValueError("pinch r must be non-negative")
    level = _scale_level(space, t)
    if level is None:
        return ScaleVerdict(-1, t, Status.CERTIFIED, r, anchored=anchors is not None)
    thr = space.open_radius_level(level, r)
    idx = space.index
    verdict = ScaleVerdict(level, space.levels[level], Status.CERTIFIED, r, anchored=anchors is not None)
    for x, y in _pairs(space, level, anchors):
        verdict.checked_pairs += 1
        pts = lens(space, x, y, level)
        inside = idx[:, pts] <= thr
        ok = np.flatnonzero(inside.all(axis=1))
        if len(ok):
            verdict.witnesses[(x, y)] = int(ok[0])
            continue
        first_out = np.argmin(inside, axis=1)
        blockers = {z: int(pts[first_out[z]]) for z in range(space.n)}
        verdict.failures.append(PairFailure((x, y), tuple(int(p) for p in pts), blockers,
                                            _far_pair(space, pts, level, thr, r)))
        verdict.status = Status.REFUTED
    return verdict


def strong_link_criterion_at_scale(space: FiniteMetricSpace, t, anchors=None) -> ScaleVerdict:
    """Every pair at distance ``t`` needs ``z`` with its closed lens inside ``B_t(z)``."""
    return pinched_strong_link_criterion(space, t, 0, anchors)


def subsets_of_diameter(space: FiniteMetricSpace, level: int, size: int, anchors=None):
    """Vertex sets of the given size and diameter ``levels[level]``, in lexicographic order."""
    idx = space.index
    n = space.n
    adj = idx <= level
    higher = []
    for i in range(n):
        b = 0
        for j in np.flatnonzero(adj[i, i + 1:]):
            b |= 1 << (i + 1 + int(j))
        higher.append(b)
    anchor_set = None if anchors is None else set(anchors)

    def grow(clique, top, cand):
        if len(clique) == size:
            if top == level and (anchor_set is None or anchor_set.intersection(clique)):
                yield tuple(clique)
            return
        while cand:
            low = cand & -cand
            cand ^= low
            v = low.bit_length() - 1
            lv = max(top, int(idx[v, clique].max()))
            clique.append(v)
            yield from grow(clique, lv, cand & higher[v])
            clique.pop()

    for v in range(n):
        yield from grow([v], 0, higher[v])


def criterion_range_scan(space: FiniteMetricSpace, scales, max_subset_size=4, anchors=None) -> list:
    """Three-valued verdict per scale.

    CERTIFIED when the Strong Link Criterion holds (it implies the Link
    Criterion for every subset of that diameter); REFUTED when some subset of
    at most ``max_subset_size`` points fails the Link Criterion (largest
    subsets are tried first); UNKNOWN otherwise.
    """
    if max_subset_size < 2:
        raise ValueError("max_subset_size must be at least 2")
    out = []
    for t in scales:
        level = _scale_level(space, t)
        if level is None:
            raise ValueError(f"scale {format_value(t)} is not in the diameter spectrum")
        verdict = strong_link_criterion_at_scale(space, t, anchors)
        if not verdict.certified:
            verdict.status = Status.UNKNOWN
            for size in range(max_subset_size, 1, -1):
                found = None
                for f in subsets_of_diameter(space, level, size, anchors):
                    if link_criterion(space, f).status == Status.FAILED:
                        found = f
                        break
                if found is not None:
                    verdict.status = Status.REFUTED
                    verdict.refuting_subset = found
                    break
        out.append(verdict)
    return out


def scan_to_json(space, verdicts) -> list:
    return [v.to_json(space.kind) for v in verdicts]


def all_subsets_satisfy(space: FiniteMetricSpace, level: int) -> bool:
    """Exhaustively check the Link Criterion for every subset of diameter ``levels[level]``."""
    n = space.n
    for size in range(2, n + 1):
        for f in combinations(range(n), size):
            sub = space.index[np.ix_(f, f)]
            if sub.max() == level and not link_criterion(space, f).satisfied:
                return False
    return True
