"""Euclidean helpers: lens sampling, midpoint pinch checks, lattice interiors.

In R^n the lens ``Bbar_t(x) & Bbar_t(y)`` of a pair at distance ``t`` lies in
the closed ball of radius ``(sqrt(3)/2) t`` around the midpoint.  On a lattice
whose points are all within ``rho`` of some lattice point, the nearest lattice
point to the midpoint is a strong-criterion witness once
``(sqrt(3)/2) t + rho < t``.
"""

from __future__ import annotations

import math

import numpy as np

from .criteria import PairFailure, ScaleVerdict, Status, _pairs, _scale_level, lens

MIDPOINT_FACTOR = math.sqrt(3) / 2


def lattice_covering_radius(n: int) -> float:
    """Largest distance from a point of R^n to the nearest point of Z^n."""
    return math.sqrt(n) / 2


def lattice_threshold(n: int) -> float:
    """Scale above which the midpoint argument certifies Z^n: ``sqrt(n) / (2 - sqrt(3))``."""
    return math.sqrt(n) / (2 - math.sqrt(3))


def sample_lens(x, y, count: int, rng: np.random.Generator, t=None) -> np.ndarray:
    """``count`` points drawn uniformly from the lens of ``x`` and ``y`` by rejection.

    Candidates are uniform in the ball ``Bbar_t(x)``; ``t`` defaults to ``|x - y|``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = float(np.linalg.norm(x - y)) if t is None else float(t)
    dim = x.shape[0]
    out = []
    have = 0
    while have < count:
        batch = max(64, 4 * (count - have))
        g = rng.standard_normal((batch, dim))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        radii = t * rng.random(batch) ** (1.0 / dim)
        pts = x + g * radii[:, None]
        keep = pts[np.linalg.norm(pts - y, axis=1) <= t]
        out.append(keep)
        have += len(keep)
    return np.vstack(out)[:count]


def random_pair(rng: np.random.Generator, dim: int, t: float, spread=10.0):
    """A random pair of points in R^dim at distance exactly ``t``."""
    x = rng.uniform(-spread, spread, dim)
    u = rng.standard_normal(dim)
    return x, x + t * u / np.linalg.norm(u)


def lattice_interior(space, t) -> list:
    """Points of a lattice box whose closed ``t``-ball (``t`` squared) stays inside the box.

    A lattice point differs from a point within ``sqrt(t)`` by at most
    ``floor(sqrt(t))`` per coordinate, so it suffices that every coordinate is
    at least that far from the box faces.
    """
    prov = space.provenance
    if prov.get("generator") != "lattice_box":
        raise ValueError("lattice_interior needs a lattice_box space")
    side = prov["side"]
    f = math.isqrt(math.floor(t))
    return [i for i, p in enumerate(space.labels) if all(f <= c <= side - 1 - f for c in p)]


def midpoint_pinch_check(space, t, r: float, anchors=None) -> ScaleVerdict:
    """Every lens must fit strictly inside the ball of radius ``t - r`` around the midpoint.

    Needs coordinates.  Floats are compared with a small guard so that
    borderline points count as outside.
    """
    if space.coords is None:
        raise ValueError("midpoint checks need point coordinates")
    if r < 0:
        raise ValueError("pinch r must be non-negative")
    level = _scale_level(space, t)
    if level is None:
        return ScaleVerdict(-1, t, Status.CERTIFIED, r, anchored=anchors is not None)
    tr = space.real(space.levels[level])
    bound = tr - float(r) - 1e-12
    pts = space.coords
    verdict = ScaleVerdict(level, space.levels[level], Status.CERTIFIED, r, anchored=anchors is not None)
    for x, y in _pairs(space, level, anchors):
        verdict.checked_pairs += 1
        mid = (pts[x] + pts[y]) / 2
        members = lens(space, x, y, level)
        far = np.linalg.norm(pts[members] - mid, axis=1)
        if (far < bound).all():
            verdict.witnesses[(x, y)] = tuple(float(c) for c in mid)
        else:
            w = int(members[np.argmax(far)])
            verdict.failures.append(PairFailure((x, y), tuple(int(p) for p in members), {"midpoint": w}))
            verdict.status = Status.REFUTED
    return verdict
