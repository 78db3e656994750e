"""Finite metric spaces with exact or tolerance-aware distances.

Three storage kinds are supported:

``exact``
    distances are ``int`` or :class:`fractions.Fraction`; comparisons are exact.
``squared``
    distances are stored as exact squared integers (euclidean lattices); since
    the square root is monotone, all order comparisons are done on the squares.
``approx``
    floats, where two values are equal iff they differ by at most ``eps``.

Every space grades its distinct distance values into *levels* (level 0 is the
value 0).  Combinatorial code works on the integer level matrix
:attr:`FiniteMetricSpace.index`, which makes ties exact for all three kinds.
"""

from __future__ import annotations

import hashlib
import json
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Rational

import numpy as np

EXACT = "exact"
SQUARED = "squared"
APPROX = "approx"
KINDS = (EXACT, SQUARED, APPROX)
DEFAULT_EPS = 1e-9
# Guard used when an exact kind must be compared against an irrational shift.
FLOAT_GUARD = 1e-12


def _normalize(value):
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value.numerator)
    return value


def format_value(value) -> str:
    """Render a distance value the way reports serialize it (``"p/q"`` for rationals)."""
    if isinstance(value, bool):
        raise TypeError("boolean is not a distance")
    if isinstance(value, Rational):
        value = Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return repr(float(value))


def parse_value(text):
    """Inverse of :func:`format_value`; floats are returned for decimal strings."""
    if isinstance(text, (int, Fraction)):
        return _normalize(Fraction(text))
    if isinstance(text, float):
        return text
    text = str(text).strip()
    try:
        return _normalize(Fraction(text)) if "." not in text and "e" not in text.lower() else float(text)
    except ValueError:
        return float(text)


@dataclass(frozen=True, eq=False)
class Distance:
    """A single distance value together with its comparison contract."""

    value: object
    kind: str = EXACT
    eps: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown distance kind {self.kind!r}")
        if self.value < (-self.eps if self.kind == APPROX else 0):
            raise ValueError("distance must be non-negative")

    def _other(self, other):
        if isinstance(other, Distance):
            if other.kind != self.kind:
                raise TypeError("cannot compare distances of different kinds")
            return other.value
        return other

    def __eq__(self, other):
        b = self._other(other)
        if self.kind == APPROX:
            return abs(self.value - b) <= self.eps
        return self.value == b

    def __lt__(self, other):
        b = self._other(other)
        if self.kind == APPROX:
            return self.value < b - self.eps
        return self.value < b

    def __le__(self, other):
        b = self._other(other)
        if self.kind == APPROX:
            return self.value <= b + self.eps
        return self.value <= b

    def __gt__(self, other):
        return not self.__le__(other)

    def __ge__(self, other):
        return not self.__lt__(other)

    __hash__ = None

    def real(self) -> float:
        """The distance as a float in real (not squared) units."""
        return math.sqrt(self.value) if self.kind == SQUARED else float(self.value)

    def to_json(self) -> dict:
        out = {"diam": format_value(self.value)}
        if self.kind == SQUARED:
            out["sq"] = True
        return out

    def __repr__(self):
        suffix = " (squared)" if self.kind == SQUARED else ""
        return f"Distance({format_value(self.value)}{suffix})"


class FiniteMetricSpace:
    """Labelled points with a dense symmetric distance table.

    The table is stored as given; use :func:`validate_metric` to check the
    axioms.  Instances are immutable after construction.

    Scales passed to the rest of the package are in *stored units*: for the
    ``squared`` kind a scale ``t`` means the squared distance; use :meth:`key`
    to convert a real scale.
    """

    def __init__(self, labels, table, kind=EXACT, eps=None, provenance=None, coords=None):
        if kind not in KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        labels = tuple(labels)
        if not labels:
            raise ValueError("a metric space needs at least one point")
        self.labels = labels
        if kind == APPROX:
            self.table = tuple(tuple(float(v) for v in row) for row in table)
        else:
            self.table = tuple(tuple(_normalize(Fraction(v)) for v in row) for row in table)
        self.kind = kind
        self.eps = (DEFAULT_EPS if eps is None else float(eps)) if kind == APPROX else 0.0
        self.provenance = dict(provenance or {})
        if coords is not None:
            coords = np.array(coords, dtype=float)
            coords.setflags(write=False)
        self.coords = coords

    def __len__(self):
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    def __repr__(self):
        src = self.provenance.get("generator", self.provenance.get("source", "table"))
        return f"FiniteMetricSpace(n={self.n}, kind={self.kind}, source={src})"

    def d(self, i: int, j: int):
        """Raw stored distance between points ``i`` and ``j``."""
        return self.table[i][j]

    def distance(self, i: int, j: int) -> Distance:
        return Distance(self.table[i][j], self.kind, self.eps)

    def wrap(self, value) -> Distance:
        return Distance(value, self.kind, self.eps)

    def key(self, t):
        """Convert a real scale into stored units."""
        if self.kind == SQUARED:
            if isinstance(t, Rational):
                return _normalize(Fraction(t) ** 2)
            return float(t) ** 2
        return t

    def real(self, value) -> float:
        return math.sqrt(value) if self.kind == SQUARED else float(value)

    # -- grading ---------------------------------------------------------

    @cached_property
    def _graded(self):
        n = self.n
        if any(len(row) != n for row in self.table) or len(self.table) != n:
            raise ValueError("distance table must be square and match the labels")
        if self.kind == APPROX:
            arr = np.array(self.table, dtype=float)
            uniq, inverse = np.unique(arr, return_inverse=True)
            cluster = np.empty(len(uniq), dtype=np.int64)
            reps = []
            for k, v in enumerate(uniq):
                if not reps or v - reps[-1] > self.eps:
                    reps.append(float(v))
                cluster[k] = len(reps) - 1
            # level 0 must be the value 0 itself
            if abs(reps[0]) <= self.eps:
                reps[0] = 0.0
            else:
                reps.insert(0, 0.0)
                cluster += 1
            index = cluster[inverse].reshape(n, n)
            levels = tuple(reps)
        else:
            denom = 1
            for row in self.table:
                for v in row:
                    if isinstance(v, Fraction):
                        denom = math.lcm(denom, v.denominator)
            scaled = [[int(v * denom) for v in row] for row in self.table]
            big = max(abs(v) for row in scaled for v in row)
            arr = np.array(scaled, dtype=np.int64 if big < 2**62 else object)
            uniq, inverse = np.unique(arr, return_inverse=True)
            vals = [_normalize(Fraction(int(u), denom)) for u in uniq]
            index = inverse.reshape(n, n).astype(np.int64)
            if vals[0] != 0:
                vals.insert(0, 0)
                index = index + 1
            levels = tuple(vals)
        index.setflags(write=False)
        return levels, index

    @property
    def levels(self) -> tuple:
        """Distinct distance values in increasing order; ``levels[0] == 0``."""
        return self._graded[0]

    @property
    def index(self) -> np.ndarray:
        """``index[i, j]`` is the level of ``d(i, j)``."""
        return self._graded[1]

    def level_value(self, level: int):
        return self.levels[level]

    def level_le(self, value) -> int:
        """Largest level whose value is ``<= value`` (``-1`` if none)."""
        if self.kind == APPROX:
            return bisect_right(self.levels, value + self.eps) - 1
        return bisect_right(self.levels, value) - 1

    def level_lt(self, value) -> int:
        """Largest level whose value is ``< value`` (``-1`` if none)."""
        if self.kind == APPROX:
            return bisect_left(self.levels, value - self.eps) - 1
        return bisect_left(self.levels, value) - 1

    def level_of(self, value) -> int:
        """Level equal to ``value``; raises ``KeyError`` if it is not a level."""
        k = self.level_le(value)
        if k >= 0 and self.wrap(self.levels[k]) == value:
            return k
        raise KeyError(f"{value!r} is not a distance of this space")

    def open_radius_level(self, level: int, shift=0) -> int:
        """Largest level ``j`` with ``levels[j] < levels[level] - shift`` in real units.

        ``shift`` may be rational (exact comparison) or a float (compared with a
        small conservative guard, so borderline points count as outside).
        """
        if shift == 0:
            return level - 1
        if shift < 0:
            raise ValueError("shift must be non-negative")
        t = self.levels[level]
        exact_shift = isinstance(shift, Rational)
        best = -1
        for j, e in enumerate(self.levels[: level + 1]):
            if self.kind == APPROX:
                ok = e < t - shift - self.eps
            elif self.kind == EXACT:
                ok = e < t - shift if exact_shift else float(e) < float(t) - float(shift) - FLOAT_GUARD
            elif exact_shift:
                r = Fraction(shift)
                rhs = t - e - r * r
                ok = t > r * r and rhs > 0 and 4 * r * r * e < rhs * rhs
            else:
                ok = math.sqrt(e) < math.sqrt(t) - float(shift) - FLOAT_GUARD
            if ok:
                best = j
            else:
                break
        return best

    # -- derived spaces --------------------------------------------------

    def subspace(self, indices) -> FiniteMetricSpace:
        idx = list(indices)
        table = [[self.table[i][j] for j in idx] for i in idx]
        coords = None if self.coords is None else self.coords[idx]
        prov = {"source": "subspace", "parent": self.provenance, "indices": idx}
        return FiniteMetricSpace([self.labels[i] for i in idx], table, self.kind, self.eps, prov, coords)

    def scaled(self, c) -> FiniteMetricSpace:
        """All distances multiplied by ``c > 0`` (squares by ``c**2`` for squared kind)."""
        if c <= 0:
            raise ValueError("scale factor must be positive")
        f = c * c if self.kind == SQUARED else c
        table = [[v * f for v in row] for row in self.table]
        prov = {"source": "scaled", "factor": format_value(c) if isinstance(c, Rational) else c,
                "parent": self.provenance}
        return FiniteMetricSpace(self.labels, table, self.kind, self.eps * abs(float(c)) or None, prov)

    def content_hash(self) -> str:
        payload = {
            "labels": [str(x) for x in self.labels],
            "kind": self.kind,
            "eps": self.eps,
            "table": [[format_value(v) for v in row] for row in self.table],
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()


# -- validation --------------------------------------------------------


@dataclass
class MetricProblem:
    kind: str  # shape | negative | diagonal | identity | asymmetry | triangle
    where: tuple
    detail: str = ""


@dataclass
class MetricReport:
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def kinds(self) -> set:
        return {p.kind for p in self.problems}


def _integer_table(space):
    denom = 1
    for row in space.table:
        for v in row:
            if isinstance(v, Fraction):
                denom = math.lcm(denom, v.denominator)
    return np.array([[int(v * denom) for v in row] for row in space.table], dtype=object)


def validate_metric(space: FiniteMetricSpace) -> MetricReport:
    """Check the metric axioms, reporting every violation with its witnesses.

    Triangle violations are reported as ``(i, k, j)`` meaning
    ``d(i, k) > d(i, j) + d(j, k)``, with ``i < k``.
    """
    report = MetricReport()
    n = space.n
    table = space.table
    if len(table) != n or any(len(row) != n for row in table):
        report.problems.append(MetricProblem("shape", (len(table), n), "table is not n x n"))
        return report
    tol = space.eps if space.kind == APPROX else 0
    lab = space.labels
    for i in range(n):
        if abs(table[i][i]) > tol:
            report.problems.append(MetricProblem("diagonal", (lab[i],), f"d(i,i)={table[i][i]}"))
        for j in range(n):
            if table[i][j] < -tol:
                report.problems.append(MetricProblem("negative", (lab[i], lab[j])))
            if i < j:
                if abs(table[i][j] - table[j][i]) > tol:
                    report.problems.append(MetricProblem("asymmetry", (lab[i], lab[j])))
                elif table[i][j] <= tol:
                    report.problems.append(MetricProblem("identity", (lab[i], lab[j]),
                                                         "distinct points at distance 0"))
    if space.kind == APPROX:
        a = np.array(table, dtype=float)
    elif space.kind == SQUARED:
        a = np.array(table, dtype=object)
    else:
        a = _integer_table(space)
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    for j in range(n):
        b = a[:, j][:, None]
        c = a[j, :][None, :]
        if space.kind == APPROX:
            bad = a > b + c + tol
        elif space.kind == SQUARED:
            excess = a - b - c
            bad = (excess > 0) & (excess * excess > 4 * b * c)
        else:
            bad = a > b + c
        bad = np.asarray(bad, dtype=bool) & upper
        bad[j, :] = False
        bad[:, j] = False
        for i, k in zip(*np.nonzero(bad)):
            report.problems.append(MetricProblem("triangle", (lab[i], lab[k], lab[j])))
    return report


# -- generators --------------------------------------------------------


def circle(m: int) -> FiniteMetricSpace:
    """``m`` equally spaced points on a circle of circumference 1 (arclength metric)."""
    if m < 3:
        raise ValueError("circle needs at least 3 points")
    table = [[Fraction(min(abs(i - j), m - abs(i - j)), m) for j in range(m)] for i in range(m)]
    angles = 2 * np.pi * np.arange(m) / m
    coords = np.column_stack([np.cos(angles), np.sin(angles)])
    return FiniteMetricSpace([f"p{i}" for i in range(m)], table, EXACT,
                             provenance={"generator": "circle", "m": m}, coords=coords)


def lattice_box(n: int, side: int) -> FiniteMetricSpace:
    """The grid ``{0..side-1}^n`` with squared euclidean distances stored exactly."""
    if n < 1 or side < 1:
        raise ValueError("lattice_box needs n >= 1 and side >= 1")
    pts = np.array(np.meshgrid(*[np.arange(side)] * n, indexing="ij")).reshape(n, -1).T
    diff = pts[:, None, :] - pts[None, :, :]
    sq = (diff * diff).sum(axis=2)
    labels = [tuple(int(c) for c in p) for p in pts]
    return FiniteMetricSpace(labels, sq.tolist(), SQUARED,
                             provenance={"generator": "lattice_box", "n": n, "side": side}, coords=pts)


def sphere(points, n=None, eps=DEFAULT_EPS, labels=None) -> FiniteMetricSpace:
    """A finite sample of the unit sphere, ``d = angle / (2 pi)`` (antipodes at 1/2).

    Conclusions drawn from such a space concern the sample, not the sphere.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise ValueError("empty point list")
    if n is not None and pts.shape[1] != n + 1:
        raise ValueError(f"points of S^{n} need {n + 1} coordinates, got {pts.shape[1]}")
    norms = np.linalg.norm(pts, axis=1)
    if np.any(np.abs(norms - 1) > 1e-9):
        raise ValueError("sphere points must be unit vectors")
    gram = np.clip(pts @ pts.T, -1.0, 1.0)
    table = np.arccos(gram) / (2 * np.pi)
    np.fill_diagonal(table, 0.0)
    table = (table + table.T) / 2
    labels = labels or [f"s{i}" for i in range(len(pts))]
    return FiniteMetricSpace(labels, table.tolist(), APPROX, eps,
                             provenance={"generator": "sphere", "n": pts.shape[1] - 1}, coords=pts)


def sphere_poles_equator(k: int = 2, eps=DEFAULT_EPS) -> FiniteMetricSpace:
    """North and south pole of S^2 plus ``k`` equator points a quarter turn apart."""
    if not 1 <= k <= 4:
        raise ValueError("between 1 and 4 equator points")
    ang = np.pi / 2 * np.arange(k)
    eq = np.column_stack([np.cos(ang), np.sin(ang), np.zeros(k)])
    pts = np.vstack([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], eq])
    labels = ["N", "S"] + [f"e{i}" for i in range(k)]
    return sphere(pts, n=2, eps=eps, labels=labels)


def point_cloud(coords, labels=None, exact=None, eps=DEFAULT_EPS) -> FiniteMetricSpace:
    """Euclidean point cloud.

    Integer coordinates are stored as exact squared distances when ``exact`` is
    true (or left ``None``); otherwise floats with tolerance ``eps``.
    """
    pts = np.atleast_2d(np.asarray(coords, dtype=float))
    if pts.size == 0:
        raise ValueError("empty point list")
    labels = list(labels) if labels is not None else [f"x{i}" for i in range(len(pts))]
    if len(labels) != len(pts):
        raise ValueError("dimension mismatch between labels and points")
    integral = bool(np.all(pts == np.round(pts)))
    if exact is None:
        exact = integral
    if exact and not integral:
        raise ValueError("exact storage needs integer coordinates")
    diff = pts[:, None, :] - pts[None, :, :]
    if exact:
        ip = np.round(pts).astype(np.int64)
        d = ip[:, None, :] - ip[None, :, :]
        table = (d * d).sum(axis=2).tolist()
        return FiniteMetricSpace(labels, table, SQUARED,
                                 provenance={"generator": "explicit", "dim": pts.shape[1]}, coords=pts)
    table = np.sqrt((diff * diff).sum(axis=2))
    return FiniteMetricSpace(labels, table.tolist(), APPROX, eps,
                             provenance={"generator": "explicit", "dim": pts.shape[1]}, coords=pts)


def from_distance_matrix(labels, rows, kind=None, eps=None) -> FiniteMetricSpace:
    """Build a space from an explicit table; strings like ``"1/3"`` parse exactly."""
    parsed = [[parse_value(v) for v in row] for row in rows]
    if kind is None:
        kind = APPROX if any(isinstance(v, float) for row in parsed for v in row) else EXACT
    return FiniteMetricSpace(labels, parsed, kind, eps, provenance={"source": "distance_matrix"})


def generate_space(spec: dict) -> FiniteMetricSpace:
    """Dispatch on a generator spec such as ``{"generator": "circle", "m": 12}``."""
    spec = dict(spec)
    name = spec.pop("generator", None)
    if name == "circle":
        return circle(int(spec["m"]))
    if name in ("lattice_box", "lattice"):
        return lattice_box(int(spec["n"]), int(spec["side"]))
    if name == "sphere":
        if "points" in spec:
            return sphere(spec["points"], spec.get("n"), spec.get("eps", DEFAULT_EPS))
        return sphere_poles_equator(int(spec.get("equator", 2)))
    if name == "explicit":
        return point_cloud(spec["points"], spec.get("labels"), spec.get("exact"))
    raise ValueError(f"unknown generator {name!r}")


# -- spectrum ----------------------------------------------------------


@dataclass(frozen=True)
class DiameterSpectrum:
    """Sorted distinct nonzero pairwise distances (stored units)."""

    values: tuple
    min_gap: object  # real units; math.inf when fewer than two values
    kind: str = EXACT

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def diameter_spectrum(space: FiniteMetricSpace) -> DiameterSpectrum:
    """Every achievable simplex diameter: a finite set's diameter is realised by a pair."""
    values = space.levels[1:]
    if len(values) < 2:
        gap = math.inf
    elif space.kind == EXACT:
        gap = min(b - a for a, b in zip(values, values[1:]))
    else:
        reals = [space.real(v) for v in values]
        gap = min(b - a for a, b in zip(reals, reals[1:]))
    return DiameterSpectrum(tuple(values), gap, space.kind)
