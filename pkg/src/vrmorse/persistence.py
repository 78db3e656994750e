"""Homotopy-persistence intervals from per-scale criterion verdicts.

If every scale in ``(t, s]`` passes the Link Criterion, the inclusion
``VR_t -> VR_s`` is a homotopy equivalence.  On a finite space the complex only
changes at spectrum values, so an interval is a maximal run of consecutive
CERTIFIED spectrum values, anchored (open) at the preceding spectrum value.
The Betti cross-check recomputes homology of the sublevel complexes and
insists that it is constant across each interval including its anchor.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .complex import enumerate_simplices
from .criteria import Status, criterion_range_scan
from .homology import BettiVector, betti_numbers
from .metric import DiameterSpectrum, FiniteMetricSpace, diameter_spectrum, format_value

DEFAULT_BETTI_DIM = 3


@dataclass(frozen=True)
class Interval:
    """Spectrum levels ``anchor < first <= ... <= last``, certified from ``first`` to ``last``."""

    anchor: int
    first: int
    last: int
    contractible_beyond: bool = False

    def levels(self) -> range:
        return range(self.first, self.last + 1)

    def to_json(self, space) -> dict:
        return {
            "left": format_value(space.levels[self.anchor]) + "(open)",
            "right": format_value(space.levels[self.last]),
            "status": "certified",
            "contractible_beyond": self.contractible_beyond,
        }


def intervals_from_verdicts(verdicts, top_level: int) -> list:
    """Merge consecutive CERTIFIED levels; anything else breaks a run."""
    out = []
    run = []
    for v in verdicts:
        if v.status == Status.CERTIFIED:
            run.append(v.level)
            continue
        if run:
            out.append(Interval(run[0] - 1, run[0], run[-1]))
        run = []
    if run:
        out.append(Interval(run[0] - 1, run[0], run[-1], run[-1] == top_level))
    return out


def betti_profile(space: FiniteMetricSpace, scales, max_dim=DEFAULT_BETTI_DIM, budget=None) -> list:
    """Reduced Betti numbers of ``VR_t`` up to ``max_dim`` for each ``t``.

    Simplices are enumerated one dimension higher so every reported degree is exact.
    """
    out = []
    for t in scales:
        cx = enumerate_simplices(space, t, max_dim + 1, budget)
        out.append(betti_numbers(cx.to_explicit(), max_dim, budget))
    return out


@dataclass
class PersistenceReport:
    space: FiniteMetricSpace
    spectrum: DiameterSpectrum
    per_scale: list
    intervals: list
    betti_dim: int | None = None
    betti: dict = field(default_factory=dict)  # level -> BettiVector

    def needed_levels(self) -> list:
        return sorted({lv for iv in self.intervals for lv in (iv.anchor, *iv.levels())})

    def fill_betti(self, budget=None):
        """Compute the Betti vectors that the intervals need and are still missing."""
        if self.betti_dim is None:
            self.betti_dim = DEFAULT_BETTI_DIM
        missing = [lv for lv in self.needed_levels() if lv not in self.betti]
        scales = [self.space.levels[lv] for lv in missing]
        for lv, b in zip(missing, betti_profile(self.space, scales, self.betti_dim, budget)):
            self.betti[lv] = b
        return self

    def with_status(self, level: int, status: Status) -> PersistenceReport:
        """Copy with one verdict overridden; used to probe the cross-check."""
        verdicts = [replace(v, status=status) if v.level == level else v for v in self.per_scale]
        top = len(self.space.levels) - 1
        return replace(self, per_scale=verdicts, intervals=intervals_from_verdicts(verdicts, top),
                       betti=dict(self.betti))

    def to_json(self) -> dict:
        sp = self.space
        out = {
            "spectrum": [format_value(v) for v in self.spectrum],
            "min_gap": None if len(self.spectrum) < 2 else format_value(self.spectrum.min_gap),
            "per_scale": [v.to_json(sp.kind) for v in self.per_scale],
            "intervals": [iv.to_json(sp) for iv in self.intervals],
        }
        if sp.kind == "squared":
            out["sq"] = True
        if self.betti_dim is not None:
            out["betti_dim"] = self.betti_dim
            out["betti"] = {format_value(sp.levels[lv]): list(b.reduced)
                            for lv, b in sorted(self.betti.items())}
        return out


def persistence_intervals(space: FiniteMetricSpace, max_subset_size=4, betti_dim=None,
                          anchors=None, budget=None) -> PersistenceReport:
    """Scan the whole spectrum and merge certified runs into intervals.

    With ``betti_dim`` set, Betti vectors are computed for every level the
    intervals touch (anchors included).
    """
    spectrum = diameter_spectrum(space)
    verdicts = criterion_range_scan(space, list(spectrum), max_subset_size, anchors)
    top = len(space.levels) - 1
    report = PersistenceReport(space, spectrum, verdicts, intervals_from_verdicts(verdicts, top), betti_dim)
    if betti_dim is not None:
        report.fill_betti(budget)
    return report


@dataclass(frozen=True)
class BettiJump:
    interval: Interval
    level: int
    expected: tuple
    found: tuple


@dataclass
class CrossCheck:
    passed: bool
    jumps: list
    checked_intervals: int

    def message(self) -> str:
        if self.passed:
            return f"ok: {self.checked_intervals} interval(s) with constant Betti numbers"
        return (f"implementation bug: {len(self.jumps)} Betti jump(s) inside certified intervals; "
                "a certified interval must be a homotopy equivalence")


def cross_validate(report: PersistenceReport, budget=None) -> CrossCheck:
    """Betti vectors must agree across each interval and with its left anchor."""
    if report.betti_dim is None:
        raise ValueError("report has no Betti profile; build it with betti_dim set")
    report.fill_betti(budget)
    jumps = []
    for iv in report.intervals:
        base = report.betti[iv.anchor]
        for lv in iv.levels():
            b = report.betti[lv]
            if _profile(b) != _profile(base):
                jumps.append(BettiJump(iv, lv, base.reduced, b.reduced))
    return CrossCheck(not jumps, jumps, len(report.intervals))


def _profile(b: BettiVector):
    return (b.empty, b.reduced)
