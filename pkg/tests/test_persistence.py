import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_metric_space
from oracles import all_simplices, reduced_betti
from vrmorse.criteria import Status
from vrmorse.metric import circle, from_distance_matrix
from vrmorse.persistence import betti_profile, cross_validate, persistence_intervals

C12 = circle(12)


def test_circle_intervals():
    rep = persistence_intervals(C12)
    [iv] = rep.intervals
    # the smallest scale joins isolated points into a cycle, so the run starts at 1/6
    assert (C12.levels[iv.anchor], C12.levels[iv.last]) == (Fraction(1, 12), Fraction(1, 4))
    assert iv.to_json(C12) == {"left": "1/12(open)", "right": "1/4", "status": "certified",
                               "contractible_beyond": False}
    status = {v.value: v.status for v in rep.per_scale}
    assert status[Fraction(1, 3)] == Status.REFUTED


def test_two_point_space_has_no_interval():
    two = from_distance_matrix("ab", [["0", "1"], ["1", "0"]])
    rep = persistence_intervals(two)
    assert rep.intervals == []
    assert rep.per_scale[0].status == Status.REFUTED


def test_contractible_beyond_flag():
    # three collinear points 0, 1, 2: at scale 2 the middle point is a witness
    sp = from_distance_matrix("abc", [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]])
    rep = persistence_intervals(sp)
    assert rep.intervals and rep.intervals[-1].contractible_beyond


def test_betti_profile_examples():
    b = betti_profile(C12, [Fraction(1, 12), Fraction(1, 6), Fraction(1, 4)], 3)
    assert all(x.reduced == (0, 1, 0, 0) for x in b)
    [full] = betti_profile(C12, [Fraction(1, 2)], 3)
    assert full.reduced == (0, 0, 0, 0)
    [pts] = betti_profile(C12, [0], 2)
    assert pts.reduced[0] == 11


def test_cross_validate_circle_passes():
    rep = persistence_intervals(C12, betti_dim=2)
    check = cross_validate(rep)
    assert check.passed and check.checked_intervals == 1


def test_cross_validate_detects_corrupted_verdict():
    rep = persistence_intervals(C12, betti_dim=2)
    bad = rep.with_status(4, Status.CERTIFIED)  # mark 1/3 certified
    check = cross_validate(bad)
    # golden result: VR at 1/3 on twelve points is a wedge of three 2-spheres
    assert not check.passed
    [jump] = check.jumps
    assert C12.levels[jump.level] == Fraction(1, 3)
    assert jump.expected == (0, 1, 0) and jump.found == (0, 0, 3)
    assert "implementation bug" in check.message()


def test_single_scale_interval_passes():
    sp = from_distance_matrix("abc", [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]])
    rep = persistence_intervals(sp, betti_dim=1)
    assert cross_validate(rep).passed


def test_cross_validate_needs_betti():
    with pytest.raises(ValueError):
        cross_validate(persistence_intervals(C12))


def test_report_is_deterministic():
    a = json.dumps(persistence_intervals(C12, betti_dim=2).to_json(), sort_keys=True)
    b = json.dumps(persistence_intervals(circle(12), betti_dim=2).to_json(), sort_keys=True)
    assert a == b
    data = json.loads(a)
    assert data["spectrum"][0] == "1/12"
    assert data["betti"]["1/6"] == [0, 1, 0]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_betti_profile_matches_oracle(seed):
    rng = random.Random(seed)
    sp = random_metric_space(rng, rng.randint(2, 8))
    t = rng.choice(sp.levels)
    [b] = betti_profile(sp, [t], 2)
    assert b.reduced == reduced_betti(all_simplices(sp, t, 4), 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_intervals_only_contain_certified_levels(seed):
    rng = random.Random(seed)
    sp = random_metric_space(rng, rng.randint(2, 8))
    rep = persistence_intervals(sp)
    status = {v.level: v.status for v in rep.per_scale}
    for iv in rep.intervals:
        assert all(status[lv] == Status.CERTIFIED for lv in iv.levels())
        assert iv.anchor == 0 or status[iv.anchor] != Status.CERTIFIED


@pytest.mark.parametrize("m", [12, 20, 30])
def test_circle_interval_runs_from_second_scale_to_below_a_third(m):
    c = circle(m)
    rep = persistence_intervals(c)
    [iv] = rep.intervals
    assert c.levels[iv.anchor] == Fraction(1, m)
    assert c.levels[iv.last] == Fraction((m - 1) // 3, m)
    # the smallest scale fails on the adjacent pair {p0, p1}
    first = rep.per_scale[0]
    assert first.status == Status.REFUTED and first.refuting_subset == (0, 1)
