import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_metric_space
from oracles import link_ok, strong_ok
from vrmorse.criteria import (
    Status,
    all_subsets_satisfy,
    criterion_range_scan,
    link_criterion,
    pinched_strong_link_criterion,
    strong_link_criterion_at_scale,
    subsets_of_diameter,
)
from vrmorse.metric import circle, from_distance_matrix, point_cloud, sphere_poles_equator
from vrmorse.morse import LinkKind, classify_descending_link

C12 = circle(12)
TWELFTHS = [Fraction(k, 12) for k in range(1, 7)]


def test_link_criterion_examples():
    v = link_criterion(C12, [0, 2, 10])
    assert (v.status, v.witness) == (Status.SATISFIED_FACE, 0)
    v = link_criterion(C12, [0, 3])
    assert (v.status, v.witness) == (Status.SATISFIED_COFACE, 1)
    assert link_criterion(C12, [0, 4, 8]).status == Status.FAILED


def test_face_case_uses_open_ball():
    # p0 is at distance exactly diam from p4: not strictly inside, so no face witness
    v = link_criterion(C12, [0, 2, 4])
    assert v.status != Status.SATISFIED_FACE or v.witness == 2
    assert link_criterion(C12, [0, 1]).status == Status.FAILED


def test_strong_criterion_examples():
    v = strong_link_criterion_at_scale(C12, Fraction(1, 4))
    assert v.certified
    assert v.witnesses[(0, 3)] in (1, 2)
    v = strong_link_criterion_at_scale(C12, Fraction(1, 3))
    assert v.status == Status.REFUTED
    assert v.pair == (0, 4)
    assert strong_ok(C12, Fraction(1, 3)) is False


def test_smallest_circle_scale_is_refuted():
    # at t = 1/12 the open 1/12-ball around any point is the point itself
    v = strong_link_criterion_at_scale(C12, Fraction(1, 12))
    assert v.status == Status.REFUTED
    assert strong_ok(C12, Fraction(1, 12)) is False
    assert not link_ok(C12, (0, 1))


def test_sphere_equator_obstruction():
    s = sphere_poles_equator(2)
    v = strong_link_criterion_at_scale(s, 0.25)
    assert v.status == Status.REFUTED
    f = v.failure_for((2, 3))
    assert f is not None and f.obstruction == (0, 1)


def test_pinched_zero_equals_strong():
    for t in TWELFTHS:
        a = strong_link_criterion_at_scale(C12, t)
        b = pinched_strong_link_criterion(C12, t, 0)
        assert (a.status, a.witnesses) == (b.status, b.witnesses)


def test_vacuous_scale():
    assert strong_link_criterion_at_scale(C12, Fraction(1, 7)).certified
    assert pinched_strong_link_criterion(C12, Fraction(1, 7), Fraction(1, 100)).certified


def test_negative_pinch_rejected():
    with pytest.raises(ValueError):
        pinched_strong_link_criterion(C12, Fraction(1, 4), -1)


def test_dense_planar_sample_midpoint_is_pinched_witness():
    # grid with step 1/4 around a pair at distance 4; the midpoint is a sample point
    pts = [(i / 4, j / 4) for i in range(-4, 21) for j in range(-10, 11)]
    sp = point_cloud(pts)
    x, y = pts.index((0.0, 0.0)), pts.index((4.0, 0.0))
    r = 0.25  # below (1 - sqrt(3)/2) * 4 - 1/4 ~ 0.286
    assert sp.kind == "approx"
    v = pinched_strong_link_criterion(sp, sp.d(x, y), r, anchors=[x])
    assert v.certified and (x, y) in v.witnesses
    mid = pts.index((2.0, 0.0))
    lens = [w for w in range(sp.n) if sp.d(x, w) <= 4 + 1e-9 and sp.d(y, w) <= 4 + 1e-9]
    assert max(sp.d(mid, w) for w in lens) < 4 - r


def test_range_scan_examples():
    scan = criterion_range_scan(C12, TWELFTHS)
    status = [v.status for v in scan]
    assert status[:4] == [Status.REFUTED, Status.CERTIFIED, Status.CERTIFIED, Status.REFUTED]
    assert scan[3].refuting_subset == (0, 4, 8)
    two = from_distance_matrix("ab", [["0", "1"], ["1", "0"]])
    [v] = criterion_range_scan(two, [1])
    assert v.status == Status.REFUTED and v.refuting_subset == (0, 1)


def test_range_scan_rejects_bad_input():
    with pytest.raises(ValueError):
        criterion_range_scan(C12, TWELFTHS, max_subset_size=1)
    with pytest.raises(ValueError):
        criterion_range_scan(C12, [Fraction(1, 7)])


def test_scan_json_shape():
    v = strong_link_criterion_at_scale(C12, Fraction(1, 4))
    out = v.to_json()
    assert out["scale"] == "1/4" and out["status"] == "CERTIFIED"
    assert {"pair": [0, 3], "z": 1} in out["witnesses"]
    json.dumps(out)


def test_subsets_of_diameter_brute_force():
    from itertools import combinations

    for size in (2, 3, 4):
        got = list(subsets_of_diameter(C12, 3, size))
        want = [f for f in combinations(range(12), size)
                if max(C12.d(a, b) for a, b in combinations(f, 2)) == Fraction(1, 4)]
        assert got == want


def _space(seed, n_max=9):
    rng = random.Random(seed)
    return rng, random_metric_space(rng, rng.randint(2, n_max))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_link_criterion_matches_definition(seed):
    rng, sp = _space(seed)
    for _ in range(10):
        f = rng.sample(range(sp.n), rng.randint(2, sp.n))
        assert link_criterion(sp, f).satisfied == link_ok(sp, f)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_strong_matches_definition_and_implies_link(seed):
    rng, sp = _space(seed)
    for k, t in enumerate(sp.levels[1:], start=1):
        v = strong_link_criterion_at_scale(sp, t)
        assert v.certified == strong_ok(sp, t)
        if v.certified:
            assert all_subsets_satisfy(sp, k)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_link_witness_is_cone_witness(seed):
    rng, sp = _space(seed, 8)
    for _ in range(6):
        f = rng.sample(range(sp.n), rng.randint(2, sp.n))
        v = link_criterion(sp, f)
        c = classify_descending_link(sp, f)
        if v.status == Status.SATISFIED_FACE:
            assert (c.kind, c.witness) == (LinkKind.CONE_FACE, v.witness)
        elif v.status == Status.SATISFIED_COFACE:
            assert (c.kind, c.witness) == (LinkKind.CONE_COFACE, v.witness)
        else:
            assert not c.certified_contractible


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 7))
def test_scale_invariance(seed, c):
    rng, sp = _space(seed)
    big = sp.scaled(Fraction(c, 3))
    for t in sp.levels[1:]:
        a = strong_link_criterion_at_scale(sp, t)
        b = strong_link_criterion_at_scale(big, t * Fraction(c, 3))
        assert (a.status, a.witnesses) == (b.status, b.witnesses)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.fractions(0, 2, max_denominator=6))
def test_pinched_monotone(seed, r):
    rng, sp = _space(seed)
    for t in sp.levels[1:]:
        if pinched_strong_link_criterion(sp, t, r).certified:
            for r2 in (0, r / 2, r / 3):
                assert pinched_strong_link_criterion(sp, t, r2).certified
