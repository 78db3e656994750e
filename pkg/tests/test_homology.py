import random
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gf2_rank_dense, reduced_betti
from vrmorse.errors import BudgetExceeded
from vrmorse.homology import (
    ExplicitComplex,
    betti_numbers,
    boundary_matrix,
    cone,
    gf2_rank,
    is_acyclic,
    join,
)

TRIANGLE_BOUNDARY = ExplicitComplex([(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)])
FULL_TRIANGLE = ExplicitComplex.closure([(0, 1, 2)])


def simplex_boundary(k):
    return ExplicitComplex.closure(combinations(range(k + 1), k))


def test_boundary_matrix_triangle():
    m = boundary_matrix(TRIANGLE_BOUNDARY, 1)
    assert m.shape == (3, 3)
    assert (m.sum(axis=0) == 2).all()



def test_boundary_matrix_single_vertex_shape():
    # rows are the vertices, columns the (absent) edges
    m = boundary_matrix(ExplicitComplex([(0,)]), 1)
    assert m.shape == (1, 0)


def test_boundary_matrix_full_triangle():
    m = boundary_matrix(FULL_TRIANGLE, 2)
    assert m.shape == (3, 1)
    assert m.sum() == 3


def test_non_face_closed_rejected():
    with pytest.raises(ValueError):
        ExplicitComplex([(0, 1)])


def test_betti_examples():
    assert betti_numbers(TRIANGLE_BOUNDARY, 1).reduced == (0, 1)
    assert betti_numbers(FULL_TRIANGLE, 1).reduced == (0, 0)
    assert betti_numbers(ExplicitComplex([(0,), (1,)]), 0).reduced == (1,)


def test_empty_complex_is_not_acyclic():
    b = betti_numbers(ExplicitComplex(), 2)
    assert b.empty
    assert not b.acyclic
    assert not is_acyclic(ExplicitComplex(), 1)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_simplex_boundary_is_sphere(k):
    b = betti_numbers(simplex_boundary(k), k)
    assert b.reduced == tuple(1 if i == k - 1 else 0 for i in range(k + 1))
    assert not is_acyclic(simplex_boundary(k), k)


def test_join_of_two_zero_spheres_is_circle():
    s0 = ExplicitComplex([(0,), (1,)])
    assert betti_numbers(join(s0, s0), 2).reduced == (0, 1, 0)


def test_budget():
    with pytest.raises(BudgetExceeded):
        betti_numbers(FULL_TRIANGLE, 2, budget=3)


def random_complex(rng, n=6, gens=5):
    return ExplicitComplex.closure(
        tuple(sorted(rng.sample(range(n), rng.randint(1, min(4, n))))) for _ in range(gens))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_betti_agrees_with_dense_oracle(seed):
    cx = random_complex(random.Random(seed))
    assert betti_numbers(cx, cx.dim).reduced == reduced_betti(cx.simplices(), cx.dim)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_euler_characteristic_consistency(seed):
    cx = random_complex(random.Random(seed))
    b = betti_numbers(cx, cx.dim).reduced
    assert sum((-1) ** k * v for k, v in enumerate(b)) + 1 == cx.euler_characteristic()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_cones_are_acyclic(seed):
    cx = random_complex(random.Random(seed))
    assert betti_numbers(cone(cx), cx.dim + 1).acyclic


def test_gf2_rank_matches_dense():
    rng = np.random.default_rng(3)
    for _ in range(20):
        m = rng.integers(0, 2, size=(7, 9))
        cols = [int("".join(str(b) for b in m[::-1, j]), 2) for j in range(m.shape[1])]
        assert gf2_rank(cols) == gf2_rank_dense(m)
