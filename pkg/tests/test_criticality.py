import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afx.criticality import (
    CriticalityClass,
    classify,
    critical_sets,
    degenerate_pair_test,
    margin,
    maximal,
)
from afx.mixedvol import positivity
from afx.polytope import box, convex_hull, cube, segment
from afx.ratgeo import Subspace

C1 = cube(4)
C2 = box((0, 0, 0, 0), (1, 1, 0, 0))
M = segment((0, 0, 0, 0), (1, 0, 0, 0))
N = segment((0, 0, 0, 0), (0, 1, 0, 0))


def test_cube_is_supercritical():
    rep = classify([cube(3)])
    assert rep.cls is CriticalityClass.SUPERCRITICAL
    assert rep.eta == frozenset() and rep.maximal_sets == []


def test_worked_collection_is_critical():
    rep = classify([C1, C2])
    assert rep.cls is CriticalityClass.CRITICAL
    assert rep.maximal_sets == [frozenset({2})]
    assert rep.L_j[0] == Subspace(4, [(1, 0, 0, 0), (0, 1, 0, 0)])


def test_parallel_segments_are_null():
    e1 = segment((0, 0, 0, 0), (1, 0, 0, 0))
    assert classify([e1, e1]).cls is CriticalityClass.NULL


def test_critical_sets_examples():
    assert maximal(critical_sets([C1, C2])) == [frozenset({2})]
    with pytest.raises(ValueError):
        critical_sets([C2, C2])
    assert critical_sets([cube(4), cube(4)]) == []


def test_two_squares_are_subcritical():
    rep = classify([C2, C2])
    assert rep.cls is CriticalityClass.SUBCRITICAL
    assert rep.eta == frozenset({1, 2})
    assert rep.L_eta.dim == 2


def test_degenerate_pair_examples():
    res = degenerate_pair_test([C1, C2], M, N)
    assert res.is_degenerate and res.alpha == frozenset({2})
    assert not degenerate_pair_test([C1, C2], M, M.translate((0, 0, 1, 0))).is_degenerate
    e3 = segment((0, 0, 0, 0), (0, 0, 1, 0))
    res = degenerate_pair_test([C1, C2], e3, N)
    assert not res.is_degenerate
    assert "V_n" in res.reason


def test_degenerate_pair_needs_equal_normalization():
    # M and 2N both lie in L_alpha but V_L(M, C2) = 1/2 while V_L(2N, C2) = 1
    res = degenerate_pair_test([C1, C2], M, N.scaled(2))
    assert not res.is_degenerate
    assert res.scale == Fraction(1, 2)


small = st.integers(0, 2)
body4 = st.lists(st.tuples(small, small, small, small), min_size=1, max_size=5).map(convex_hull)


def brute_margin(bodies):
    n = bodies[0].ambient_dim
    best = None
    for k in range(1, len(bodies) + 1):
        for a in itertools.combinations(range(len(bodies)), k):
            vs = [tuple(x - y for x, y in zip(v, bodies[i].vertices[0])) for i in a for v in bodies[i].vertices]
            d = Subspace(n, vs).dim - k
            best = d if best is None else min(best, d)
    return best


@settings(max_examples=30, deadline=None)
@given(body4, body4)
def test_class_follows_margin(A, B):
    m = brute_margin([A, B])
    assert margin([A, B], 4) == m
    cls = classify([A, B]).cls
    expected = {-2: "null", -1: "null", 0: "subcritical", 1: "critical"}.get(m, "supercritical")
    assert cls.value == expected


@settings(max_examples=30, deadline=None)
@given(body4, body4)
def test_null_means_vanishing_af(A, B):
    # a null collection kills V_n(K, L, A, B) for every K, L; check with the cube
    if classify([A, B]).cls is CriticalityClass.NULL:
        assert not positivity([cube(4), cube(4), A, B])
    else:
        assert positivity([cube(4), cube(4), A, B])
