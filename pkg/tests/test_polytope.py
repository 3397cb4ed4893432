import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afx.polytope import (
    VPolytope,
    box,
    convex_hull,
    cube,
    dim,
    face_polytope,
    facet_normals,
    h_representation,
    lebesgue_volume,
    minkowski_sum,
    point,
    polytope_from_json,
    polytope_to_json,
    pyramid_volume,
    segment,
    support_value,
    vertices_of_inequalities,
    volume,
)
from afx.ratgeo import ScaledRational, det

F = Fraction
coord = st.integers(-3, 3)


def points(n, lo=1, hi=8):
    return st.lists(st.tuples(*[coord] * n), min_size=lo, max_size=hi)


def test_hull_drops_interior_point():
    T = convex_hull([(0, 0), (1, 0), (0, 1), (F(1, 4), F(1, 4))])
    assert T.vertices == ((0, 0), (0, 1), (1, 0))


def test_hull_of_cube_vertices():
    pts = list(itertools.product((0, 1), repeat=3))
    assert len(convex_hull(pts).vertices) == 8


def test_hull_of_collinear_points():
    S = convex_hull([(0, 0), (1, 1), (F(1, 2), F(1, 2))])
    assert S.vertices == ((0, 0), (1, 1))
    assert S.dim == 1


def test_minkowski_examples():
    e1, e2 = segment((0, 0), (1, 0)), segment((0, 0), (0, 1))
    assert minkowski_sum(e1, e2) == box((0, 0), (1, 1))
    assert minkowski_sum(cube(3), point((1, 2, 3))) == box((1, 2, 3), (2, 3, 4))
    assert minkowski_sum(e1, e1) == segment((0, 0), (2, 0))


def test_support_examples():
    assert support_value(cube(3), (1, 1, 1)) == 3
    assert support_value(cube(3), (-1, 0, 0)) == 0
    assert support_value(box((0, 0, 0, 0), (1, 1, 0, 0)), (0, 0, 1, 0)) == 0


def test_face_examples():
    assert face_polytope(cube(3), (1, 0, 0)) == box((1, 0, 0), (1, 1, 1))
    assert face_polytope(cube(3), (1, 1, 0)) == segment((1, 1, 0), (1, 1, 1))
    assert face_polytope(segment((0, 0), (1, 0)), (0, 1)) == segment((0, 0), (1, 0))


def test_facet_normal_examples():
    assert sorted(facet_normals(box((0, 0), (1, 1)))) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert len(facet_normals(cube(3))) == 6
    assert sorted(facet_normals(convex_hull([(0, 0), (1, 0), (0, 1)]))) == [(-1, 0), (0, -1), (1, 1)]


def test_volume_examples():
    assert volume(cube(3)) == 1
    assert volume(convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])) == F(1, 6)
    assert volume(segment((0, 0), (1, 1))) == ScaledRational.sqrt(2)
    assert volume(segment((0, 0), (1, 1)), intrinsic=False) == 0


def test_dimension_examples():
    assert dim(point((0, 0))) == 0
    assert dim(box((0, 0, 0, 0), (1, 1, 0, 0))) == 2
    assert dim(cube(4)) == 4


def test_json_round_trip_and_errors():
    C = convex_hull([(0, 0), (F(1, 2), 0), (0, 3)])
    assert polytope_from_json(polytope_to_json(C)) == C
    assert json.loads(polytope_to_json(C))["vertices"][1] == ["0", "3"]
    with pytest.raises(ValueError):
        polytope_from_json({"dim": 2, "vertices": [[0, 0, 0]]})
    with pytest.raises(ValueError):
        polytope_from_json({"dim": 2})


def test_h_representation_round_trip_cube():
    H = h_representation(cube(3))
    assert len(H) == 6
    V = vertices_of_inequalities([a for a, _ in H], [b for _, b in H])
    assert convex_hull(V) == cube(3)


def simplex_volume(pts):
    p0 = pts[0]
    rows = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    d = abs(det(rows))
    for k in range(2, len(p0) + 1):
        d /= k
    return d


@given(points(3, 4, 4))
def test_simplex_volume_matches_determinant(pts):
    # oracle: |det| / n! for a simplex
    C = convex_hull(pts)
    expected = simplex_volume(pts) if C.dim == 3 else 0
    assert lebesgue_volume(C) == expected


@settings(max_examples=60)
@given(points(3, 4, 10))
def test_two_volume_routes_agree(pts):
    C = convex_hull(pts)
    if C.dim == 3:
        assert lebesgue_volume(C) == pyramid_volume(C.vertices)


@settings(max_examples=60)
@given(points(3, 1, 8))
def test_hull_vertices_are_extreme_and_cover(pts):
    C = convex_hull(pts)
    assert set(C.vertices) <= {tuple(F(x) for x in p) for p in pts}
    # every input point satisfies every facet inequality
    if C.dim == 3:
        for a, b in h_representation(C):
            assert all(sum(x * y for x, y in zip(a, p)) <= b for p in pts)
            assert any(sum(x * y for x, y in zip(a, v)) == b for v in C.vertices)


@settings(max_examples=40)
@given(points(3, 1, 5), points(3, 1, 5), st.tuples(coord, coord, coord))
def test_support_is_additive(p, q, u):
    A, B = convex_hull(p), convex_hull(q)
    assert support_value(minkowski_sum(A, B), u) == support_value(A, u) + support_value(B, u)


@settings(max_examples=40)
@given(points(3, 4, 8), st.fractions(min_value=F(1, 3), max_value=3, max_denominator=4))
def test_volume_scales_by_cube(pts, t):
    C = convex_hull(pts)
    assert lebesgue_volume(C.scaled(t)) == t ** 3 * lebesgue_volume(C)


@settings(max_examples=40)
@given(points(3, 4, 8), st.tuples(coord, coord, coord))
def test_volume_is_translation_invariant(pts, v):
    C = convex_hull(pts)
    assert lebesgue_volume(C.translate(v)) == lebesgue_volume(C)


@settings(max_examples=30)
@given(points(2, 3, 8))
def test_h_to_v_round_trip(pts):
    C = convex_hull(pts)
    if C.dim < 2:
        return
    H = h_representation(C)
    assert convex_hull(vertices_of_inequalities([a for a, _ in H], [b for _, b in H])) == C


def test_vpolytope_rejects_mixed_dimensions():
    with pytest.raises(ValueError):
        convex_hull([(0, 0), (1, 0, 0)])
    with pytest.raises(ValueError):
        convex_hull([])
    assert isinstance(VPolytope([(1, 1), (0, 0), (F(1, 2), F(1, 2))]), VPolytope)
