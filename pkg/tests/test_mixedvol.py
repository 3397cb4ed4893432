import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afx.mixedvol import (
    SupportDifference,
    af_sides,
    measure_from_json,
    mixed_area_measure,
    mixed_area_measure_in_subspace,
    mixed_volume,
    mixed_volume_in_subspace,
    mixed_volume_interpolation,
    mixed_volume_rational,
    positivity,
    projection_check,
    projection_formula,
    signed_area_measure,
    verify_propeller,
)
from afx.polytope import box, convex_hull, cube, minkowski_sum, segment
from afx.ratgeo import ScaledRational, Subspace, unit

F = Fraction
coord = st.integers(0, 3)


def body3(lo=1, hi=6):
    return st.lists(st.tuples(coord, coord, coord), min_size=lo, max_size=hi).map(convex_hull)


def exdeg():
    C1 = cube(4)
    C2 = box((0, 0, 0, 0), (1, 1, 0, 0))
    M = segment((0, 0, 0, 0), (1, 0, 0, 0))
    N = segment((0, 0, 0, 0), (0, 1, 0, 0))
    return C1, C2, M, N


def axis_segments(n):
    return [segment([0] * n, unit(n, i)) for i in range(n)]


def test_mixed_volume_examples():
    Q = cube(3)
    assert mixed_volume([Q, Q, Q]) == 1
    assert mixed_volume(axis_segments(3)) == F(1, 6)
    C1, C2, M, N = exdeg()
    assert mixed_volume([M, N, C1, C2]) == 0


def test_interpolation_oracle_on_examples():
    assert mixed_volume_interpolation(axis_segments(3)) == F(1, 6)
    assert mixed_volume_interpolation([cube(3)] * 3) == 1
    C1, C2, M, N = exdeg()
    assert mixed_volume_interpolation([M, N, C1, C2]) == 0


def test_arity_is_checked():
    with pytest.raises(ValueError):
        mixed_volume([cube(3), cube(3)])


def test_mixed_volume_in_subspace_examples():
    E = Subspace(4, [unit(4, 0), unit(4, 1)])
    C1, C2, M, N = exdeg()
    assert mixed_volume_in_subspace(E, [C2, C2]) == 1
    assert mixed_volume_in_subspace(E, [M, N]) == F(1, 2)
    D = Subspace(2, [(1, 1)])
    assert mixed_volume_in_subspace(D, [segment((0, 0), (1, 1))]) == ScaledRational.sqrt(2)


def test_area_measure_of_cube():
    mu = mixed_area_measure([cube(3), cube(3)])
    assert sorted(mu.support()) == sorted(
        [tuple(s * x for x in unit(3, i)) for i in range(3) for s in (1, -1)])
    assert all(a.weight == 1 for a in mu.atoms)


def test_area_measure_of_square_is_edge_lengths():
    mu = mixed_area_measure([box((0, 0), (1, 1))])
    assert len(mu.atoms) == 4 and all(a.weight == 1 for a in mu.atoms)


def test_prism_face_measure():
    # oracle: V_3(Q, S, I) = 1/3 for Q the cube, S the unit square in the e1e2-plane
    # and I = [0, e3]; the pairing (1/3) sum h_Q(u) S(u) then forces the weight
    # at each of +-e1, +-e2 to be 1/2 (h_Q is 1 at +e1, +e2 and 0 at -e1, -e2)
    S, I = box((0, 0, 0), (1, 1, 0)), segment((0, 0, 0), (0, 0, 1))
    assert mixed_volume([cube(3), S, I]) == F(1, 3)
    mu = mixed_area_measure([S, I])
    assert sorted(mu.support()) == [(-1, 0, 0), (0, -1, 0), (0, 1, 0), (1, 0, 0)]
    assert all(a.weight == F(1, 2) for a in mu.atoms)
    assert mu.atom_at((0, 0, 1)) is None


def test_measure_json_round_trip():
    mu = mixed_area_measure([cube(3), convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])])
    data = mu.to_json()
    assert set(data["atoms"][0]["weight"]) == {"q", "g"}
    assert measure_from_json(data, 3).atoms == mu.atoms


def test_positivity_examples():
    assert positivity(axis_segments(3))
    e1 = segment((0, 0, 0), (1, 0, 0))
    assert not positivity([e1, e1, cube(3)])
    C1, C2, M, N = exdeg()
    assert not positivity([M, N, C1, C2])


def test_segment_projection_examples():
    S = box((0, 0, 0), (1, 1, 0))
    assert projection_check((0, 0, 1), [S, cube(3)])
    assert projection_check((1, 1, 0), [cube(3), cube(3)])
    assert projection_check((1, 0, 0), axis_segments(3)[:2])


def test_projection_formula_example():
    C1, C2, M, N = exdeg()
    E = Subspace(4, [unit(4, 0), unit(4, 1)])
    lhs, rhs = projection_formula(E, [C2, C2, C1, C1])
    assert lhs == rhs == 1


def test_propeller_on_worked_example():
    C1, C2, _, _ = exdeg()
    E = Subspace(4, [unit(4, 0), unit(4, 1)])
    rep = verify_propeller(E, [C2, C1, C1], 1)
    assert rep.passed
    assert sorted(rep.blades) == [(-1, 0, 0, 0), (0, -1, 0, 0), (0, 1, 0, 0), (1, 0, 0, 0)]


def test_propeller_preconditions():
    E = Subspace(4, [unit(4, 0), unit(4, 1)])
    S = box((0, 0, 0, 0), (1, 1, 0, 0))
    with pytest.raises(ValueError):
        verify_propeller(E, [cube(4)] * 3, 0)
    # k = 2 requires a three-dimensional E
    with pytest.raises(ValueError):
        verify_propeller(E, [S, S, cube(4)], 2)


def test_signed_measure_of_homothety_difference():
    Q = cube(3)
    f = SupportDifference(Q.scaled(2), Q)
    mu = signed_area_measure(f, [Q])
    ref = mixed_area_measure([Q, Q])
    assert sorted((a.normal, a.rho) for a in mu.atoms) == sorted((a.normal, a.rho) for a in ref.atoms)


# ---------------------------------------------------------------------------
# invariants


@settings(max_examples=25, deadline=None)
@given(body3(), body3(), body3())
def test_polarization_matches_interpolation(A, B, C):
    assert mixed_volume_rational([A, B, C]) == mixed_volume_interpolation([A, B, C])


@settings(max_examples=25, deadline=None)
@given(body3(), body3(), body3())
def test_symmetry(A, B, C):
    v = mixed_volume_rational([A, B, C])
    assert v == mixed_volume_rational([C, A, B]) == mixed_volume_rational([B, C, A])


@settings(max_examples=20, deadline=None)
@given(body3(), body3(), body3(), body3())
def test_minkowski_linearity(A, A2, B, C):
    lhs = mixed_volume_rational([minkowski_sum(A, A2), B, C])
    assert lhs == mixed_volume_rational([A, B, C]) + mixed_volume_rational([A2, B, C])


@settings(max_examples=20, deadline=None)
@given(body3(), body3(), body3(), st.fractions(min_value=F(1, 3), max_value=3, max_denominator=3),
       st.tuples(coord, coord, coord))
def test_homogeneity_and_translation(A, B, C, t, v):
    base = mixed_volume_rational([A, B, C])
    assert mixed_volume_rational([A.scaled(t), B, C]) == t * base
    assert mixed_volume_rational([A.translate(v), B, C]) == base


@settings(max_examples=25, deadline=None)
@given(body3())
def test_diagonal_is_volume(A):
    from afx.polytope import lebesgue_volume

    assert mixed_volume_rational([A, A, A]) == lebesgue_volume(A)


@settings(max_examples=25, deadline=None)
@given(body3(), body3(), body3())
def test_area_measure_closure_and_pairing(A, B, K):
    mu = mixed_area_measure([A, B])
    assert all(x == 0 for x in mu.closure_defect())
    assert mu.is_closed()
    assert mu.pair(K) == mixed_volume_rational([K, A, B])
    assert all(a.rho > 0 for a in mu.atoms)


@settings(max_examples=25, deadline=None)
@given(body3(), body3(), body3())
def test_positivity_iff_nonzero(A, B, C):
    assert positivity([A, B, C]) == (mixed_volume_rational([A, B, C]) > 0)


@settings(max_examples=25, deadline=None)
@given(body3(), body3(), body3())
def test_alexandrov_fenchel_holds(K, L, C):
    kl2, kkll = af_sides(K, L, [C])
    assert kl2 >= kkll


@settings(max_examples=20, deadline=None)
@given(body3(), body3(), st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2)))
def test_segment_projection_identity(A, B, u):
    if any(u):
        assert projection_check(u, [A, B])


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10_000))
def test_subspace_measure_is_closed(seed):
    rng = random.Random(seed)
    E = Subspace(3, [(1, 1, 0), (0, 1, 1)])
    pts = [tuple(a * x + b * y for x, y in zip(*E.basis)) for a, b in
           ((rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(4))]
    C = convex_hull(pts)
    if C.dim < 2:
        return
    mu = mixed_area_measure_in_subspace(E, [C])
    assert mu.is_closed()
    assert all(E.contains(w) for w in mu.support())
