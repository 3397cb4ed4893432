from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afx.ratgeo import (
    ScaledRational,
    Subspace,
    det,
    gram_sqrt,
    inverse,
    kernel_basis,
    mat_vec,
    orthogonal_projection,
    primitive,
    rank,
    solve,
)

small = st.integers(-5, 5)
rationals = st.fractions(min_value=-10, max_value=10, max_denominator=7)


def test_kernel_of_identity_is_empty():
    assert kernel_basis([[1, 0], [0, 1]]) == []


def test_kernel_of_single_row():
    (k,) = kernel_basis([[1, -1]])
    assert Subspace(2, [k]) == Subspace(2, [(1, 1)])


def octahedron_adjacency():
    # K_{2,2,2}: vertices i and j are adjacent unless they form an antipodal pair
    return [[0 if i == j or i // 2 == j // 2 else 1 for j in range(6)] for i in range(6)]


def test_octahedron_kernel_dimension():
    # oracle: brute-force rank over GF(p) for a large prime (rank is 3 over Q)
    A = octahedron_adjacency()
    p = 1_000_003
    m = [row[:] for row in A]
    r = 0
    for c in range(6):
        piv = next((i for i in range(r, 6) if m[i][c] % p), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(6):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
    assert 6 - r == 3
    K = kernel_basis(A)
    assert len(K) == 3
    for v in K:
        assert all(x == 0 for x in mat_vec(A, v))


def test_projection_examples():
    E = Subspace(3, [(1, 0, 0)])
    assert orthogonal_projection(E, (2, 3, 5)) == (2, 0, 0)
    D = Subspace(2, [(1, 1)])
    assert orthogonal_projection(D, (1, 0)) == (Fraction(1, 2), Fraction(1, 2))
    assert orthogonal_projection(Subspace.full(2), (3, -7)) == (3, -7)


def test_gram_sqrt_examples():
    assert gram_sqrt([(1, 0), (0, 1)]) == 1
    assert gram_sqrt([(1, 1)]) == ScaledRational.sqrt(2)
    assert gram_sqrt([(1, 0, 0), (1, 1, 0)]) == 1
    with pytest.raises(ValueError):
        gram_sqrt([(1, 1), (2, 2)])


def test_scaled_rational_normalizes_square_factors():
    x = ScaledRational(1, 8)
    assert x == ScaledRational(2, 2)
    assert str(x) == "2·√(2)"
    assert ScaledRational.sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert (ScaledRational.sqrt(2) * ScaledRational.sqrt(8)).is_rational()
    assert ScaledRational.from_json(x.to_json()) == x


def test_scaled_rational_mismatched_radicands_do_not_add():
    with pytest.raises(ValueError):
        ScaledRational.sqrt(2) + ScaledRational.sqrt(3)
    assert ScaledRational.sqrt(2) + ScaledRational.sqrt(8) == ScaledRational(3, 2)


def test_scaled_rational_ordering():
    assert ScaledRational.sqrt(2) < Fraction(3, 2)
    assert ScaledRational.sqrt(2) > Fraction(7, 5)
    assert -ScaledRational.sqrt(3) < 0


def test_primitive():
    assert primitive((Fraction(1, 2), Fraction(-3, 4), 0)) == (2, -3, 0)
    with pytest.raises(ValueError):
        primitive((0, 0))


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=5))
def test_rank_nullity(rows):
    assert rank(rows) + len(kernel_basis(rows, 3)) == 3


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_inverse_when_nonsingular(rows):
    if det(rows) == 0:
        with pytest.raises(ValueError):
            inverse(rows)
        return
    inv = inverse(rows)
    for i, r in enumerate(rows):
        for j in range(3):
            assert sum(r[k] * inv[k][j] for k in range(3)) == (1 if i == j else 0)


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=3),
       st.lists(small, min_size=4, max_size=4))
def test_projection_is_idempotent_and_orthogonal(vs, x):
    E = Subspace(4, vs)
    p = orthogonal_projection(E, x)
    assert E.contains(p)
    assert orthogonal_projection(E, p) == p
    r = tuple(a - b for a, b in zip(x, p))
    assert all(sum(a * b for a, b in zip(r, v)) == 0 for v in E.basis)


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=3))
def test_complement_dimension_and_gram_product(vs):
    E = Subspace(4, vs)
    F = E.orthogonal_complement()
    assert E.dim + F.dim == 4
    assert (E + F).dim == 4
    assert E.intersect(F).dim == 0
    if 0 < E.dim < 4:
        # gram_sqrt(E) * gram_sqrt(E-perp) = |det [B | B']| is rational
        assert (E.gram_sqrt() * F.gram_sqrt()).as_fraction() == abs(det(list(E.basis) + list(F.basis)))


@settings(max_examples=50)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4),
       st.lists(small, min_size=3, max_size=3))
def test_solve_agrees_with_mat_vec(rows, x):
    rhs = mat_vec(rows, x)
    sol = solve(rows, rhs, 3)
    assert sol is not None
    assert mat_vec(rows, sol) == rhs


@given(rationals, rationals)
def test_scaled_rational_rational_arithmetic(a, b):
    assert ScaledRational(a) + ScaledRational(b) == a + b
    assert ScaledRational(a) * ScaledRational(b) == a * b
    assert (ScaledRational(a) < ScaledRational(b)) == (a < b)
