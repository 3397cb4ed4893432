import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afx.errors import InputError
from afx.polytope import box, convex_hull, facet_normals
from afx.stanley import (
    Poset,
    condition_c,
    exst_equivalence_audit,
    extremal_condition_d,
    linear_extensions,
    order_polytope,
    order_polytope_facet_count,
    order_polytopes_KL,
    parse_poset,
    posets_up_to_iso,
    random_poset,
    rank_sequence,
    stanley_representation_check,
    trivial_extremal_test,
    worked_example,
)

ANTICHAIN = Poset(["x", "y1", "y2"], [], "x")
CHAIN = Poset(["y1", "x", "y2"], [("y1", "x"), ("x", "y2")], "x")
V_SHAPE = Poset(["y1", "x", "y2"], [("y1", "x")], "x")


def brute_counts(P: Poset) -> list[int]:
    """Oracle: scan every permutation and record the position of x."""
    counts = [0] * P.n
    for perm in itertools.permutations(range(P.n)):
        pos = {e: k for k, e in enumerate(perm)}
        if all(pos[a] < pos[b] for b in range(P.n) for a in range(P.n) if P.lt(a, b)):
            counts[pos[P.x]] += 1
    return counts


def test_rank_sequence_examples():
    assert rank_sequence(ANTICHAIN).counts == [2, 2, 2]
    assert rank_sequence(CHAIN).counts == [0, 1, 0]
    assert rank_sequence(worked_example()).counts == [0, 1, 1, 1, 0]
    assert rank_sequence(worked_example())[3] == 1


def test_rank_sequence_matches_brute_force_on_worked_example():
    assert rank_sequence(worked_example()).counts == brute_counts(worked_example())


def test_posets_up_to_isomorphism_counts():
    # unlabelled posets on 1..6 points (OEIS A000112)
    assert [len(posets_up_to_iso(n)) for n in range(1, 7)] == [1, 2, 5, 16, 63, 318]


def test_order_polytopes_examples():
    K, L = order_polytopes_KL(ANTICHAIN)
    assert K == L == box((0, 0), (1, 1))
    K, L = order_polytopes_KL(CHAIN)
    assert K == convex_hull([(0, 1), (1, 1)])
    assert L == convex_hull([(0, 0), (0, 1)])
    K, L = order_polytopes_KL(V_SHAPE)
    assert L == convex_hull([(0, 0), (0, 1)])
    assert K == box((0, 0), (1, 1))


def test_order_polytope_facets_match_prediction():
    P = worked_example()
    beta = P.ys
    O = order_polytope(P, beta)
    assert len(facet_normals(O)) == order_polytope_facet_count(P, beta)


def test_trivial_extremal_examples():
    assert trivial_extremal_test(CHAIN, 1)
    assert not any(trivial_extremal_test(ANTICHAIN, i) for i in (1, 2, 3))
    assert trivial_extremal_test(worked_example(), 5)


def test_condition_d_examples():
    assert extremal_condition_d(ANTICHAIN, 2)
    assert extremal_condition_d(worked_example(), 3)
    assert not extremal_condition_d(worked_example(), 2)


def test_audit_examples():
    (row,) = exst_equivalence_audit(ANTICHAIN).rows
    assert row.i == 2 and row.a and row.b and row.c and row.d
    (row,) = exst_equivalence_audit(CHAIN).rows
    assert row.i == 2 and not (row.a or row.b or row.c or row.d)
    audit = exst_equivalence_audit(worked_example())
    assert audit.equality_indices == [3]
    assert audit.disagreements == []


def test_representation_on_examples():
    for P in (ANTICHAIN, CHAIN, V_SHAPE, worked_example()):
        assert stanley_representation_check(P)


def test_parse_poset_file():
    P = parse_poset("# chain\ny1 *x y2\ny1 < x\nx < y2\n")
    assert rank_sequence(P).counts == [0, 1, 0]


@pytest.mark.parametrize("text,line,col", [
    ("", 1, 1),
    ("a b c\n", 1, 1),
    ("a *x\na < q\n", 2, 4),
    ("a *x\na x\n", 2, 1),
    ("a *x *b\n", 1, 6),
])
def test_parse_errors_are_located(text, line, col):
    with pytest.raises(InputError) as e:
        parse_poset(text)
    assert (e.value.line, e.value.col) == (line, col)


def test_cycle_is_rejected():
    with pytest.raises(InputError):
        parse_poset("a *x\na < x\nx < a\n")


posets = st.builds(lambda seed, size: random_poset(size, random.Random(seed)),
                   st.integers(0, 10**6), st.integers(2, 6))


@settings(max_examples=60, deadline=None)
@given(posets)
def test_counts_match_brute_force(P):
    assert rank_sequence(P).counts == brute_counts(P)
    assert rank_sequence(P).total == sum(1 for _ in linear_extensions(P))


@settings(max_examples=60, deadline=None)
@given(posets)
def test_log_concave_and_conditions_agree(P):
    seq = rank_sequence(P)
    assert seq.log_concave()
    for i in range(1, P.n + 1):
        assert trivial_extremal_test(P, i) == (seq[i] == 0)
    assert exst_equivalence_audit(P).disagreements == []


@settings(max_examples=40, deadline=None)
@given(posets)
def test_dual_order_reverses_sequence(P):
    dual_below = [sum(1 << j for j in range(P.n) if P.lt(i, j)) for i in range(P.n)]
    D = Poset.from_masks(dual_below, P.x)
    assert rank_sequence(D).counts == rank_sequence(P).counts[::-1]


@settings(max_examples=40, deadline=None)
@given(posets)
def test_condition_c_is_equality_when_positive(P):
    seq = rank_sequence(P)
    for i in range(2, P.n):
        if seq[i] > 0:
            assert condition_c(P, i) == (seq[i] == seq[i - 1] == seq[i + 1])


@settings(max_examples=15, deadline=None)
@given(st.builds(lambda seed, size: random_poset(size, random.Random(seed)),
                 st.integers(0, 10**6), st.integers(2, 4)))
def test_mixed_volume_representation(P):
    assert stanley_representation_check(P)
