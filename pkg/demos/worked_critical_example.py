"""The extremal space of a critical pair in R^4.

C1 is the unit 4-cube and C2 the unit square in the e1e2-plane.  The pair is
critical: C2 alone spans only two directions.  The extremal space has one
degenerate direction on top of the four linear ones, and the difference of
h_{C1+[0,e1]} and h_{C1+[0,e2]} is a genuine nonlinear extremal.

Run: python3 demos/worked_critical_example.py
"""

from afx import SupportDifference, box, cube, degenerate_pair_test, extremal_space, extremality_test, segment
from afx.extremals import is_linear_on_active, local_af_extension
from afx.polytope import minkowski_sum

C1 = cube(4)
C2 = box((0, 0, 0, 0), (1, 1, 0, 0))
M = segment((0, 0, 0, 0), (1, 0, 0, 0))
N = segment((0, 0, 0, 0), (0, 1, 0, 0))

space = extremal_space([C1, C2])
print(space.report.cls.value, "|", space.summary())
nonlinear = [v for v in space.basis if not is_linear_on_active(space, v)]
print("basis vectors not linear on the active normals:", len(nonlinear))

pair = degenerate_pair_test([C1, C2], M, N)
print("(M, N) degenerate pair:", pair.is_degenerate, "alpha =", sorted(pair.alpha))

res = extremality_test([C1, C2], SupportDifference(minkowski_sum(C1, M), minkowski_sum(C1, N)), space=space)
print("h_{C1+M} - h_{C1+N} extremal:", res.extremal, "; nonzero degenerate parts:", res.decomposition.nonzero_parts())

out = local_af_extension([C1, C2], 2, space.full_vector(nonlinear[0]), graph=space.graph)
print("local AF extension, quadratic audit passed:", out.audit_passed)
