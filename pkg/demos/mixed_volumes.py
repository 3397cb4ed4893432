"""Mixed volumes and area measures of small rational polytopes.

Run: python3 demos/mixed_volumes.py
"""

from afx import box, classify, convex_hull, cube, mixed_area_measure, mixed_volume, segment
from afx.mixedvol import af_sides, mixed_volume_interpolation

Q = cube(3)
T = convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
S = box((0, 0, 0), (1, 1, 0))
I = segment((0, 0, 0), (0, 0, 1))

print("V(Q, Q, Q) =", mixed_volume([Q, Q, Q]))
print("V(Q, T, T) =", mixed_volume([Q, T, T]))
# the volume polynomial gives the same number by a separate route
print("interpolation agrees:", mixed_volume_interpolation([Q, T, T]) == mixed_volume([Q, T, T]).q)

print("\nS_{S, I}: the prism's side faces, normal-scaled weights")
for atom in mixed_area_measure([S, I]).atoms:
    print(f"  {atom.normal}: {atom.rho}")

lhs, rhs = af_sides(Q, T, [S])
print(f"\nAlexandrov-Fenchel with C = S: V(Q,T,S)^2 = {lhs} >= {rhs} = V(Q,Q,S) V(T,T,S)")
print("class of (S,):", classify([S]).cls.value)
