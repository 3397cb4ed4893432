"""Rational polytopes in vertex representation.

Lower-dimensional polytopes are handled in the chart of their affine hull
(pivot coordinates of the RREF direction basis), so every operation works the
same way whatever the dimension of the body.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from typing import Iterable, Sequence

from . import _hull
from .ratgeo import (
    ScaledRational,
    Subspace,
    Vector,
    add,
    dot,
    drop,
    fmt_rational,
    frac,
    is_zero,
    rank,
    sub,
    vec,
)


def _lcm(xs: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), xs, 1)


def _to_int_points(points: Sequence[Sequence[Fraction]]) -> tuple[list[tuple[int, ...]], int]:
    den = _lcm(a.denominator for p in points for a in p)
    return [tuple(int(a * den) for a in p) for p in points], den


@lru_cache(maxsize=20000)
def _fulldim_facets(points: tuple[Vector, ...]) -> tuple:
    """Facets of a full-dimensional rational point set: (a, b, index set)."""
    ints, den = _to_int_points(points)
    out = []
    for a, b, mask in _hull.facets_of_points(ints):
        idx = frozenset(i for i in range(len(points)) if mask >> i & 1)
        out.append((a, b / den, idx))
    return tuple(out)


def _extreme_indices(points: tuple[Vector, ...], facets) -> list[int]:
    # a point is a vertex iff the facets through it meet in that point alone
    meet: dict[int, frozenset] = {}
    for _, _, idx in facets:
        for i in idx:
            meet[i] = meet[i] & idx if i in meet else idx
    return [i for i in range(len(points)) if meet.get(i) == frozenset([i])]


def _polygon_area(points: Sequence[Vector]) -> Fraction:
    """Area of the convex hull of planar points (monotone chain, shoelace)."""
    pts = sorted(set(points))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def chain(seq):
        out: list = []
        for p in seq:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out[:-1]

    ring = chain(pts) + chain(reversed(pts))
    twice = sum(a[0] * b[1] - a[1] * b[0] for a, b in zip(ring, ring[1:] + ring[:1]))
    return abs(Fraction(twice)) / 2


def _fulldim_volume(points: Sequence[Vector]) -> Fraction:
    """Lebesgue volume of the hull of full-dimensional rational points."""
    ints, den = _to_int_points(points)
    return _triangulated_volume(tuple(sorted(set(ints)))) / den ** len(ints[0])


def pyramid_volume(points: Sequence[Vector]) -> Fraction:
    """Same volume by facet-pyramid recursion (an independent second route)."""
    ints, den = _to_int_points(points)
    return _int_volume(tuple(sorted(set(ints)))) / den ** len(ints[0])


@lru_cache(maxsize=5000)
def _triangulated_volume(points: tuple[tuple[int, ...], ...]) -> Fraction:
    m = len(points[0])
    if m == 1:
        return Fraction(points[-1][0] - points[0][0])
    if m == 2:
        return _polygon_area(points)
    masks = [mask for _, _, mask in _hull.facets_of_points(list(points))]
    total = 0
    for simplex in pulling_triangulation(len(points), masks, m):
        v0 = points[simplex[0]]
        total += abs(_hull._idet([[a - b for a, b in zip(points[j], v0)] for j in simplex[1:]]))
    return Fraction(total, math.factorial(m))


def pulling_triangulation(npoints: int, facet_masks: Sequence[int], m: int) -> list[tuple[int, ...]]:
    """Simplices (index tuples) of a pulling triangulation of an m-polytope.

    Only the facet incidences are used.  Faces are vertex bit masks; the
    facets of a face F are the maximal proper nonempty sets F & G over the
    facets G of the polytope, and each face is coned from its lowest vertex.
    """
    meet: dict[int, int] = {}
    for f in facet_masks:
        for i in range(npoints):
            if f >> i & 1:
                meet[i] = meet.get(i, f) & f
    verts = 0
    for i, x in meet.items():
        if x == 1 << i:
            verts |= x
    facets = [f & verts for f in facet_masks]
    sub_cache: dict[int, list[int]] = {}

    def subfaces(F: int) -> list[int]:
        if F not in sub_cache:
            cand = {F & G for G in facets} - {0, F}
            sub_cache[F] = [x for x in cand if not any(x != y and x & y == x for y in cand)]
        return sub_cache[F]

    out: list[tuple[int, ...]] = []

    def pull(F: int, k: int, apexes: tuple[int, ...]):
        if k == 0:
            out.append(apexes + (F.bit_length() - 1,))
            return
        c = (F & -F).bit_length() - 1
        for G in (subfaces(F) if k < m else facets):
            if not G >> c & 1:
                pull(G, k - 1, apexes + (c,))

    pull(verts, m, ())
    return out


@lru_cache(maxsize=50000)
def _int_volume(points: tuple[tuple[int, ...], ...]) -> Fraction:
    """Pyramid recursion over facets on integer points.

    Vol = (1/m) sum_F (b_F - <a_F, c>) vol(F)/|a_F|, and vol(F)/|a_F| equals the
    volume of F with coordinate k dropped divided by |a_F[k]|.
    """
    m = len(points[0])
    if m == 1:
        return Fraction(points[-1][0] - points[0][0])
    if m == 2:
        return _polygon_area(points)
    c = points[0]
    total = Fraction(0)
    for a, b, mask in _hull.facets_of_points(list(points)):
        height = b - sum(x * y for x, y in zip(a, c))
        if height == 0:
            continue
        k = next(j for j, x in enumerate(a) if x != 0)
        face = sorted({drop(points[i], k) for i in range(len(points)) if mask >> i & 1})
        total += height * _int_volume(tuple(face)) / abs(a[k])
    return total / m


class VPolytope:
    """Convex hull of finitely many rational points, stored by its vertices."""

    __slots__ = ("vertices", "ambient_dim", "__dict__")

    def __init__(self, vertices: Iterable[Sequence], _trusted: bool = False):
        if _trusted:
            vs = tuple(vertices)
        else:
            vs = convex_hull(vertices).vertices
        self.vertices: tuple[Vector, ...] = vs
        self.ambient_dim = len(vs[0])

    def __eq__(self, other) -> bool:
        return isinstance(other, VPolytope) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        pts = ", ".join("(" + ", ".join(fmt_rational(a) for a in v) + ")" for v in self.vertices)
        return f"VPolytope([{pts}])"

    @cached_property
    def direction(self) -> Subspace:
        p0 = self.vertices[0]
        return Subspace(self.ambient_dim, [sub(v, p0) for v in self.vertices[1:]])

    @property
    def dim(self) -> int:
        return self.direction.dim

    def chart_points(self) -> tuple[Vector, ...]:
        """Vertices in the affine chart: pivot coordinates relative to vertex 0."""
        p0 = self.vertices[0]
        return tuple(self.direction.chart(sub(v, p0)) for v in self.vertices)

    @cached_property
    def chart_facets(self) -> tuple:
        """Facets of the polytope inside its affine hull, in chart coordinates."""
        m = self.dim
        if m == 0:
            return ()
        pts = self.chart_points()
        if m == 1:
            lo = min(range(len(pts)), key=lambda i: pts[i][0])
            hi = max(range(len(pts)), key=lambda i: pts[i][0])
            return (((-1,), -pts[lo][0], frozenset([lo])), ((1,), pts[hi][0], frozenset([hi])))
        return _fulldim_facets(pts)

    def translate(self, v: Sequence) -> "VPolytope":
        v = vec(v)
        return VPolytope(sorted(add(p, v) for p in self.vertices), _trusted=True)

    def scaled(self, c) -> "VPolytope":
        c = frac(c)
        if c < 0:
            raise ValueError("negative dilation")
        if c == 0:
            return point((0,) * self.ambient_dim)
        return VPolytope(sorted(tuple(c * a for a in p) for p in self.vertices), _trusted=True)

    def centroid(self) -> Vector:
        k = len(self.vertices)
        return tuple(sum(p[i] for p in self.vertices) / k for i in range(self.ambient_dim))

    def to_json(self) -> dict:
        return {"dim": self.ambient_dim,
                "vertices": [[fmt_rational(a) for a in v] for v in self.vertices]}


@dataclass(frozen=True)
class Face:
    parent: VPolytope
    normal: Vector
    polytope: VPolytope

    @property
    def vertices(self) -> tuple[Vector, ...]:
        return self.polytope.vertices


def point(p: Sequence) -> VPolytope:
    return VPolytope([vec(p)], _trusted=True)


def segment(a: Sequence, b: Sequence) -> VPolytope:
    return convex_hull([a, b])


def box(lo: Sequence, hi: Sequence) -> VPolytope:
    """Axis-parallel box; coordinates with lo == hi give a lower-dimensional box."""
    lo, hi = vec(lo), vec(hi)
    pts = [()]
    for a, b in zip(lo, hi):
        pts = [p + (x,) for p in pts for x in ({a, b})]
    return convex_hull(pts)


def cube(n: int, side=1) -> VPolytope:
    return box([0] * n, [side] * n)


def simplex(points: Sequence[Sequence]) -> VPolytope:
    return convex_hull(points)


def convex_hull(points: Iterable[Sequence]) -> VPolytope:
    pts = sorted({vec(p) for p in points})
    if not pts:
        raise ValueError("convex hull of an empty point set")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise ValueError("points have different dimensions")
    if len(pts) == 1:
        return VPolytope(pts, _trusted=True)
    ints, _ = _to_int_points(pts)
    if len(_hull._affinely_independent(ints)) == n + 1:
        # full-dimensional: the chart is the identity
        keep = _extreme_indices(tuple(pts), _fulldim_facets(tuple(pts)))
        return VPolytope([pts[i] for i in keep], _trusted=True)
    p0 = pts[0]
    D = Subspace(n, [sub(p, p0) for p in pts[1:]])
    m = D.dim
    chart = [D.chart(sub(p, p0)) for p in pts]
    if m == 1:
        keep = [min(range(len(pts)), key=lambda i: chart[i][0]),
                max(range(len(pts)), key=lambda i: chart[i][0])]
    else:
        ch = tuple(chart)
        keep = _extreme_indices(ch, _fulldim_facets(ch))
    return VPolytope(sorted(pts[i] for i in keep), _trusted=True)


@lru_cache(maxsize=4096)
def minkowski_sum(A: VPolytope, B: VPolytope) -> VPolytope:
    if A.ambient_dim != B.ambient_dim:
        raise ValueError("dimension mismatch")
    if len(A.vertices) == 1:
        return B.translate(A.vertices[0])
    if len(B.vertices) == 1:
        return A.translate(B.vertices[0])
    return convex_hull(add(a, b) for a in A.vertices for b in B.vertices)


def minkowski_sum_all(bodies: Sequence[VPolytope], n: int | None = None) -> VPolytope:
    if not bodies:
        if n is None:
            raise ValueError("empty sum needs the ambient dimension")
        return point((0,) * n)
    return reduce(minkowski_sum, bodies)


def support_value(C: VPolytope, u: Sequence) -> Fraction:
    u = vec(u)
    return max(dot(v, u) for v in C.vertices)


def face(C: VPolytope, u: Sequence) -> Face:
    u = vec(u)
    if len(u) != C.ambient_dim:
        raise ValueError("dimension mismatch")
    if is_zero(u):
        raise ValueError("face direction must be nonzero")
    h = support_value(C, u)
    vs = tuple(v for v in C.vertices if dot(v, u) == h)
    return Face(C, u, VPolytope(vs, _trusted=True))


def face_polytope(C: VPolytope, u: Sequence) -> VPolytope:
    return face(C, u).polytope


def facet_normals(C: VPolytope) -> list[tuple[int, ...]]:
    """Primitive outer facet normals of C inside the linear span of aff(C) - aff(C)."""
    if C.dim == 0:
        raise ValueError("a point has no facets")
    D = C.direction
    return sorted(D.dual_normal(a) for a, _, _ in C.chart_facets)


def dim(C: VPolytope) -> int:
    return C.dim


def lebesgue_volume(C: VPolytope) -> Fraction:
    """Volume in the ambient space (zero unless C is full-dimensional)."""
    if C.dim < C.ambient_dim:
        return Fraction(0)
    if C.ambient_dim == 0:
        return Fraction(1)
    return _fulldim_volume(C.chart_points())


def chart_volume(C: VPolytope) -> Fraction:
    """Volume of C measured in the chart coordinates of its own affine hull."""
    if C.dim == 0:
        return Fraction(1)
    return _fulldim_volume(C.chart_points())


def volume(C: VPolytope, intrinsic: bool | None = None) -> ScaledRational:
    """Lebesgue volume if C is full-dimensional, otherwise the intrinsic volume in aff(C).

    A point has intrinsic volume 1; pass ``intrinsic=False`` to get the
    ambient measure (zero for every lower-dimensional body).
    """
    if C.dim == C.ambient_dim:
        return ScaledRational(lebesgue_volume(C))
    if intrinsic is False:
        return ScaledRational(0)
    return ScaledRational(chart_volume(C)) * C.direction.gram_sqrt()


# ---------------------------------------------------------------------------
# H-representation helpers


def h_representation(C: VPolytope) -> list[tuple[tuple[int, ...], Fraction]]:
    """Facet inequalities <a, x> <= b of a full-dimensional polytope."""
    if C.dim != C.ambient_dim:
        raise ValueError("H-representation needs a full-dimensional polytope")
    p0 = C.vertices[0]
    return [(a, b + dot(a, p0)) for a, b, _ in C.chart_facets]


def vertices_of_inequalities(A: Sequence[Sequence], b: Sequence) -> list[Vector]:
    """Vertices of the bounded polyhedron {x : Ax <= b} (must be full-dimensional)."""
    rows_f = [vec(r) + (-frac(c),) for r, c in zip(A, b)]
    n = len(rows_f[0]) - 1
    rows_f.append((Fraction(0),) * n + (Fraction(-1),))
    den_rows = []
    for r in rows_f:
        d = _lcm(x.denominator for x in r)
        den_rows.append(tuple(int(x * d) for x in r))
    start = _independent_rows(den_rows)
    out = []
    for ray, _ in _hull.extreme_rays(den_rows, start):
        t = ray[-1]
        if t == 0:
            raise ValueError("polyhedron is unbounded")
        out.append(tuple(Fraction(x, t) for x in ray[:-1]))
    return sorted(set(out))


def _independent_rows(rows: list[tuple[int, ...]]) -> list[int]:
    chosen: list[int] = []
    cur: list[tuple[int, ...]] = []
    for i, r in enumerate(rows):
        if rank(cur + [r]) > len(cur):
            cur.append(r)
            chosen.append(i)
            if len(cur) == len(rows[0]):
                break
    if len(chosen) != len(rows[0]):
        raise ValueError("inequality system does not define a pointed cone")
    return chosen


# ---------------------------------------------------------------------------
# JSON


def polytope_from_json(data) -> VPolytope:
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict) or "vertices" not in data:
        raise ValueError('expected an object with "dim" and "vertices"')
    verts = [vec(v) for v in data["vertices"]]
    if not verts:
        raise ValueError("polytope needs at least one vertex")
    n = data.get("dim", len(verts[0]))
    if any(len(v) != n for v in verts):
        raise ValueError(f"every vertex must have {n} coordinates")
    return convex_hull(verts)


def polytope_to_json(C: VPolytope) -> str:
    return json.dumps(C.to_json())
