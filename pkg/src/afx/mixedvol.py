"""Mixed volumes and mixed area measures of rational polytopes.

Normal-scaled weights: for a primitive integer normal w the atom of a mixed
area measure at w/|w| has weight S = rho*|w| with rho rational.  Dropping a
coordinate k with w[k] != 0 maps the hyperplane w-perp onto R^{n-1} and
scales (n-1)-volumes by |w[k]|/|w|, so rho is the chart mixed volume of the
faces divided by |w[k]|.  Every identity below is checked on rho.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from ._hull import _idet
from .errors import InvariantViolation
from .polytope import (
    VPolytope,
    convex_hull,
    face_polytope,
    facet_normals,
    lebesgue_volume,
    minkowski_sum,
    minkowski_sum_all,
    point,
    pulling_triangulation,
    segment,
    support_value,
)
from .ratgeo import (
    ScaledRational,
    Subspace,
    Vector,
    dot,
    drop,
    fmt_rational,
    frac,
    norm,
    norm2,
    orthogonal_projection,
    primitive,
    rank,
    solve,
    sub,
    vec,
)


def _check_common_dim(bodies: Sequence[VPolytope], n: int | None = None) -> int:
    if not bodies:
        if n is None:
            raise ValueError("empty collection needs an ambient dimension")
        return n
    dims = {C.ambient_dim for C in bodies}
    if len(dims) != 1:
        raise ValueError("bodies live in different ambient dimensions")
    return dims.pop()


def _subset_sums(bodies: Sequence[VPolytope], n: int) -> dict[int, VPolytope]:
    """Minkowski sums of every subset, keyed by bit mask."""
    sums = {0: point((0,) * n)}
    for mask in range(1, 1 << len(bodies)):
        top = mask.bit_length() - 1
        rest = mask ^ (1 << top)
        sums[mask] = bodies[top] if rest == 0 else minkowski_sum(sums[rest], bodies[top])
    return sums


def mixed_volume_rational(bodies: Sequence[VPolytope]) -> Fraction:
    """V_n of n bodies in R^n by polarization (inclusion-exclusion over subsets)."""
    n = _check_common_dim(bodies, 0)
    if len(bodies) != n:
        raise ValueError(f"need {n} bodies in R^{n}, got {len(bodies)}")
    if n == 0:
        return Fraction(1)
    sums = _subset_sums(bodies, n)
    total = Fraction(0)
    for mask in range(1, 1 << n):
        k = mask.bit_count()
        total += (-1) ** (n - k) * lebesgue_volume(sums[mask])
    return total / math.factorial(n)


def mixed_volume(bodies: Sequence[VPolytope]) -> ScaledRational:
    """Mixed volume V_n(C_1, ..., C_n); rational for bodies in R^n."""
    return ScaledRational(mixed_volume_rational(bodies))


def mixed_volume_interpolation(bodies: Sequence[VPolytope], seed: int = 0) -> Fraction:
    """Independent oracle: read V_n off the volume polynomial.

    Vol(l_1 C_1 + ... + l_n C_n) is homogeneous of degree n in l; its values
    at enough integer points determine all coefficients, and the coefficient
    of l_1 ... l_n equals n! V_n(C_1, ..., C_n).

    All sums with positive l share one normal fan, so the vertices of the
    l = 1 sum are decomposed into one vertex per body once and a single
    pulling triangulation is re-evaluated at every sample point.
    """
    n = _check_common_dim(bodies, 0)
    if len(bodies) != n:
        raise ValueError(f"need {n} bodies in R^{n}, got {len(bodies)}")
    if n == 0:
        return Fraction(1)
    S = minkowski_sum_all(bodies)
    if S.dim < n:
        return Fraction(0)
    monomials = [e for e in itertools.product(range(n + 1), repeat=n) if sum(e) == n]
    rng = random.Random(seed)
    while True:
        pts = [tuple(rng.randint(1, 3 * n) for _ in range(n)) for _ in monomials]
        rows = [[math.prod(l ** a for l, a in zip(p, e)) for e in monomials] for p in pts]
        if rank(rows) == len(monomials):
            break
    den = math.lcm(*(x.denominator for C in bodies for v in C.vertices for x in v))
    ivert = [[tuple(int(x * den) for x in v) for v in C.vertices] for C in bodies]
    facets = S.chart_facets
    tuples = []
    for k, p in enumerate(S.vertices):
        u = [0] * n
        for a, _, idx in facets:
            if k in idx:
                u = [x + y for x, y in zip(u, a)]
        choice = []
        for C in bodies:
            vals = [dot(u, v) for v in C.vertices]
            top = max(vals)
            if vals.count(top) != 1:
                raise InvariantViolation("vertex of the sum is not a sum of vertices")
            choice.append(vals.index(top))
        if tuple(sum(C.vertices[i][c] for C, i in zip(bodies, choice)) for c in range(n)) != p:
            raise InvariantViolation("vertex decomposition does not add up")
        tuples.append(choice)
    masks = [sum(1 << i for i in idx) for _, _, idx in facets]
    simplices = pulling_triangulation(len(tuples), masks, n)
    values = []
    for lam in pts:
        P = [tuple(sum(l * ivert[j][i][c] for j, (l, i) in enumerate(zip(lam, ch))) for c in range(n))
             for ch in tuples]
        total = 0
        for sx in simplices:
            v0 = P[sx[0]]
            total += abs(_idet([[a - b for a, b in zip(P[j], v0)] for j in sx[1:]]))
        values.append(Fraction(total, math.factorial(n) * den ** n))
    coeffs = solve(rows, values)
    target = monomials.index((1,) * n)
    return coeffs[target] / math.factorial(n)


def _in_translate_of(E: Subspace, C: VPolytope) -> bool:
    p0 = C.vertices[0]
    return all(E.contains(sub(v, p0)) for v in C.vertices)


def to_chart(E: Subspace, C: VPolytope) -> VPolytope:
    """C (lying in a translate of E) in the RREF coordinates of E."""
    p0 = C.vertices[0]
    pts = sorted({E.chart(sub(v, p0)) for v in C.vertices})
    return VPolytope(pts, _trusted=True)


def mixed_volume_in_subspace(E: Subspace, bodies: Sequence[VPolytope]) -> ScaledRational:
    """Intrinsic mixed volume V_E of dim(E) bodies lying in translates of E."""
    if len(bodies) != E.dim:
        raise ValueError(f"need {E.dim} bodies for a {E.dim}-dimensional subspace")
    for C in bodies:
        if C.ambient_dim != E.ambient_dim:
            raise ValueError("dimension mismatch")
        if not _in_translate_of(E, C):
            raise ValueError("body does not lie in a translate of the subspace")
    if E.dim == 0:
        return ScaledRational(1)
    charts = [to_chart(E, C) for C in bodies]
    return ScaledRational(mixed_volume_rational(charts)) * E.gram_sqrt()


# ---------------------------------------------------------------------------
# mixed area measures


@dataclass(frozen=True)
class Atom:
    normal: tuple[int, ...]
    weight: ScaledRational
    rho: Fraction | None = None  # weight / |normal| when rational

    def to_json(self) -> dict:
        return {"normal": list(self.normal), "weight": self.weight.to_json()}


@dataclass
class MixedAreaMeasure:
    ambient_dim: int
    atoms: list[Atom] = field(default_factory=list)

    def support(self) -> list[tuple[int, ...]]:
        return [a.normal for a in self.atoms]

    def atom_at(self, w: Sequence) -> Atom | None:
        w = primitive(w)
        for a in self.atoms:
            if a.normal == w:
                return a
        return None

    def is_zero(self) -> bool:
        return not self.atoms

    def pair(self, K: VPolytope) -> Fraction:
        """(1/n) * integral of h_K against the measure, in normal-scaled form."""
        n = self.ambient_dim
        return sum((support_value(K, a.normal) * a.rho for a in self.atoms), Fraction(0)) / n

    def closure_defect(self) -> Vector:
        """sum of rho(w) * w; zero for every mixed area measure."""
        if any(a.rho is None for a in self.atoms):
            raise ValueError("irrational weights: use is_closed()")
        out = [Fraction(0)] * self.ambient_dim
        for a in self.atoms:
            for i, x in enumerate(a.normal):
                out[i] += a.rho * x
        return tuple(out)

    def is_closed(self) -> bool:
        """sum of S(u) u = 0 over the atoms, exactly.

        Terms are grouped by radicand class (square roots of distinct
        square-free classes are linearly independent over Q), so this works
        for intrinsic weights in irrational subspaces too.
        """
        for i in range(self.ambient_dim):
            groups: list[ScaledRational] = []
            for a in self.atoms:
                if a.normal[i] == 0:
                    continue
                term = a.weight / norm(a.normal) * a.normal[i]
                for k, g in enumerate(groups):
                    try:
                        groups[k] = g + term
                        break
                    except ValueError:
                        continue
                else:
                    groups.append(term)
            if any(g != 0 for g in groups):
                return False
        return True

    def to_json(self) -> dict:
        return {"atoms": [a.to_json() for a in self.atoms]}

    def table(self) -> str:
        lines = []
        for a in self.atoms:
            lines.append("(" + ", ".join(str(x) for x in a.normal) + ")  " + str(a.weight))
        return "\n".join(lines)


def measure_from_json(data: dict, n: int | None = None) -> MixedAreaMeasure:
    atoms = []
    for item in data["atoms"]:
        w = primitive(vec(item["normal"]))
        wt = ScaledRational.from_json(item["weight"])
        rho = wt / norm(w)
        atoms.append(Atom(w, wt, rho.as_fraction() if rho.is_rational() else None))
    dim = n if n is not None else (len(atoms[0].normal) if atoms else 0)
    return MixedAreaMeasure(dim, atoms)


def sum_dim(bodies: Iterable[VPolytope], n: int) -> int:
    """dim of the Minkowski sum, from the union of direction spaces."""
    vs: list[Vector] = []
    for C in bodies:
        vs.extend(C.direction.basis)
    return rank(vs) if vs else 0


def sum_direction(bodies: Iterable[VPolytope], n: int) -> Subspace:
    vs: list[Vector] = []
    for C in bodies:
        vs.extend(C.direction.basis)
    return Subspace(n, vs)


def candidate_normals(bodies: Sequence[VPolytope], n: int) -> list[tuple[int, ...]]:
    """Directions that can carry an atom of S_{bodies} (n-1 bodies in R^n)."""
    D = sum_direction(bodies, n)
    if D.dim == n:
        return facet_normals(minkowski_sum_all(list(bodies), n))
    if D.dim == n - 1:
        w = primitive(D.orthogonal_complement().basis[0])
        return sorted([w, tuple(-x for x in w)])
    return []


def area_rho(bodies: Sequence[VPolytope], w: Sequence[int]) -> Fraction:
    """Normal-scaled weight of S_{bodies}({w/|w|}) for n-1 bodies in R^n."""
    k = next(i for i, x in enumerate(w) if x != 0)
    faces = []
    for C in bodies:
        F = face_polytope(C, w)
        faces.append(VPolytope(sorted({drop(v, k) for v in F.vertices}), _trusted=True))
    return mixed_volume_rational(faces) / abs(w[k])


def mixed_area_measure(bodies: Sequence[VPolytope], n: int | None = None,
                       normals: Iterable[Sequence[int]] | None = None) -> MixedAreaMeasure:
    """Atomic measure S_{C_1,...,C_{n-1}} on outer normal directions.

    ``normals`` may supply a superset of the support (for instance the facet
    normals of a polytope whose normal fan refines every body) to skip the
    hull of the full Minkowski sum.
    """
    n = _check_common_dim(bodies, n)
    if len(bodies) != n - 1:
        raise ValueError(f"need {n - 1} bodies in R^{n}, got {len(bodies)}")
    cands = candidate_normals(bodies, n) if normals is None else [primitive(w) for w in normals]
    atoms = []
    for w in cands:
        rho = area_rho(bodies, w)
        if rho != 0:
            atoms.append(Atom(w, ScaledRational(rho) * norm(w), rho))
    return MixedAreaMeasure(n, atoms)


def mixed_area_measure_in_subspace(E: Subspace, bodies: Sequence[VPolytope]) -> MixedAreaMeasure:
    """S_{C_1..C_{m-1}} computed inside the m-dimensional subspace E.

    Atom normals are primitive vectors of E; weights are intrinsic
    (m-1)-volumes in E intersected with the normal's orthogonal complement.
    """
    m = E.dim
    if len(bodies) != m - 1:
        raise ValueError(f"need {m - 1} bodies in a {m}-dimensional subspace")
    for C in bodies:
        if not _in_translate_of(E, C):
            raise ValueError("body does not lie in a translate of the subspace")
    charts = [to_chart(E, C) for C in bodies]
    chart_measure = mixed_area_measure(charts, m)
    atoms = []
    for a in chart_measure.atoms:
        x = E.dual_normal(a.normal)
        faces = [face_polytope(C, x) for C in bodies]
        H = E.intersect(Subspace(E.ambient_dim, [x]).orthogonal_complement())
        wt = mixed_volume_in_subspace(H, faces)
        rho = wt / norm(x)
        atoms.append(Atom(x, wt, rho.as_fraction() if rho.is_rational() else None))
    atoms.sort(key=lambda a: a.normal)
    return MixedAreaMeasure(E.ambient_dim, atoms)


# ---------------------------------------------------------------------------
# formal differences


@dataclass(frozen=True)
class SupportDifference:
    """f = h_plus - scale * h_minus."""

    plus: VPolytope
    minus: VPolytope
    scale: Fraction = Fraction(1)

    def __call__(self, u: Sequence) -> Fraction:
        return support_value(self.plus, u) - self.scale * support_value(self.minus, u)


def signed_area_measure(f: SupportDifference, bodies: Sequence[VPolytope],
                        normals: Iterable[Sequence[int]] | None = None) -> MixedAreaMeasure:
    """S_{f, C_2, ..., C_{n-1}} by linearity in the first slot."""
    n = f.plus.ambient_dim
    if len(bodies) != n - 2:
        raise ValueError(f"need {n - 2} reference bodies in R^{n}")
    if normals is None:
        total = minkowski_sum_all([f.plus, f.minus] + list(bodies))
        D = total.direction
        if D.dim == n:
            cands = facet_normals(total)
        elif D.dim == n - 1:
            w = primitive(D.orthogonal_complement().basis[0])
            cands = [w, tuple(-x for x in w)]
        else:
            cands = []
    else:
        cands = [primitive(w) for w in normals]
    atoms = []
    for w in cands:
        rho = area_rho([f.plus] + list(bodies), w) - f.scale * area_rho([f.minus] + list(bodies), w)
        if rho != 0:
            atoms.append(Atom(w, ScaledRational(rho) * norm(w), rho))
    return MixedAreaMeasure(n, atoms)


# ---------------------------------------------------------------------------
# positivity and projection formulas


def positivity(bodies: Sequence[VPolytope]) -> bool:
    """dim(C_{i_1} + ... + C_{i_k}) >= k for every nonempty subset of indices."""
    n = _check_common_dim(bodies, 0)
    idx = range(len(bodies))
    for k in range(1, len(bodies) + 1):
        for sub_ in itertools.combinations(idx, k):
            if sum_dim([bodies[i] for i in sub_], n) < k:
                return False
    return True


def project_body(E: Subspace, C: VPolytope) -> VPolytope:
    return convex_hull(orthogonal_projection(E, v) for v in C.vertices)


def projection_formula(E: Subspace, bodies: Sequence[VPolytope]) -> tuple[ScaledRational, ScaledRational]:
    """Both sides of C(n,m) V_n(C) = V_E(C_1..C_m) V_{E-perp}(projections of the rest).

    The first m = dim E bodies must lie in translates of E.
    """
    n = _check_common_dim(bodies)
    m = E.dim
    if len(bodies) != n:
        raise ValueError(f"need {n} bodies")
    lhs = mixed_volume(bodies) * math.comb(n, m)
    Ep = E.orthogonal_complement()
    rhs = mixed_volume_in_subspace(E, bodies[:m]) * mixed_volume_in_subspace(
        Ep, [project_body(Ep, C) for C in bodies[m:]])
    return lhs, rhs


def projection_check(u: Sequence, bodies: Sequence[VPolytope]) -> bool:
    """n V_n([0,u], C_1..C_{n-1}) = |u| V_{n-1}(projections onto u-perp).

    The segment [0,u] has length |u|; for a unit vector this is the usual
    segment projection identity.
    """
    u = vec(u)
    if all(x == 0 for x in u):
        raise ValueError("u must be nonzero")
    n = len(u)
    if len(bodies) != n - 1:
        raise ValueError(f"need {n - 1} bodies")
    lhs = mixed_volume([segment([0] * n, u)] + list(bodies)) * n
    H = Subspace(n, [u]).orthogonal_complement()
    rhs = norm(u) * mixed_volume_in_subspace(H, [project_body(H, C) for C in bodies])
    return lhs == rhs


# ---------------------------------------------------------------------------
# propeller structure


@dataclass
class PropellerAtom:
    normal: tuple[int, ...]
    kind: str  # "shaft" or "blade"
    blade: tuple[int, ...] | None
    passed: bool
    detail: str = ""


@dataclass
class PropellerReport:
    atoms: list[PropellerAtom]
    blades: list[tuple[int, ...]]
    missing: list[tuple[int, ...]]

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.atoms) and not self.missing


def verify_propeller(E: Subspace, bodies: Sequence[VPolytope], k: int) -> PropellerReport:
    """Check the shaft-and-blades support structure of S_{C_1..C_{n-1}}.

    The first k bodies lie in translates of E with dim E = k + 1.  Every atom
    x must lie in E-perp or in a half-plane F_z^+ = {y in span(E-perp, z) :
    <z,y> > 0} for an atom z of S_{C_1..C_k} computed in E, and off E-perp
    C(n-1,k) S(x) = S_E(z) * S_{F_z}(projections of C_{k+1..n-1})(x).
    Conversely every atom of the blade measures inside F_z^+ must occur.
    """
    n = _check_common_dim(bodies)
    if len(bodies) != n - 1:
        raise ValueError(f"need {n - 1} bodies")
    if k < 1 or k > n - 2:
        raise ValueError("k must satisfy 1 <= k <= n-2")
    if E.dim != k + 1:
        raise ValueError("the subspace must have dimension k+1")
    for C in bodies[:k]:
        if not _in_translate_of(E, C):
            raise ValueError("the first k bodies must lie in translates of E")
    S = mixed_area_measure(bodies)
    SE = mixed_area_measure_in_subspace(E, bodies[:k])
    Ep = E.orthogonal_complement()
    blades = {}
    for z in SE.atoms:
        F = Ep + Subspace(n, [z.normal])
        rest = [project_body(F, C) for C in bodies[k:]]
        blades[z.normal] = (z, F, mixed_area_measure_in_subspace(F, rest))
    factor = math.comb(n - 1, k)
    out = []
    matched = set()
    for a in S.atoms:
        if Ep.contains(a.normal):
            out.append(PropellerAtom(a.normal, "shaft", None, True))
            continue
        px = orthogonal_projection(E, a.normal)
        hit = None
        for zn in blades:
            if rank([px, zn]) == 1 and dot(px, zn) > 0:
                hit = zn
                break
        if hit is None:
            out.append(PropellerAtom(a.normal, "blade", None, False, "not in any half-plane F_z^+"))
            continue
        z, F, SF = blades[hit]
        b = SF.atom_at(a.normal)
        if b is None:
            out.append(PropellerAtom(a.normal, "blade", hit, False, "no atom in the blade measure"))
            continue
        matched.add((hit, a.normal))
        ok = a.weight * factor == z.weight * b.weight
        out.append(PropellerAtom(a.normal, "blade", hit, ok,
                                 "" if ok else f"{a.weight}*{factor} != {z.weight}*{b.weight}"))
    missing = []
    for zn, (z, F, SF) in blades.items():
        for b in SF.atoms:
            if dot(b.normal, zn) > 0 and (zn, b.normal) not in matched:
                missing.append(b.normal)
    return PropellerReport(out, sorted(blades), missing)


def af_sides(K: VPolytope, L: VPolytope, ref: Sequence[VPolytope]) -> tuple[Fraction, Fraction]:
    """(V(K,L,P)^2, V(K,K,P) V(L,L,P)); the first is never smaller."""
    kl = mixed_volume_rational([K, L] + list(ref))
    kk = mixed_volume_rational([K, K] + list(ref))
    ll = mixed_volume_rational([L, L] + list(ref))
    return kl * kl, kk * ll
