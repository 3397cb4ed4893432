"""Background polytope, facet graph, Alexandrov system and the extremal space.

Coordinates.  A support vector stores zeta_i = f(n_i) for the primitive
facet normals n_i of the background polytope, i.e. |n_i| times the value at
the unit normal.  Row i of the Alexandrov system is evaluated in the chart of
the facet obtained by dropping a coordinate k with n_i[k] != 0.  For a chart
facet normal w of the facet, the pulled-back functional y (w with a zero
inserted at k) lies in span(n_i, n_j) for the neighbouring facet j, say
y = s n_i + t n_j with t > 0, and the chart support function of the face of
Q at w is s h_Q(n_i) + t h_Q(n_j).  Hence

    row_i . zeta = sum_j rho_ij (s_ij zeta_i + t_ij zeta_j)

is a positive multiple of the mixed volume of the facet functions, with
rho_ij the normal-scaled chart weight of the edge.  No angle, sine or
unit vector is ever formed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .criticality import CriticalityClass, CriticalityReport, classify, margin
from .errors import InvariantViolation
from .mixedvol import (
    SupportDifference,
    area_rho,
    mixed_area_measure,
    positivity,
    project_body,
    signed_area_measure,
    to_chart,
)
from .polytope import (
    VPolytope,
    cube,
    face_polytope,
    facet_normals,
    h_representation,
    minkowski_sum_all,
    support_value,
    vertices_of_inequalities,
)
from .ratgeo import (
    Subspace,
    Vector,
    dot,
    drop,
    gram,
    insert,
    inverse,
    is_zero,
    kernel_basis,
    mat_vec,
    primitive,
    rank,
    scale,
    solve,
    sub,
    vec,
)

MAX_ATTEMPTS = 32


@dataclass(frozen=True)
class EdgeData:
    """n_j = a * n_i + b * m with m a primitive vector in n_i-perp and b > 0."""

    m: tuple[int, ...]
    a: Fraction
    b: Fraction


@dataclass
class FacetGraph:
    bodies: list[VPolytope]
    background: VPolytope
    normals: list[tuple[int, ...]]
    offsets: list[Fraction]
    vertex_facets: dict[Vector, frozenset]
    adjacency: set[tuple[int, int]]
    edge_data: dict[tuple[int, int], EdgeData]
    weights: dict[tuple[int, int], Fraction]
    active_edges: set[tuple[int, int]]
    active_vertices: list[int]
    seed: int
    attempts: int
    _rows: dict = field(default_factory=dict, repr=False)

    @property
    def N(self) -> int:
        return len(self.normals)

    @property
    def n(self) -> int:
        return self.background.ambient_dim

    def neighbours(self, i: int) -> list[int]:
        return sorted(j for a, b in self.adjacency for j in ((b,) if a == i else (a,) if b == i else ()))

    def facet(self, i: int) -> VPolytope:
        return face_polytope(self.background, self.normals[i])


@dataclass
class SupportVector:
    values: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.values)


def _rand_offsets(rng: random.Random, N: int, attempt: int) -> list[Fraction]:
    den = 10 ** 6 * 2 ** (attempt + 8)
    return [Fraction(rng.randint(1, 10 ** 6), den) for _ in range(N)]


def _edge_data(ni: Sequence[int], nj: Sequence[int]) -> EdgeData:
    a = Fraction(dot(ni, nj), dot(ni, ni))
    rest = sub(nj, scale(a, ni))
    m = primitive(rest)
    k = next(i for i, x in enumerate(m) if x != 0)
    return EdgeData(m, a, rest[k] / m[k])


def build_background(bodies: Sequence[VPolytope], seed: int = 0,
                     max_attempts: int = MAX_ATTEMPTS) -> FacetGraph:
    """Simple polytope whose normal fan refines every body, with its facet graph.

    The facet inequalities of Q = [0,1]^n + sum of bodies are pushed outward by
    small generic seeded amounts.  The result is audited: every vertex must
    lie on exactly n facets, every facet of Q must survive, and each vertex's
    normal cone must sit inside a normal cone of Q.  A failed audit retries
    with the next seed and a smaller perturbation.
    """
    bodies = list(bodies)
    if not bodies:
        raise ValueError("empty reference collection needs an ambient dimension")
    n = bodies[0].ambient_dim
    Q = minkowski_sum_all([cube(n)] + bodies)
    H = h_representation(Q)
    A = [a for a, _ in H]
    b = [c for _, c in H]
    N = len(A)
    q_inc = [idx for _, _, idx in Q.chart_facets]  # same order as H
    for attempt in range(max_attempts):
        rng = random.Random(seed + attempt)
        delta = _rand_offsets(rng, N, attempt)
        b2 = [x + d for x, d in zip(b, delta)]
        verts = vertices_of_inequalities(A, b2)
        tight = {}
        ok = True
        for v in verts:
            T = frozenset(i for i in range(N) if dot(A[i], v) == b2[i])
            if len(T) != n:
                ok = False
                break
            common = frozenset.intersection(*(q_inc[i] for i in T))
            if not common:
                ok = False
                break
            tight[v] = T
        if ok:
            for i in range(N):
                pts = [v for v, T in tight.items() if i in T]
                if len(pts) < n or rank([sub(p, pts[0]) for p in pts[1:]]) != n - 1:
                    ok = False
                    break
        if ok:
            P = VPolytope(sorted(verts), _trusted=True)
            return _graph(bodies, P, [tuple(a) for a in A], b2, tight, seed + attempt, attempt + 1)
    raise InvariantViolation(f"no simple background polytope after {max_attempts} attempts")


def _graph(bodies, P, normals, offsets, tight, seed, attempts) -> FacetGraph:
    n = P.ambient_dim
    N = len(normals)
    members: list[list[Vector]] = [[] for _ in range(N)]
    for v, T in tight.items():
        for i in T:
            members[i].append(v)
    adjacency = set()
    edge_data = {}
    sets = [set(m) for m in members]
    for i in range(N):
        for j in range(i + 1, N):
            common = sorted(sets[i] & sets[j])
            if len(common) < n - 1:
                continue
            d = rank([sub(p, common[0]) for p in common[1:]]) if len(common) > 1 else 0
            if d == n - 2:
                adjacency.add((i, j))
                edge_data[(i, j)] = _edge_data(normals[i], normals[j])
                edge_data[(j, i)] = _edge_data(normals[j], normals[i])
    g = FacetGraph(list(bodies), P, normals, list(offsets), tight, adjacency, edge_data,
                   {}, set(), [], seed, attempts)
    rows = {i: _row(g, i, g.bodies) for i in range(N)}
    g._rows[None] = rows
    weights = {}
    for i, (_, w) in rows.items():
        weights.update(w)
    g.weights = weights
    active = set()
    for (i, j) in adjacency:
        by_weight = weights.get((i, j), 0) > 0
        if by_weight != (weights.get((j, i), 0) > 0):
            raise InvariantViolation(f"edge ({i},{j}) weight sign differs between its ends")
        if by_weight != _edge_positive(g, i, j):
            raise InvariantViolation(f"edge ({i},{j}) weight disagrees with the dimension test")
        if by_weight:
            active.add((i, j))
    g.active_edges = active
    g.active_vertices = sorted({i for e in active for i in e})
    return g


def _edge_positive(g: FacetGraph, i: int, j: int) -> bool:
    """Dimension test for the face mixed volume of the edge (i,j)."""
    n = g.n
    if not g.bodies:
        return True
    u = tuple(a + b for a, b in zip(g.normals[i], g.normals[j]))
    faces = [face_polytope(C, u) for C in g.bodies]
    H = Subspace(n, [g.normals[i], g.normals[j]]).orthogonal_complement()
    charts = [to_chart(H, F) for F in faces]
    return positivity(charts)


def _pullback_split(g: FacetGraph, i: int, y: Vector) -> tuple[int, Fraction, Fraction]:
    """Neighbour j and (s, t) with y = s n_i + t n_j, t > 0."""
    ni = g.normals[i]
    for j in g.neighbours(i):
        nj = g.normals[j]
        sol = solve([list(c) for c in zip(ni, nj)], y, 2)
        if sol is not None and sol[1] > 0:
            return j, sol[0], sol[1]
    raise InvariantViolation(f"chart normal {y} of facet {i} matches no neighbouring facet")


def _row(g: FacetGraph, i: int, bodies: Sequence[VPolytope]):
    """Sparse row i of the rational Alexandrov system for the given bodies."""
    ni = g.normals[i]
    k = next(c for c, x in enumerate(ni) if x != 0)
    facet = g.facet(i)
    chart_facet = VPolytope(sorted({drop(v, k) for v in facet.vertices}), _trusted=True)
    charts = []
    for C in bodies:
        F = face_polytope(C, ni)
        charts.append(VPolytope(sorted({drop(v, k) for v in F.vertices}), _trusted=True))
    row: dict[int, Fraction] = {}
    weights = {}
    for w in facet_normals(chart_facet):
        y = insert(tuple(Fraction(x) for x in w), k)
        j, s, t = _pullback_split(g, i, y)
        rho = area_rho(charts, w)
        weights[(i, j)] = rho
        if rho:
            row[i] = row.get(i, Fraction(0)) + rho * s
            row[j] = row.get(j, Fraction(0)) + rho * t
    return row, weights


def alexandrov_system(g: FacetGraph, r: int | None = None) -> list[list[Fraction]]:
    """Rational Alexandrov matrix; ``r`` (1-based) selects the variant with P in slot r.

    For K whose normal fan is refined by the background, (A h_K)_i equals
    (n-1) times the normal-scaled weight of S_{K, bodies} at n_i: each row
    pairs the facet's chart faces against the (n-1)-dimensional area weights.
    """
    key = r
    if key not in g._rows:
        if r is None:
            raise AssertionError("rows for the plain system are built with the graph")
        if not 1 <= r <= len(g.bodies):
            raise ValueError("r out of range")
        bodies = [g.background] + [C for s, C in enumerate(g.bodies, start=1) if s != r]
        g._rows[key] = {i: _row(g, i, bodies) for i in range(g.N)}
    rows = g._rows[key]
    out = []
    for i in range(g.N):
        row = [Fraction(0)] * g.N
        for j, x in rows[i][0].items():
            row[j] += x
        out.append(row)
    return out


def support_of_SB(g: FacetGraph, u: Sequence) -> bool:
    """Whether u/|u| lies in the support of S_{B, bodies}.

    Decided by the face-dimension condition and cross-checked against the
    union of active arcs cone(n_i, n_j).
    """
    u = vec(u)
    if is_zero(u):
        raise ValueError("u must be nonzero")
    n = g.n
    faces = [face_polytope(C, u) for C in g.bodies]
    by_dims = True
    for kk in range(1, len(faces) + 1):
        for sub_ in itertools.combinations(faces, kk):
            vs = [x for F in sub_ for x in F.direction.basis]
            if (rank(vs) if vs else 0) < kk:
                by_dims = False
                break
        if not by_dims:
            break
    by_arcs = False
    for (i, j) in g.active_edges:
        sol = solve([list(c) for c in zip(g.normals[i], g.normals[j])], u, 2)
        if sol is not None and sol[0] >= 0 and sol[1] >= 0:
            by_arcs = True
            break
    if by_dims != by_arcs:
        raise InvariantViolation(f"support tests disagree at {u}")
    return by_dims


# ---------------------------------------------------------------------------
# realization of support vectors


def realize(g: FacetGraph, zeta: Sequence) -> tuple[VPolytope, Fraction]:
    """Polytope Q strongly isomorphic to P with h_Q(n_i) = h_P(n_i) + eps * zeta_i.

    Each vertex of the simple polytope P moves along the solution of its n
    tight facet equations; eps is half the largest step keeping all other
    inequalities strict.
    """
    zeta = vec(zeta)
    N = g.N
    moves = {}
    limit = None
    for v, T in g.vertex_facets.items():
        T = sorted(T)
        d = solve([g.normals[i] for i in T], [zeta[i] for i in T], g.n)
        moves[v] = d
        for l in range(N):
            if l in T:
                continue
            rate = dot(g.normals[l], d) - zeta[l]
            if rate > 0:
                slack = g.offsets[l] - dot(g.normals[l], v)
                cap = slack / rate
                limit = cap if limit is None else min(limit, cap)
    eps = Fraction(1) if limit is None else min(Fraction(1), limit / 2)
    verts = sorted(tuple(a + eps * b for a, b in zip(v, d)) for v, d in moves.items())
    return VPolytope(verts, _trusted=True), eps


# ---------------------------------------------------------------------------
# extremal space


@dataclass
class Component:
    beta: frozenset
    omega: list[tuple[int, ...]]
    kappa: list[Fraction]  # pairing weights: integral of phi = sum phi(w) kappa(w)
    subspace: Subspace

    @property
    def dim_D(self) -> int:
        return len(self.omega) - len(self.beta) - 2


@dataclass
class ExtremalSpace:
    graph: FacetGraph
    report: CriticalityReport
    basis: list[tuple[Fraction, ...]]  # kernel vectors indexed by graph.active_vertices
    dim_L: int
    components: list[Component]

    @property
    def kernel_dim(self) -> int:
        return len(self.basis)

    @property
    def formula_dim(self) -> int:
        return self.dim_L + sum(c.dim_D for c in self.components)

    def full_vector(self, v: Sequence) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.graph.N
        for i, x in zip(self.graph.active_vertices, v):
            out[i] = x
        return tuple(out)

    def summary(self) -> str:
        parts = [f"{self.dim_L} (linear)"]
        parts += [f"{c.dim_D} (D_{j})" for j, c in enumerate(self.components, start=1)]
        return f"dim X = {self.kernel_dim} = " + " + ".join(parts)

    def to_json(self) -> dict:
        g = self.graph
        return {
            "class": self.report.cls.value,
            "dim_X": self.kernel_dim,
            "dim_L": self.dim_L,
            "components": [{"beta": sorted(c.beta), "omega": [list(w) for w in c.omega],
                            "dim_D": c.dim_D} for c in self.components],
            "active_normals": [list(g.normals[i]) for i in g.active_vertices],
            "basis": [[str(x) for x in v] for v in self.basis],
        }


def pairing_atoms(E: Subspace, bodies: Sequence[VPolytope]) -> tuple[list[tuple[int, ...]], list[Fraction]]:
    """Atoms of S_{bodies} inside E with rational pairing weights.

    Returns primitive normals w in E and kappa with
    integral of phi dS = c * sum phi(w) kappa(w) for every 1-homogeneous phi,
    c > 0 a constant depending only on E.
    """
    m = E.dim
    charts = [to_chart(E, C) for C in bodies]
    meas = mixed_area_measure(charts, m)
    b = list(E.basis)
    ginv = inverse(gram(b))
    omega, kappa = [], []
    for a in meas.atoms:
        coeffs = mat_vec(ginv, a.normal)
        y = [Fraction(0)] * E.ambient_dim
        for c, v in zip(coeffs, b):
            for t in range(len(y)):
                y[t] += c * v[t]
        w = primitive(y)
        k = next(t for t, x in enumerate(w) if x)
        mu = w[k] / y[k]
        omega.append(w)
        kappa.append(a.rho / mu)
    order = sorted(range(len(omega)), key=lambda t: omega[t])
    return [omega[t] for t in order], [kappa[t] for t in order]


def _components(report: CriticalityReport, bodies: Sequence[VPolytope], n: int) -> list[Component]:
    Lp = report.L_eta.orthogonal_complement()
    out = []
    for beta, Lj in zip(report.maximal_sets, report.L_j):
        proj = [project_body(Lp, bodies[i - 1]) for i in sorted(beta)]
        omega, kappa = pairing_atoms(Lj, proj)
        out.append(Component(beta, omega, kappa, Lj))
    return out


def extremal_space(bodies: Sequence[VPolytope], seed: int = 0,
                   graph: FacetGraph | None = None) -> ExtremalSpace:
    bodies = list(bodies)
    n = bodies[0].ambient_dim
    report = classify(bodies, n)
    if report.cls is CriticalityClass.NULL:
        raise ValueError("null collection: every pair of bodies attains equality")
    g = graph if graph is not None else build_background(bodies, seed)
    A = alexandrov_system(g)
    V = g.active_vertices
    sub_rows = [[A[i][j] for j in V] for i in V]
    basis = kernel_basis(sub_rows, len(V)) if V else []
    return ExtremalSpace(g, report, basis, n - len(report.eta), _components(report, bodies, n))


# ---------------------------------------------------------------------------
# extremality test and decomposition


@dataclass
class Decomposition:
    s: Vector
    parts: list[dict[tuple[int, ...], Fraction]]

    def nonzero_parts(self) -> list[int]:
        return [j for j, p in enumerate(self.parts, start=1) if any(x != 0 for x in p.values())]


@dataclass
class ExtremalityResult:
    extremal: bool
    residual_atoms: int
    decomposition: Decomposition | None = None


def decompose(space: ExtremalSpace, values: Sequence) -> Decomposition:
    """Split values on the active normals into a linear part and degenerate parts.

    Unknowns: s in L-perp and phi_j on Omega_j.  The value at an active normal
    x is <s, x> + sum_j lambda phi_j(w) where the projection of x to L_j is
    lambda w.  Side conditions: sum phi_j kappa_j = 0 and phi_j orthogonal to
    linear functions on L_j in the unweighted inner product over the active
    normals.  The solution is unique.
    """
    g = space.graph
    V = g.active_vertices
    n = g.n
    Lp = space.report.L_eta.orthogonal_complement()
    sb = list(Lp.basis)
    comps = space.components
    ncols = len(sb) + sum(len(c.omega) for c in comps)
    T = [[Fraction(0)] * ncols for _ in V]
    for r, i in enumerate(V):
        x = g.normals[i]
        for c, b in enumerate(sb):
            T[r][c] = dot(b, x)
    off = len(sb)
    col_of = []
    for c in comps:
        for r, i in enumerate(V):
            px = c.subspace.project(g.normals[i])
            if is_zero(px):
                continue
            hit = None
            for t, w in enumerate(c.omega):
                if rank([px, w]) == 1 and dot(px, w) > 0:
                    hit = t
                    break
            if hit is None:
                raise InvariantViolation(f"projection of active normal {g.normals[i]} misses every atom ray")
            w = c.omega[hit]
            k = next(q for q, y in enumerate(w) if y)
            T[r][off + hit] = px[k] / w[k]
        col_of.append(off)
        off += len(c.omega)
    rows = [list(r) for r in T]
    rhs = [vec([values[t]])[0] for t in range(len(V))]
    for c, start in zip(comps, col_of):
        row = [Fraction(0)] * ncols
        for t, kap in enumerate(c.kappa):
            row[start + t] = kap
        rows.append(row)
        rhs.append(Fraction(0))
        for v in c.subspace.basis:
            row = [Fraction(0)] * ncols
            for r in range(len(V)):
                lin = dot(v, g.normals[V[r]])
                for t in range(len(c.omega)):
                    row[start + t] += T[r][start + t] * lin
            rows.append(row)
            rhs.append(Fraction(0))
    if rank(rows) != ncols:
        raise InvariantViolation("decomposition is not unique")
    sol = solve(rows, rhs, ncols)
    if sol is None:
        raise InvariantViolation("function does not split into linear and degenerate parts")
    s = tuple(Fraction(0) for _ in range(n))
    for c, b in zip(sol[:len(sb)], sb):
        s = tuple(a + c * y for a, y in zip(s, b))
    parts = []
    for c, start in zip(comps, col_of):
        parts.append({w: sol[start + t] for t, w in enumerate(c.omega)})
    return Decomposition(s, parts)


def extremality_test(bodies: Sequence[VPolytope], f: SupportDifference,
                     space: ExtremalSpace | None = None, normals=None,
                     seed: int = 0) -> ExtremalityResult:
    """Whether S_{f, bodies} vanishes, with the unique decomposition when it does."""
    bodies = list(bodies)
    meas = signed_area_measure(f, bodies, normals=normals)
    if not meas.is_zero():
        return ExtremalityResult(False, len(meas.atoms))
    if margin(bodies, f.plus.ambient_dim) is not None and margin(bodies, f.plus.ambient_dim) < 0:
        return ExtremalityResult(True, 0)
    if space is None:
        space = extremal_space(bodies, seed)
    g = space.graph
    values = [f(g.normals[i]) for i in g.active_vertices]
    return ExtremalityResult(True, 0, decompose(space, values))


# ---------------------------------------------------------------------------
# local Alexandrov-Fenchel extension


class LocalAFError(InvariantViolation):
    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


@dataclass
class LocalAFResult:
    z: tuple[Fraction, ...]
    quadratic: dict[int, Fraction]  # normal index -> normal-scaled S_{g,g,...} weight

    @property
    def audit_passed(self) -> bool:
        return all(x <= 0 for x in self.quadratic.values())


def local_af_extension(bodies: Sequence[VPolytope], r: int, z: Sequence,
                       graph: FacetGraph | None = None, seed: int = 0) -> LocalAFResult:
    """Extend z in ker A to z' with (Abar z')_i = 0 off the active vertices.

    ``r`` is 1-based.  The result carries the sign audit of the quadratic
    measure S_{g,g, bodies without r} at every facet normal, where g is the
    realized support function difference of z'.
    """
    bodies = list(bodies)
    n = bodies[0].ambient_dim
    m = margin(bodies, n)
    if m is not None and m < 1:
        raise ValueError("collection is not critical")
    if not 1 <= r <= len(bodies):
        raise ValueError("r out of range")
    g = graph if graph is not None else build_background(bodies, seed)
    z = vec(z)
    if len(z) != g.N:
        raise ValueError(f"support vector must have {g.N} entries")
    A = alexandrov_system(g)
    if any(x != 0 for x in mat_vec(A, z)):
        raise ValueError("z is not in the kernel of the Alexandrov system")
    Abar = alexandrov_system(g, r)
    Vset = set(g.active_vertices)
    free = [i for i in range(g.N) if i not in Vset]
    zp = list(z)
    if free:
        rows = [[Abar[i][j] for j in free] for i in free]
        rhs = [-sum(Abar[i][j] * z[j] for j in g.active_vertices) for i in free]
        sol = solve(rows, rhs, len(free))
        if sol is None:
            raise LocalAFError("local extension system has no solution", residual=rhs)
        for i, x in zip(free, sol):
            zp[i] = x
    zp = tuple(zp)
    full = mat_vec(Abar, zp)
    bad = [i for i in free if full[i] != 0]
    if bad:
        raise LocalAFError("extension violates the inactive equations", residual=[full[i] for i in bad])
    return LocalAFResult(zp, quadratic_audit(g, r, zp))


def quadratic_audit(g: FacetGraph, r: int, zeta: Sequence) -> dict[int, Fraction]:
    """Normal-scaled S_{g,g, bodies without r}(n_i) for g = (h_Q - h_P)/eps."""
    Q, eps = realize(g, zeta)
    P = g.background
    rest = [C for s, C in enumerate(g.bodies, start=1) if s != r]
    # the P-P term depends only on (g, r)
    key = ("pp", r)
    if key not in g._rows:
        g._rows[key] = [area_rho([P, P] + rest, w) for w in g.normals]
    pp = g._rows[key]
    out = {}
    for i, w in enumerate(g.normals):
        qq = area_rho([Q, Q] + rest, w)
        qp = area_rho([Q, P] + rest, w)
        out[i] = (qq - 2 * qp + pp[i]) / (eps * eps)
    return out


def is_linear_on_active(space: ExtremalSpace, v: Sequence) -> bool:
    """Whether zeta_i = <s, n_i> on the active normals for some s."""
    g = space.graph
    rows = [list(g.normals[i]) for i in g.active_vertices]
    return solve(rows, v, g.n) is not None
