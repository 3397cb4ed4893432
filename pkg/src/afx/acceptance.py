"""Seeded verification suites shared by the test-suite and ``afx verify``.

Each suite returns a SuiteResult; ``limit`` caps the number of random
instances (None runs the full count).
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .criticality import CriticalityClass, classify, degenerate_pair_test
from .extremals import (
    extremal_space,
    extremality_test,
    is_linear_on_active,
    local_af_extension,
    realize,
)
from .mixedvol import (
    SupportDifference,
    af_sides,
    mixed_volume,
    mixed_volume_interpolation,
    mixed_volume_rational,
    positivity,
    projection_check,
    projection_formula,
    verify_propeller,
)
from .polytope import (
    VPolytope,
    box,
    convex_hull,
    cube,
    minkowski_sum,
    segment,
)
from .ratgeo import Subspace, add, scale, unit
from .stanley import (
    Poset,
    exst_equivalence_audit,
    posets_up_to_iso,
    random_poset,
    rank_sequence,
    stanley_representation_check,
    trivial_extremal_test,
    worked_example,
)


@dataclass
class SuiteResult:
    name: str
    instances: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures and self.instances > 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"; first failure: {self.failures[0]}" if self.failures else ""
        return f"[{status}] {self.name}: {self.instances} instances, {self.seconds:.1f}s{extra}"


def _count(full: int, limit: int | None) -> int:
    return full if limit is None else max(1, min(full, limit))


# ---------------------------------------------------------------------------
# random bodies


def random_box(rng: random.Random, n: int, hi: int = 3) -> VPolytope:
    lo = [rng.randint(0, hi - 1) for _ in range(n)]
    up = [a + rng.randint(0, 2) for a in lo]
    return box(lo, up)


def random_simplex(rng: random.Random, n: int, hi: int = 3) -> VPolytope:
    return convex_hull([[rng.randint(0, hi) for _ in range(n)] for _ in range(n + 1)])


def random_polytope(rng: random.Random, n: int, k: int | None = None, hi: int = 3) -> VPolytope:
    k = k if k is not None else rng.randint(n + 1, n + 3)
    return convex_hull([[rng.randint(0, hi) for _ in range(n)] for _ in range(k)])


def random_fulldim(rng: random.Random, n: int, hi: int = 3) -> VPolytope:
    while True:
        C = random_polytope(rng, n, hi=hi)
        if C.dim == n:
            return C


def random_in_subspace(rng: random.Random, E: Subspace, k: int, hi: int = 2) -> VPolytope:
    pts = []
    for _ in range(k):
        p = tuple(Fraction(0) for _ in range(E.ambient_dim))
        for b in E.basis:
            p = add(p, scale(rng.randint(-hi, hi), b))
        pts.append(p)
    return convex_hull(pts)


def random_subspace(rng: random.Random, n: int, m: int) -> Subspace:
    while True:
        E = Subspace(n, [[rng.randint(-2, 2) for _ in range(n)] for _ in range(m)])
        if E.dim == m:
            return E


def random_polygon_in(rng: random.Random, E: Subspace) -> VPolytope:
    while True:
        C = random_in_subspace(rng, E, rng.randint(3, 5))
        if C.dim == E.dim:
            return C


# ---------------------------------------------------------------------------
# the worked critical example in R^4


def exdeg():
    C1 = cube(4)
    C2 = box((0, 0, 0, 0), (1, 1, 0, 0))
    M = segment((0, 0, 0, 0), (1, 0, 0, 0))
    N = segment((0, 0, 0, 0), (0, 1, 0, 0))
    return C1, C2, M, N


# ---------------------------------------------------------------------------
# suites


def suite_oracle(seed: int = 0, limit: int | None = None) -> SuiteResult:
    res = SuiteResult("1 mixed volume: polarization = interpolation oracle")
    rng = random.Random(seed)
    for t in range(_count(200, limit)):
        n = (2, 3, 4)[t % 3]
        bodies = [random_box(rng, n) if rng.random() < 0.5 else random_simplex(rng, n) for _ in range(n)]
        a = mixed_volume_rational(bodies)
        b = mixed_volume_interpolation(bodies, seed=t)
        res.instances += 1
        if a != b:
            res.failures.append(f"n={n} {bodies}: {a} != {b}")
    return res


def suite_af(seed: int = 0, limit: int | None = None) -> SuiteResult:
    res = SuiteResult("2 Alexandrov-Fenchel inequality, exact sign")
    rng = random.Random(seed + 1)
    for t in range(_count(200, limit)):
        n = 3 if t % 2 == 0 else 4
        K, L = random_polytope(rng, n), random_polytope(rng, n)
        ref = [random_polytope(rng, n) for _ in range(n - 2)]
        kl2, kkll = af_sides(K, L, ref)
        res.instances += 1
        if kl2 < kkll:
            res.failures.append(f"{K}, {L}, {ref}: {kl2} < {kkll}")
    return res


def positivity_family() -> list[VPolytope]:
    e = [unit(3, i) for i in range(3)]
    z = (0, 0, 0)
    fam = [segment(z, v) for v in e]
    fam.append(segment(z, (1, 1, 0)))
    fam.append(segment(z, (0, 1, 1)))
    fam += [box(z, (1, 1, 0)), box(z, (1, 0, 1)), box(z, (0, 1, 1))]
    fam.append(box(z, (2, 1, 1)))
    fam.append(convex_hull([z, (1, 1, 0), (0, 0, 1)]))
    fam.append(convex_hull([z, e[0], e[1]]))
    fam.append(convex_hull([(1, 0, 0), (0, 1, 0), (0, 0, 1)]))
    fam.append(convex_hull([z, e[0], e[1], e[2]]))
    fam.append(convex_hull([z]))
    return fam


def suite_positivity(seed: int = 0, limit: int | None = None) -> SuiteResult:
    res = SuiteResult("3 positivity: dimension condition <=> V > 0")
    fam = positivity_family()
    combos = list(itertools.combinations_with_replacement(range(len(fam)), 3))
    if limit is not None:
        combos = combos[:limit]
    for c in combos:
        bodies = [fam[i] for i in c]
        res.instances += 1
        if positivity(bodies) != (mixed_volume_rational(bodies) > 0):
            res.failures.append(str(c))
    return res


def suite_projection(seed: int = 0, limit: int | None = None) -> SuiteResult:
    res = SuiteResult("4 projection formulas (subspace and segment)")
    rng = random.Random(seed + 4)
    for t in range(_count(50, limit)):
        n = 3 if t % 2 == 0 else 4
        m = rng.randint(1, n - 1)
        E = random_subspace(rng, n, m)
        first = [random_in_subspace(rng, E, rng.randint(2, m + 2)) for _ in range(m)]
        rest = [random_polytope(rng, n) for _ in range(n - m)]
        lhs, rhs = projection_formula(E, first + rest)
        res.instances += 1
        if lhs != rhs:
            res.failures.append(f"subspace {E}: {lhs} != {rhs}")
    for t in range(_count(100, limit)):
        n = 3 if t % 2 == 0 else 4
        u = [0] * n
        while all(x == 0 for x in u):
            u = [rng.randint(-2, 2) for _ in range(n)]
        bodies = [random_polytope(rng, n) for _ in range(n - 1)]
        res.instances += 1
        if not projection_check(u, bodies):
            res.failures.append(f"segment u={u}")
    return res


def suite_exdeg(seed: int = 0, limit: int | None = None) -> SuiteResult:
    res = SuiteResult("5 worked critical example in R^4")
    C1, C2, M, N = exdeg()
    K, L = minkowski_sum(C1, M), minkowski_sum(C1, N)
    checks: list[tuple[str, Callable[[], bool]]] = []
    checks.append(("V(M,N,C1,C2) = 0", lambda: mixed_volume([M, N, C1, C2]) == 0))

    def equality():
        a, b = af_sides(K, L, [C1, C2])
        return a == b and a > 0

    checks.append(("AF equality for K=C1+M, L=C1+N", equality))
    rep = classify([C1, C2])
    checks.append(("classified critical with maximal set {2}",
                   lambda: rep.cls is CriticalityClass.CRITICAL and rep.maximal_sets == [frozenset({2})]))
    checks.append(("(M,N) is a degenerate pair", lambda: degenerate_pair_test([C1, C2], M, N).is_degenerate))
    space = extremal_space([C1, C2], seed=seed)
    checks.append(("dim X = 5 by kernel and by formula",
                   lambda: space.kernel_dim == 5 and space.formula_dim == 5))

    def decomposition():
        r = extremality_test([C1, C2], SupportDifference(K, L), space=space)
        return r.extremal and r.decomposition is not None and r.decomposition.nonzero_parts() == [1]

    checks.append(("h_K - h_L is extremal with a nonzero D_1 part", decomposition))
    for name, fn in checks:
        res.instances += 1
        if not fn():
            res.failures.append(name)
    return res


def supercritical_collections(seed: int, count: int) -> list[list[VPolytope]]:
    rng = random.Random(seed + 6)
    out = []
    while len(out) < count:
        n = 3 if len(out) % 2 == 0 else 4
        bodies = [random_polytope(rng, n, hi=2) for _ in range(n - 2)]
        if classify(bodies, n).cls is CriticalityClass.SUPERCRITICAL:
            out.append(bodies)
    return out


def suite_supercritical(seed: int = 0, limit: int | None = None) -> SuiteResult:
    res = SuiteResult("6 supercritical: dim X = n and every extremal is linear")
    cols = [[cube(3)]] + supercritical_collections(seed, _count(20, limit))
    for bodies in cols:
        n = bodies[0].ambient_dim
        sp = extremal_space(bodies, seed=seed)
        res.instances += 1
        if sp.kernel_dim != n:
            res.failures.append(f"dim X = {sp.kernel_dim} for {bodies}")
        elif not all(is_linear_on_active(sp, v) for v in sp.basis):
            res.failures.append(f"non-linear extremal for {bodies}")
    return res


def critical_collections(seed: int, count: int) -> list[list[VPolytope]]:
    """Critical but not supercritical: a polygon in a plane plus full bodies."""
    rng = random.Random(seed + 7)
    out = [[exdeg()[0], exdeg()[1]]]
    while len(out) < count:
        n = 3 if len(out) % 2 == 0 else 4
        E = Subspace(n, [unit(n, 0), unit(n, 1)]) if rng.random() < 0.5 else random_subspace(rng, n, 2)
        bodies = [random_polygon_in(rng, E)] + [random_fulldim(rng, n, hi=2) for _ in range(n - 3)]
        rng.shuffle(bodies)
        if classify(bodies, n).cls is CriticalityClass.CRITICAL:
            out.append(bodies)
    return out


def subcritical_collections(seed: int, count: int) -> list[list[VPolytope]]:
    rng = random.Random(seed + 8)
    sq = box((0, 0, 0, 0), (1, 1, 0, 0))
    out = [[sq, sq]]
    while len(out) < count:
        n = 4
        kind = rng.random()
        if kind < 0.5:
            bodies = [segment([0] * n, [rng.randint(-1, 2) for _ in range(n)]), random_fulldim(rng, n, hi=2)]
        else:
            E = random_subspace(rng, n, 2)
            bodies = [random_polygon_in(rng, E), random_polygon_in(rng, E)]
        if classify(bodies, n).cls is CriticalityClass.SUBCRITICAL:
            out.append(bodies)
    return out


def corpus(seed: int = 0, limit: int | None = None) -> list[list[VPolytope]]:
    return ([[cube(3)]] + supercritical_collections(seed, _count(6, limit))
            + critical_collections(seed, _count(8, limit)) + subcritical_collections(seed, _count(5, limit)))


def suite_dimension(seed: int = 0, limit: int | None = None) -> SuiteResult:
    res = SuiteResult("7 dimension formula = kernel dimension on the corpus")
    for bodies in corpus(seed, limit):
        sp = extremal_space(bodies, seed=seed)
        res.instances += 1
        if sp.kernel_dim != sp.formula_dim:
            res.failures.append(f"{sp.kernel_dim} != {sp.formula_dim} for {bodies}")
    return res


def suite_local_af(seed: int = 0, limit: int | None = None) -> SuiteResult:
    res = SuiteResult("8 local AF extension solves and the quadratic audit passes")
    cols = [[cube(3)]] + critical_collections(seed, _count(8, limit))
    for bodies in cols:
        sp = extremal_space(bodies, seed=seed)
        for r in range(1, len(bodies) + 1):
            for v in sp.basis:
                res.instances += 1
                try:
                    out = local_af_extension(bodies, r, sp.full_vector(v), graph=sp.graph)
                except Exception as e:  # noqa: BLE001 - reported as a failure
                    res.failures.append(f"{type(e).__name__}: {e}")
                    continue
                if not out.audit_passed:
                    res.failures.append(f"positive quadratic atom for {bodies}, r={r}")
    return res


def propeller_instances(seed: int, count: int) -> list[tuple[Subspace, list[VPolytope], int]]:
    rng = random.Random(seed + 9)
    C1, C2, _, _ = exdeg()
    E0 = Subspace(4, [unit(4, 0), unit(4, 1)])
    out = [(E0, [C2, C1, C1], 1)]
    while len(out) < count:
        n = 4 if len(out) % 3 else 3
        E = E0 if (n == 4 and rng.random() < 0.5) else random_subspace(rng, n, 2)
        first = random_polygon_in(rng, E)
        rest = [random_fulldim(rng, n, hi=2) for _ in range(n - 2)]
        out.append((E, [first] + rest, 1))
    return out


def suite_propeller(seed: int = 0, limit: int | None = None) -> SuiteResult:
    res = SuiteResult("9 propeller support structure and blade weights")
    for E, bodies, k in propeller_instances(seed, _count(12, limit)):
        rep = verify_propeller(E, bodies, k)
        res.instances += 1
        if not rep.passed:
            bad = [a for a in rep.atoms if not a.passed]
            res.failures.append(f"{bodies}: {bad[:1]} missing={rep.missing[:1]}")
    return res


def suite_stanley(seed: int = 0, limit: int | None = None) -> SuiteResult:
    res = SuiteResult("10 Stanley: log-concavity, trivial zeros, four-way equivalence")
    posets = []
    for size in range(1, 7):
        for below in posets_up_to_iso(size):
            for x in range(size):
                posets.append(Poset.from_masks(below, x))
    rng = random.Random(seed + 10)
    for t in range(_count(500, limit)):
        posets.append(random_poset(rng.choice((7, 8)), rng))
    if limit is not None:
        posets = posets[:limit] + posets[-_count(500, limit):]
    for P in posets:
        seq = rank_sequence(P)
        res.instances += 1
        if not seq.log_concave():
            res.failures.append(f"not log-concave: {P}")
        for i in range(1, P.n + 1):
            if trivial_extremal_test(P, i) != (seq[i] == 0):
                res.failures.append(f"trivial-zero mismatch at i={i}: {P}")
        audit = exst_equivalence_audit(P)
        if audit.disagreements:
            res.failures.append(f"conditions disagree at {audit.disagreements}: {P}")
    small = [Poset.from_masks(b, x) for size in range(2, 6) for b in posets_up_to_iso(size) for x in range(size)]
    if limit is not None:
        small = small[:limit]
    for P in small:
        res.instances += 1
        if not stanley_representation_check(P):
            res.failures.append(f"mixed-volume representation fails: {P}")
    P = worked_example()
    audit = exst_equivalence_audit(P)
    res.instances += 1
    if audit.counts != [0, 1, 1, 1, 0] or audit.equality_indices != [3]:
        res.failures.append(f"worked example gives {audit.counts}, equality at {audit.equality_indices}")
    return res


SUITES: list[Callable[..., SuiteResult]] = [
    suite_oracle,
    suite_af,
    suite_positivity,
    suite_projection,
    suite_exdeg,
    suite_supercritical,
    suite_dimension,
    suite_local_af,
    suite_propeller,
    suite_stanley,
]


def run_suite(fn: Callable[..., SuiteResult], seed: int = 0, limit: int | None = None) -> SuiteResult:
    t = time.perf_counter()
    try:
        res = fn(seed=seed, limit=limit)
    except Exception as e:  # noqa: BLE001 - a crash is a failed suite
        res = SuiteResult(fn.__name__)
        res.failures.append(f"{type(e).__name__}: {e}")
    res.seconds = time.perf_counter() - t
    return res


# keep the worked example's extension check reachable for demos
__all__ = ["SUITES", "SuiteResult", "run_suite", "realize"]
