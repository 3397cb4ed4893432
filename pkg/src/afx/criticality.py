"""Criticality classes of reference collections and their structural data.

Index sets are reported 1-based (body i of the collection is index i), the
way collections are usually numbered in the geometric literature.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .mixedvol import mixed_volume, mixed_volume_in_subspace, project_body, sum_direction
from .polytope import VPolytope
from .ratgeo import ScaledRational, Subspace, sub


class CriticalityClass(str, Enum):
    NULL = "null"
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


IndexSet = frozenset


@dataclass
class CriticalityReport:
    cls: CriticalityClass
    eta: IndexSet
    L_eta: Subspace
    maximal_sets: list[IndexSet] = field(default_factory=list)
    L_j: list[Subspace] = field(default_factory=list)
    reduced: list[VPolytope] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "class": self.cls.value,
            "eta": sorted(self.eta),
            "L_eta_dim": self.L_eta.dim,
            "maximal_sets": [sorted(a) for a in self.maximal_sets],
            "L_j_dims": [L.dim for L in self.L_j],
        }


def _n(bodies: Sequence[VPolytope]) -> int:
    if not bodies:
        raise ValueError("empty collection")
    return bodies[0].ambient_dim


def span_of(bodies: Sequence[VPolytope], alpha, n: int) -> Subspace:
    """The linear space parallel to the affine hull of the sum over alpha (1-based)."""
    return sum_direction([bodies[i - 1] for i in alpha], n)


def _subsets(m: int):
    for k in range(1, m + 1):
        for c in itertools.combinations(range(1, m + 1), k):
            yield frozenset(c)


def margin(bodies: Sequence[VPolytope], n: int) -> int | None:
    """min over nonempty subsets of dim(sum) - |subset| (None for no bodies)."""
    out = None
    for a in _subsets(len(bodies)):
        d = span_of(bodies, a, n).dim - len(a)
        out = d if out is None else min(out, d)
    return out


def _class_of_margin(m: int | None) -> CriticalityClass:
    if m is None or m >= 2:
        return CriticalityClass.SUPERCRITICAL
    if m == 1:
        return CriticalityClass.CRITICAL
    if m == 0:
        return CriticalityClass.SUBCRITICAL
    return CriticalityClass.NULL


def _closed_sets(bodies: Sequence[VPolytope], n: int, excess: int) -> list[IndexSet]:
    return [a for a in _subsets(len(bodies)) if span_of(bodies, a, n).dim == len(a) + excess]


def critical_sets(bodies: Sequence[VPolytope], n: int | None = None) -> list[IndexSet]:
    """All alpha with dim(sum over alpha) = |alpha| + 1; collection must be critical."""
    n = n if n is not None else _n(bodies)
    m = margin(bodies, n)
    if m is not None and m < 1:
        raise ValueError("collection is not critical")
    return _closed_sets(bodies, n, 1)


def subcritical_sets(bodies: Sequence[VPolytope], n: int | None = None) -> list[IndexSet]:
    n = n if n is not None else _n(bodies)
    return _closed_sets(bodies, n, 0)


def maximal(sets: Sequence[IndexSet]) -> list[IndexSet]:
    out = [a for a in sets if not any(a < b for b in sets)]
    return sorted(set(out), key=lambda a: (min(a), sorted(a)))


def classify(bodies: Sequence[VPolytope], n: int | None = None) -> CriticalityReport:
    """Null / subcritical / critical / supercritical, with eta and maximal sets.

    For a subcritical collection, eta is the union of all subcritical sets and
    the maximal critical sets are those of the remaining bodies projected onto
    the orthogonal complement of the span of eta.
    """
    n = n if n is not None else _n(bodies)
    cls = _class_of_margin(margin(bodies, n))
    empty = Subspace(n, [])
    if cls is CriticalityClass.NULL:
        return CriticalityReport(cls, frozenset(), empty)
    eta: frozenset = frozenset()
    if cls is CriticalityClass.SUBCRITICAL:
        for a in subcritical_sets(bodies, n):
            eta |= a
    L_eta = span_of(bodies, eta, n)
    Lp = L_eta.orthogonal_complement()
    rest_idx = [i for i in range(1, len(bodies) + 1) if i not in eta]
    reduced = [project_body(Lp, bodies[i - 1]) for i in rest_idx]
    m = margin(reduced, n)
    if eta and m is not None and m < 1:
        raise AssertionError("reduced collection is not critical")
    sets = _closed_sets(reduced, n, 1) if reduced else []
    # relabel to the original indices
    sets = [frozenset(rest_idx[i - 1] for i in a) for a in sets]
    betas = maximal(sets)
    L_j = []
    for b in betas:
        L_j.append(sum_direction([project_body(Lp, bodies[i - 1]) for i in b], n))
    return CriticalityReport(cls, eta, L_eta, betas, L_j, reduced)


# ---------------------------------------------------------------------------
# degenerate pairs


def is_translate(M: VPolytope, N: VPolytope) -> bool:
    if len(M.vertices) != len(N.vertices):
        return False
    v = sub(N.vertices[0], M.vertices[0])
    return all(sub(b, a) == v for a, b in zip(M.vertices, N.vertices))


@dataclass
class DegeneratePairResult:
    is_degenerate: bool
    alpha: IndexSet | None = None
    v: tuple | None = None
    w: tuple | None = None
    scale: object | None = None  # V_L(M, P_alpha) / V_L(N, P_alpha)
    reason: str = ""


def degenerate_pair_test(bodies: Sequence[VPolytope], M: VPolytope, N: VPolytope) -> DegeneratePairResult:
    """Decide whether (M, N) is a degenerate pair for a critical collection.

    Requires M not a translate of N, V_n(M, N, bodies) = 0, translates of M and
    N inside L_alpha for a maximal critical set alpha, and equal normalizations
    V_{L_alpha}(M, P_alpha) = V_{L_alpha}(N, P_alpha).  ``scale`` reports the
    ratio of the two normalizations, i.e. the dilation of N that would match.
    """
    n = _n(bodies)
    m = margin(bodies, n)
    if m is not None and m < 1:
        raise ValueError("collection is not critical")
    if is_translate(M, N):
        return DegeneratePairResult(False, reason="M is a translate of N")
    if mixed_volume([M, N] + list(bodies)) != 0:
        return DegeneratePairResult(False, reason="V_n(M, N, P) > 0")
    for alpha in maximal(critical_sets(bodies, n)):
        L = span_of(bodies, alpha, n)
        if not (M.direction.is_subspace_of(L) and N.direction.is_subspace_of(L)):
            continue
        ref = [bodies[i - 1] for i in sorted(alpha)]
        vm = mixed_volume_in_subspace(L, [M] + ref)
        vn = mixed_volume_in_subspace(L, [N] + ref)
        ratio = vm / vn if vn else None
        v = tuple(-x for x in M.vertices[0])
        w = tuple(-x for x in N.vertices[0])
        # the translates M+v, N+w contain the origin and lie in L_alpha
        ok = vm == vn
        return DegeneratePairResult(ok, alpha, v, w, ratio,
                                    "" if ok else "normalizations differ")
    return DegeneratePairResult(False, reason="no maximal set contains both bodies")
