"""Posets with a distinguished element, rank sequences and order polytopes."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import InputError
from .mixedvol import mixed_volume_rational
from .polytope import VPolytope


class Poset:
    """Strict partial order on labelled elements with a distinguished element x.

    ``less[a]`` is the bit mask of elements strictly below a (transitive).
    Elements are indexed 0..n-1; the non-distinguished ones, in order, are
    y_1, ..., y_{n-1}.
    """

    def __init__(self, elements: Sequence[str], relations: Iterable[tuple[str, str]], x: str):
        elements = list(elements)
        if len(set(elements)) != len(elements):
            raise ValueError("duplicate element names")
        if x not in elements:
            raise ValueError(f"distinguished element {x!r} is not an element")
        self.elements = elements
        self.x_label = x
        idx = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        below = [0] * n
        covers = []
        for a, b in relations:
            if a not in idx or b not in idx:
                raise ValueError(f"unknown element in relation {a} < {b}")
            if a == b:
                raise ValueError(f"reflexive relation {a} < {a}")
            below[idx[b]] |= 1 << idx[a]
            covers.append((a, b))
        # transitive closure
        changed = True
        while changed:
            changed = False
            for i in range(n):
                m = below[i]
                acc = m
                for j in range(n):
                    if m >> j & 1:
                        acc |= below[j]
                if acc != m:
                    below[i] = acc
                    changed = True
        for i in range(n):
            if below[i] >> i & 1:
                raise ValueError("relation has a cycle")
        self.less = below
        self.covers = covers
        self.x = idx[x]
        self.n = n

    @classmethod
    def from_masks(cls, below: Sequence[int], x: int) -> "Poset":
        names = [f"e{i}" for i in range(len(below))]
        rel = [(names[j], names[i]) for i in range(len(below)) for j in range(len(below)) if below[i] >> j & 1]
        return cls(names, rel, names[x])

    def lt(self, a: int, b: int) -> bool:
        return bool(self.less[b] >> a & 1)

    def comparable(self, a: int, b: int) -> bool:
        return self.lt(a, b) or self.lt(b, a)

    def below(self, a: int) -> list[int]:
        return [j for j in range(self.n) if self.lt(j, a)]

    def above(self, a: int) -> list[int]:
        return [j for j in range(self.n) if self.lt(a, j)]

    @property
    def ys(self) -> list[int]:
        return [i for i in range(self.n) if i != self.x]

    def __repr__(self) -> str:
        rel = ", ".join(f"{self.elements[j]}<{self.elements[i]}" for i in range(self.n)
                        for j in range(self.n) if self.lt(j, i))
        return f"Poset(x={self.x_label}; {rel})"


def parse_poset(text: str) -> Poset:
    """First line: names, x marked with '*'.  Further lines: 'a < b'."""
    lines = text.splitlines()
    first = None
    for no, line in enumerate(lines, start=1):
        if line.strip() and not line.lstrip().startswith("#"):
            first = no
            break
    if first is None:
        raise InputError("empty poset file", 1, 1)
    names = []
    x = None
    for tok in lines[first - 1].split():
        if tok.startswith("*"):
            if x is not None:
                raise InputError("more than one distinguished element", first, lines[first - 1].index(tok) + 1)
            tok = tok[1:]
            x = tok
        if not tok:
            raise InputError("empty element name", first, 1)
        names.append(tok)
    if x is None:
        raise InputError("no element marked with '*'", first, 1)
    rel = []
    for no in range(first + 1, len(lines) + 1):
        line = lines[no - 1]
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("<")
        if len(parts) != 2:
            raise InputError("expected 'a < b'", no, 1)
        a, b = parts[0].strip(), parts[1].strip()
        for name, col in ((a, line.index(parts[0].strip() or "<") + 1), (b, line.index("<") + 2)):
            if name not in names:
                raise InputError(f"unknown element {name!r}", no, col)
        rel.append((a, b))
    try:
        return Poset(names, rel, x)
    except ValueError as e:
        raise InputError(str(e), first, 1) from None


# ---------------------------------------------------------------------------
# rank sequences


@dataclass
class RankSequence:
    counts: list[int]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def log_concave(self) -> bool:
        c = self.counts
        return all(c[i] * c[i] >= c[i - 1] * c[i + 1] for i in range(1, len(c) - 1))

    def __getitem__(self, i: int) -> int:
        """N_i for 1 <= i <= n."""
        return self.counts[i - 1]


def _downset_counts(P: Poset) -> tuple[dict[int, int], dict[int, int]]:
    """Linear extensions of each down-set, and of its complement."""
    n = P.n
    full = (1 << n) - 1

    @lru_cache(maxsize=None)
    def up(mask: int) -> int:
        # ways to list the elements of mask (a down-set) in order
        if mask == 0:
            return 1
        total = 0
        for a in range(n):
            if mask >> a & 1 and not any(mask >> b & 1 and P.lt(a, b) for b in range(n)):
                total += up(mask & ~(1 << a))
        return total

    @lru_cache(maxsize=None)
    def down(mask: int) -> int:
        # ways to list the elements outside mask, given mask is placed first
        if mask == full:
            return 1
        total = 0
        for a in range(n):
            if not mask >> a & 1 and (P.less[a] & ~mask) == 0:
                total += down(mask | 1 << a)
        return total

    return up, down


def rank_sequence(P: Poset) -> RankSequence:
    """N_i = number of linear extensions with x at rank i, by down-set recursion."""
    up, down = _downset_counts(P)
    n, x = P.n, P.x
    counts = [0] * n
    others = [i for i in range(n) if i != x]
    # down-sets D not containing x with every element below x in D
    for k in range(n):
        for combo in itertools.combinations(others, k):
            mask = sum(1 << a for a in combo)
            if P.less[x] & ~mask:
                continue
            if any(P.less[a] & ~mask for a in combo):
                continue
            counts[k] += up(mask) * down(mask | 1 << x)
    return RankSequence(counts)


def linear_extensions(P: Poset) -> Iterator[tuple[int, ...]]:
    """All linear extensions as sequences of element indices (rank 1 first)."""
    n = P.n
    order: list[int] = []

    def rec(mask: int):
        if len(order) == n:
            yield tuple(order)
            return
        for a in range(n):
            if not mask >> a & 1 and (P.less[a] & ~mask) == 0:
                order.append(a)
                yield from rec(mask | 1 << a)
                order.pop()

    yield from rec(0)


def _extensions_with_x_at(P: Poset, i: int) -> Iterator[tuple[int, ...]]:
    n, x = P.n, P.x
    order: list[int] = []

    def rec(mask: int):
        pos = len(order) + 1
        if pos > n:
            yield tuple(order)
            return
        cands = [x] if pos == i else [a for a in range(n) if a != x]
        for a in cands:
            if not mask >> a & 1 and (P.less[a] & ~mask) == 0:
                order.append(a)
                yield from rec(mask | 1 << a)
                order.pop()

    yield from rec(0)


# ---------------------------------------------------------------------------
# order polytopes


def order_filters(P: Poset, elems: Sequence[int]) -> list[frozenset]:
    """Up-sets of the induced order on ``elems``."""
    out = []
    for k in range(len(elems) + 1):
        for combo in itertools.combinations(elems, k):
            s = set(combo)
            if all(b in s for a in s for b in elems if P.lt(a, b)):
                out.append(frozenset(s))
    return out


def _indicator(P: Poset, s: Iterable[int]) -> tuple[int, ...]:
    s = set(s)
    return tuple(int(y in s) for y in P.ys)


def order_polytope(P: Poset, beta: Iterable[int]) -> VPolytope:
    """O_beta inside R^{n-1}: monotone points of [0,1]^beta, zero off beta."""
    beta = sorted(beta)
    verts = sorted({_indicator(P, f) for f in order_filters(P, beta)})
    return VPolytope([tuple(map(Fraction, v)) for v in verts], _trusted=True)


def order_polytopes_KL(P: Poset) -> tuple[VPolytope, VPolytope]:
    """K (t_j = 1 above x) and L (t_j = 0 below x) as vertex lists of filters."""
    ys = P.ys
    above = {a for a in ys if P.lt(P.x, a)}
    below = {a for a in ys if P.lt(a, P.x)}
    filters = order_filters(P, ys)
    K = sorted({_indicator(P, f) for f in filters if above <= f})
    L = sorted({_indicator(P, f) for f in filters if not (below & f)})
    mk = lambda vs: VPolytope([tuple(map(Fraction, v)) for v in vs], _trusted=True)
    return mk(K), mk(L)


def order_polytope_facet_count(P: Poset, beta: Sequence[int]) -> int:
    """Facets predicted by the minimal/maximal/cover description."""
    beta = list(beta)
    mins = [a for a in beta if not any(P.lt(b, a) for b in beta)]
    maxs = [a for a in beta if not any(P.lt(a, b) for b in beta)]
    cov = 0
    for a in beta:
        for b in beta:
            if P.lt(a, b) and not any(P.lt(a, c) and P.lt(c, b) for c in beta):
                cov += 1
    return len(mins) + len(maxs) + cov


def stanley_mixed_volumes(P: Poset) -> list:
    """(n-1)! V_{n-1}(K^{i-1}, L^{n-i}) for i = 1..n."""
    K, L = order_polytopes_KL(P)
    n = P.n
    return [math.factorial(n - 1) * mixed_volume_rational([K] * (i - 1) + [L] * (n - i))
            for i in range(1, n + 1)]


def stanley_representation_check(P: Poset) -> bool:
    if P.n < 2:
        raise ValueError("need at least two elements")
    N = rank_sequence(P).counts
    return all(a == b for a, b in zip(N, stanley_mixed_volumes(P)))


# ---------------------------------------------------------------------------
# extremal conditions


def trivial_extremal_test(P: Poset, i: int) -> bool:
    n = P.n
    if not 1 <= i <= n:
        raise ValueError("i out of range")
    return len(P.below(P.x)) > i - 1 or len(P.above(P.x)) > n - i


def extremal_condition_d(P: Poset, i: int, N: RankSequence | None = None) -> bool:
    n = P.n
    if not 2 <= i <= n - 1:
        raise ValueError("need 2 <= i <= n-1")
    N = N if N is not None else rank_sequence(P)
    if N[i] == 0:
        raise ValueError("N_i must be positive")
    return (all(len(P.below(y)) > i for y in P.above(P.x))
            and all(len(P.above(y)) > n - i + 1 for y in P.below(P.x)))


def condition_c(P: Poset, i: int) -> bool:
    """No extension with x at rank i puts an element comparable to x at rank i-1 or i+1."""
    for ext in _extensions_with_x_at(P, i):
        for j in (i - 2, i):
            if 0 <= j < P.n and P.comparable(ext[j], P.x):
                return False
    return True


@dataclass
class AuditRow:
    i: int
    a: bool
    b: bool
    c: bool
    d: bool

    @property
    def agree(self) -> bool:
        return self.a == self.b == self.c == self.d


@dataclass
class ExstAudit:
    counts: list[int]
    rows: list[AuditRow] = field(default_factory=list)

    @property
    def disagreements(self) -> list[int]:
        return [r.i for r in self.rows if not r.agree]

    @property
    def equality_indices(self) -> list[int]:
        return [r.i for r in self.rows if r.a]


def exst_equivalence_audit(P: Poset) -> ExstAudit:
    seq = rank_sequence(P)
    N = seq.counts
    out = ExstAudit(N)
    for i in range(2, P.n):
        if seq[i] == 0:
            continue
        a = seq[i] ** 2 == seq[i - 1] * seq[i + 1]
        b = seq[i] == seq[i - 1] == seq[i + 1]
        out.rows.append(AuditRow(i, a, b, condition_c(P, i), extremal_condition_d(P, i, seq)))
    return out


# ---------------------------------------------------------------------------
# poset families


def _canon_key(below: Sequence[int]) -> tuple:
    n = len(below)
    return tuple(sorted((bin(below[i]).count("1"), sum(1 for j in range(n) if below[j] >> i & 1))
                        for i in range(n)))


def posets_up_to_iso(n: int) -> list[list[int]]:
    """One below-mask list per isomorphism class of n-element posets.

    Grown by adjoining a new maximal element above a down-set; classes are
    separated by a degree invariant and then exact isomorphism tests.
    """
    import networkx as nx

    def graph(below):
        G = nx.DiGraph()
        G.add_nodes_from(range(len(below)))
        G.add_edges_from((j, i) for i in range(len(below)) for j in range(len(below)) if below[i] >> j & 1)
        return G

    level: list[list[int]] = [[]]
    for size in range(n):
        buckets: dict[tuple, list[tuple[list[int], object]]] = {}
        nxt = []
        for below in level:
            elems = list(range(size))
            for k in range(size + 1):
                for combo in itertools.combinations(elems, k):
                    mask = sum(1 << a for a in combo)
                    if any(below[a] & ~mask for a in combo):
                        continue
                    cand = below + [mask]
                    key = _canon_key(cand)
                    G = graph(cand)
                    bucket = buckets.setdefault(key, [])
                    if any(nx.is_isomorphic(G, H) for _, H in bucket):
                        continue
                    bucket.append((cand, G))
                    nxt.append(cand)
        level = nxt
    return level


def random_poset(size: int, rng: random.Random, p: float | None = None) -> Poset:
    """Random order: relations i < j sampled on a shuffled natural labelling."""
    p = rng.uniform(0.15, 0.5) if p is None else p
    perm = list(range(size))
    rng.shuffle(perm)
    below = [0] * size
    for a in range(size):
        for b in range(a + 1, size):
            if rng.random() < p:
                below[perm[b]] |= 1 << perm[a]
    return Poset.from_masks(below, rng.randrange(size))


def worked_example() -> Poset:
    """y1 < x < z1 and y1 < w1 < w2 < z1."""
    return Poset(["y1", "x", "w1", "w2", "z1"],
                 [("y1", "x"), ("x", "z1"), ("y1", "w1"), ("w1", "w2"), ("w2", "z1")], "x")
