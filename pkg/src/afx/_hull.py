"""Exact double-description hull for full-dimensional integer point sets.

The facets of conv(points) in Z^m are the extreme rays (a, b) of the cone
{(a, b) : <a, p> - b <= 0 for every point p}.  Rays are kept as primitive
integer vectors and pairs are combined only when they are adjacent, decided
combinatorially from their sets of tight rows (bit masks).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from operator import mul
from typing import Sequence


def _prim(v: list[int]) -> tuple[int, ...]:
    g = reduce(math.gcd, (abs(a) for a in v), 0)
    if g > 1:
        return tuple(a // g for a in v)
    return tuple(v)


def _idot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(map(mul, a, b))


def _idet(m: list[list[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in m]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            p = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if p is None:
                return 0
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _cross(rows: list[Sequence[int]]) -> list[int]:
    """Generalized cross product of d-1 integer vectors in Z^d."""
    d = len(rows[0])
    return [(-1) ** i * _idet([[r[j] for j in range(d) if j != i] for r in rows]) for i in range(d)]


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _irank(rows: list[Sequence[int]], target: int) -> int:
    """Rank of integer rows (fraction-free), stopping once ``target`` is reached."""
    basis: list[tuple[list[int], int]] = []
    for r in rows:
        v = list(r)
        for b, c in basis:
            if v[c]:
                f, g = v[c], b[c]
                v = [g * x - f * y for x, y in zip(v, b)]
        c = next((j for j, x in enumerate(v) if x), None)
        if c is None:
            continue
        basis.append((v, c))
        if len(basis) == target:
            break
    return len(basis)


def extreme_rays(rows: list[tuple[int, ...]], start: list[int]) -> list[tuple[tuple[int, ...], int]]:
    """Extreme rays of {y : <row, y> <= 0 for all rows} with tight-row masks.

    ``start`` indexes D linearly independent rows, D being the vector length;
    the cone must be pointed.
    """
    dim = len(rows[0])
    base = [rows[i] for i in start]
    rays: list[tuple[tuple[int, ...], int]] = []
    for k in range(dim):
        others = [r for j, r in enumerate(base) if j != k]
        ray = _prim(_cross(others))
        if _idot(base[k], ray) > 0:
            ray = tuple(-a for a in ray)
        mask = 0
        for j, i in enumerate(start):
            if j != k:
                mask |= 1 << i
        rays.append((ray, mask))
    seen = set(start)
    need = dim - 2
    for i, row in enumerate(rows):
        if i in seen:
            continue
        bit = 1 << i
        pos, neg, keep = [], [], []
        for ray, mask in rays:
            s = sum(map(mul, row, ray))
            if s > 0:
                pos.append((ray, mask, s))
            elif s < 0:
                neg.append((ray, mask, s))
                keep.append((ray, mask))
            else:
                keep.append((ray, mask | bit))
        if not pos:
            rays = keep
            continue
        fresh = []
        for rp, mp, sp in pos:
            for rn, mn, sn in neg:
                common = mp & mn
                if need > 0 and common.bit_count() < need:
                    continue
                # adjacent iff the common tight rows have rank D - 2
                if need > 0 and _irank([rows[j] for j in _bits(common)], need) < need:
                    continue
                new = _prim([sp * b - sn * a for a, b in zip(rp, rn)])
                fresh.append((new, common | bit))
        rays = keep + fresh
    return rays


def _affinely_independent(points: list[tuple[int, ...]]) -> list[int]:
    """Indices of m+1 affinely independent points (greedy)."""
    chosen: list[int] = [0]
    basis: list[list[int]] = []
    pivots: list[int] = []
    p0 = points[0]
    m = len(p0)
    for i, p in enumerate(points[1:], start=1):
        v = [a - b for a, b in zip(p, p0)]
        for row, c in zip(basis, pivots):
            if v[c] != 0:
                f, g = v[c], row[c]
                v = list(_prim([g * a - f * b for a, b in zip(v, row)]))
        c = next((j for j, a in enumerate(v) if a != 0), None)
        if c is None:
            continue
        basis.append(v)
        pivots.append(c)
        chosen.append(i)
        if len(chosen) == m + 1:
            break
    return chosen


def _extreme_first(points: list[tuple[int, ...]]) -> list[int]:
    """Indices ordered so that known vertices (argmax of fixed directions) come first.

    Inserting vertices early keeps the intermediate hulls close to the final
    one, so most non-vertices are absorbed without creating rays.
    """
    m = len(points[0])
    if len(points) <= 4 * m:
        return list(range(len(points)))
    dirs = [tuple(1 if j == k else 0 for j in range(m)) for k in range(m)]
    dirs += [tuple(-a for a in d) for d in dirs]
    # a fixed pseudo-random family of integer directions
    x = 12345
    for _ in range(6 * m):
        d = []
        for _ in range(m):
            x = (1103515245 * x + 12345) % 2147483648
            d.append(x % 17 - 8)
        dirs.append(tuple(d))
    first: dict[int, None] = {}
    for d in dirs:
        first[max(range(len(points)), key=lambda i: (_idot(d, points[i]), points[i]))] = None
    return list(first) + [i for i in range(len(points)) if i not in first]


def facets_of_points(points: list[tuple[int, ...]]) -> list[tuple[tuple[int, ...], int, int]]:
    """Facets (a, b, mask) of the hull of full-dimensional integer points.

    Each facet is {<a, x> = b} with a primitive, <a, p> <= b for all points
    and ``mask`` the bit set of points lying on it.
    """
    order = _extreme_first(points)
    pts = [points[i] for i in order]
    rows = [tuple(p) + (-1,) for p in pts]
    start = _affinely_independent(pts)
    if len(start) != len(points[0]) + 1:
        raise ValueError("point set is not full-dimensional")
    out = []
    for ray, pmask in extreme_rays(rows, start):
        mask = 0
        for j, i in enumerate(order):
            if pmask >> j & 1:
                mask |= 1 << i
        a, b = ray[:-1], ray[-1]
        g = reduce(math.gcd, (abs(x) for x in a), 0)
        out.append((tuple(x // g for x in a), Fraction(b, g), mask))
    out.sort()
    return out
