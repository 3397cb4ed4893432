"""Exact rational scalars, square-root-scaled rationals and linear algebra.

Vectors are tuples of ``Fraction``; matrices are lists of such rows.  Nothing
in this module ever touches floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

Vector = tuple  # tuple[Fraction, ...]
Matrix = list  # list[Vector]

# primes up to this bound are tried when pulling square factors out of a radicand
TRIAL_BOUND = 10_000


def frac(x) -> Fraction:
    """Parse an int, Fraction or "p/q" string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as an exact rational")


def vec(xs: Iterable) -> Vector:
    return tuple(frac(x) for x in xs)


def fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# ScaledRational


def _split_square(n: int, bound: int = TRIAL_BOUND) -> tuple[int, int]:
    """Write n = s*s*r with r free of square factors below ``bound``."""
    s = 1
    if n == 0:
        return 0, 1
    root = math.isqrt(n)
    if root * root == n:
        return root, 1
    p = 2
    while p * p <= n and p <= bound:
        pp = p * p
        while n % pp == 0:
            n //= pp
            s *= p
        p += 1 if p == 2 else 2
    root = math.isqrt(n)
    if root * root == n:
        return s * root, 1
    return s, n


class ScaledRational:
    """The real number ``q * sqrt(g)`` with rational q and integer radicand g > 0.

    A rational radicand r/s is stored as r*s with the 1/s moved into q.  The
    radicand is square-free unless it has a repeated prime above the trial
    bound; comparisons square both sides so they stay correct either way.
    """

    __slots__ = ("q", "g")

    def __init__(self, q=0, g=1):
        q = frac(q)
        g = frac(g)
        if g <= 0:
            raise ValueError("radicand must be positive")
        if q == 0:
            self.q, self.g = Fraction(0), 1
            return
        num = g.numerator * g.denominator
        q = q / g.denominator
        s, r = _split_square(num)
        self.q = q * s
        self.g = r

    @classmethod
    def sqrt(cls, x) -> "ScaledRational":
        x = frac(x)
        if x < 0:
            raise ValueError("square root of a negative number")
        if x == 0:
            return cls(0)
        return cls(1, x)

    def is_rational(self) -> bool:
        return self.g == 1 or self.q == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.q

    def sign(self) -> int:
        return (self.q > 0) - (self.q < 0)

    def square(self) -> Fraction:
        return self.q * self.q * self.g

    def _coerce(self, other) -> "ScaledRational":
        if isinstance(other, ScaledRational):
            return other
        return ScaledRational(other)

    def __mul__(self, other) -> "ScaledRational":
        other = self._coerce(other)
        return ScaledRational(self.q * other.q, self.g * other.g)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ScaledRational":
        other = self._coerce(other)
        if other.q == 0:
            raise ZeroDivisionError("division by zero")
        # 1/(q sqrt g) = sqrt(g) / (q g)
        return self * ScaledRational(1 / (other.q * other.g), other.g)

    def __neg__(self) -> "ScaledRational":
        r = ScaledRational.__new__(ScaledRational)
        r.q, r.g = -self.q, self.g
        return r

    def _common(self, other: "ScaledRational") -> tuple[Fraction, Fraction, int]:
        if self.q == 0:
            return Fraction(0), other.q, other.g
        if other.q == 0:
            return self.q, Fraction(0), self.g
        if self.g == other.g:
            return self.q, other.q, self.g
        # unreduced radicands may still agree up to a rational square
        ratio = Fraction(other.g, self.g)
        a, b = math.isqrt(ratio.numerator), math.isqrt(ratio.denominator)
        if a * a == ratio.numerator and b * b == ratio.denominator:
            return self.q, other.q * Fraction(a, b), self.g
        raise ValueError(f"cannot add {self} and {other}: radicands differ")

    def __add__(self, other) -> "ScaledRational":
        other = self._coerce(other)
        a, b, g = self._common(other)
        return ScaledRational(a + b, g)

    __radd__ = __add__

    def __sub__(self, other) -> "ScaledRational":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "ScaledRational":
        return self._coerce(other) - self

    def _cmp(self, other) -> int:
        other = self._coerce(other)
        sa, sb = self.sign(), other.sign()
        if sa != sb:
            return (sa > sb) - (sa < sb)
        a2, b2 = self.square(), other.square()
        c = (a2 > b2) - (a2 < b2)
        return c if sa >= 0 else -c

    def __eq__(self, other) -> bool:
        if not isinstance(other, (ScaledRational, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __hash__(self) -> int:
        return hash((self.sign(), self.square()))

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __bool__(self) -> bool:
        return self.q != 0

    def __float__(self) -> float:
        return float(self.q) * math.sqrt(self.g)

    def __repr__(self) -> str:
        return f"ScaledRational({fmt_rational(self.q)!r}, {self.g})"

    def __str__(self) -> str:
        if self.is_rational():
            return fmt_rational(self.q)
        if self.q == 1:
            return f"√({self.g})"
        return f"{fmt_rational(self.q)}·√({self.g})"

    def to_json(self) -> dict:
        return {"q": fmt_rational(self.q), "g": str(self.g)}

    @classmethod
    def from_json(cls, d: dict) -> "ScaledRational":
        return cls(frac(d["q"]), frac(d.get("g", 1)))


# ---------------------------------------------------------------------------
# vectors


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, u: Sequence) -> Vector:
    return tuple(c * a for a in u)


def zero(n: int) -> Vector:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(int(k == i)) for k in range(n))


def is_zero(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def primitive(u: Sequence) -> tuple[int, ...]:
    """Positive multiple of u with coprime integer entries."""
    u = [frac(a) for a in u]
    if all(a == 0 for a in u):
        raise ValueError("zero vector has no primitive representative")
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (a.denominator for a in u), 1)
    ints = [int(a * den) for a in u]
    g = reduce(math.gcd, (abs(a) for a in ints))
    return tuple(a // g for a in ints)


def norm2(u: Sequence) -> Fraction:
    return dot(u, u)


def norm(u: Sequence) -> ScaledRational:
    return ScaledRational.sqrt(norm2(u))


def drop(u: Sequence, k: int) -> tuple:
    return tuple(u[:k]) + tuple(u[k + 1:])


def insert(u: Sequence, k: int, value=Fraction(0)) -> tuple:
    return tuple(u[:k]) + (value,) + tuple(u[k:])


# ---------------------------------------------------------------------------
# matrices


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[frac(a) for a in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [a / pv for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def kernel_basis(rows: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Basis of {x : Mx = 0}, one vector per free column (canonical)."""
    if ncols is None:
        if not rows:
            raise ValueError("column count needed for an empty matrix")
        ncols = len(rows[0])
    r, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(r, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def mat_vec(rows: Sequence[Sequence], x: Sequence) -> Vector:
    return tuple(dot(r, x) for r in rows)


def transpose(rows: Sequence[Sequence]) -> list[Vector]:
    return [tuple(c) for c in zip(*rows)]


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int | None = None) -> Vector | None:
    """One exact solution of Mx = rhs, or None if the system is inconsistent."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return zero(ncols)
    aug = [list(r) + [frac(b)] for r, b in zip(rows, rhs)]
    r, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(r, pivots):
        x[p] = row[ncols]
    return tuple(x)


def det(rows: Sequence[Sequence]) -> Fraction:
    m = [[frac(a) for a in r] for r in rows]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


def inverse(rows: Sequence[Sequence]) -> list[Vector]:
    n = len(rows)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(r) < n:
        raise ValueError("singular matrix")
    return [tuple(row[n:]) for row in r]


def gram(basis: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[dot(a, b) for b in basis] for a in basis]


def gram_sqrt(basis: Sequence[Sequence]) -> ScaledRational:
    """sqrt(det(B^T B)) for the matrix B whose columns are ``basis``."""
    if not basis:
        return ScaledRational(1)
    d = det(gram(basis))
    if d == 0:
        raise ValueError("basis is linearly dependent")
    return ScaledRational.sqrt(d)


# ---------------------------------------------------------------------------
# subspaces


def _independent_subset(vs: list[Vector], n: int) -> list[Vector]:
    """A maximal linearly independent subset, found fraction-free."""
    out: list[Vector] = []
    basis: list[tuple[list[int], int]] = []
    for v in vs:
        den = math.lcm(*(a.denominator for a in v))
        w = [int(a * den) for a in v]
        for b, c in basis:
            if w[c]:
                f, g = w[c], b[c]
                w = [g * x - f * y for x, y in zip(w, b)]
        c = next((j for j, x in enumerate(w) if x), None)
        if c is None:
            continue
        k = math.gcd(*w)
        basis.append(([x // k for x in w], c))
        out.append(v)
        if len(out) == n:
            break
    return out


class Subspace:
    """A linear subspace of Q^n stored by its reduced row echelon basis.

    The RREF basis doubles as a chart: the coordinates of a member x are its
    entries at the pivot columns.
    """

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        vs = [vec(v) for v in vectors]
        for v in vs:
            if len(v) != ambient_dim:
                raise ValueError("vector dimension does not match the ambient space")
        r, pivots = rref(_independent_subset(vs, ambient_dim)) if vs else ([], [])
        self.ambient_dim = ambient_dim
        self.basis: tuple[Vector, ...] = tuple(tuple(row) for row in r)
        self.pivots: tuple[int, ...] = tuple(pivots)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, [unit(n, i) for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, x: Sequence) -> bool:
        x = vec(x)
        return is_zero(sub(x, self.from_chart(self.chart(x))))

    def chart(self, x: Sequence) -> Vector:
        """Coordinates of x in the RREF basis (meaningful only for members)."""
        return tuple(frac(x[p]) for p in self.pivots)

    def from_chart(self, c: Sequence) -> Vector:
        out = zero(self.ambient_dim)
        for a, b in zip(c, self.basis):
            out = add(out, scale(a, b))
        return out

    def project(self, x: Sequence) -> Vector:
        return orthogonal_projection(self, x)

    def orthogonal_complement(self) -> "Subspace":
        if not self.basis:
            return Subspace.full(self.ambient_dim)
        return Subspace(self.ambient_dim, kernel_basis(list(self.basis), self.ambient_dim))

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        comp = list(self.orthogonal_complement().basis) + list(other.orthogonal_complement().basis)
        if not comp:
            return Subspace.full(self.ambient_dim)
        return Subspace(self.ambient_dim, kernel_basis(comp, self.ambient_dim))

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def gram_sqrt(self) -> ScaledRational:
        return gram_sqrt(self.basis)

    def dual_normal(self, w: Sequence) -> tuple[int, ...]:
        """Ambient vector in this subspace representing the chart covector w.

        The chart covector w acts on members by x -> <w, chart(x)>; the
        returned primitive vector y lies in the subspace and induces the same
        functional up to a positive factor.
        """
        b = list(self.basis)
        g = gram(b)
        coeffs = mat_vec(inverse(g), w)
        y = zero(self.ambient_dim)
        for c, v in zip(coeffs, b):
            y = add(y, scale(c, v))
        return primitive(y)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        rows = ", ".join("(" + ", ".join(fmt_rational(a) for a in b) + ")" for b in self.basis)
        return f"Subspace({self.ambient_dim}, [{rows}])"


def span(n: int, vectors: Iterable[Sequence]) -> Subspace:
    return Subspace(n, vectors)


def orthogonal_projection(E: Subspace, x: Sequence) -> Vector:
    """P_E x computed as B (B^T B)^{-1} B^T x."""
    x = vec(x)
    if len(x) != E.ambient_dim:
        raise ValueError("dimension mismatch")
    if E.dim == 0:
        return zero(E.ambient_dim)
    if E.dim == E.ambient_dim:
        return x
    b = list(E.basis)
    coeffs = mat_vec(inverse(gram(b)), [dot(v, x) for v in b])
    out = zero(E.ambient_dim)
    for c, v in zip(coeffs, b):
        out = add(out, scale(c, v))
    return out
