"""Exact integer linear algebra on free abelian groups Z^n.

Vectors are tuples of Python ints and matrices are tuples of row tuples, so
every value is immutable and arbitrary precision.  Rational intermediate
results use :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ValidationError

IntVector = tuple[int, ...]
IntMatrix = tuple[IntVector, ...]

MAX_RANK = 8


def _as_int(x: object) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        if isinstance(x, Fraction) and x.denominator == 1:
            return int(x)
        raise ValidationError(f"expected an integer coordinate, got {x!r}")
    return int(x)


def as_vector(v: Iterable[object]) -> IntVector:
    return tuple(_as_int(x) for x in v)


def as_matrix(rows: Iterable[Iterable[object]], ncols: int | None = None) -> IntMatrix:
    m = tuple(as_vector(r) for r in rows)
    widths = {len(r) for r in m}
    if ncols is not None:
        widths.add(ncols)
    if len(widths) > 1:
        raise ValidationError(f"ragged matrix: row lengths {sorted(widths)}")
    return m


def check_rank(n: int) -> None:
    if n < 0 or n > MAX_RANK:
        raise ValidationError(f"lattice rank {n} outside supported range 0..{MAX_RANK}")


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    if not m:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*m))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def pairing(v: Sequence[int], u: Sequence[int]) -> int:
    """The canonical pairing N x M -> Z, i.e. the exact dot product."""
    if len(v) != len(u):
        raise ValidationError(f"pairing of vectors of lengths {len(v)} and {len(u)}")
    return sum(a * b for a, b in zip(v, u))


def vadd(v: Sequence[int], w: Sequence[int]) -> IntVector:
    return tuple(a + b for a, b in zip(v, w))


def vsub(v: Sequence[int], w: Sequence[int]) -> IntVector:
    return tuple(a - b for a, b in zip(v, w))


def vscale(k: int, v: Sequence[int]) -> IntVector:
    return tuple(k * a for a in v)


def content(v: Sequence[int]) -> int:
    return math.gcd(*v) if v else 0


def primitive(v: Sequence[int]) -> IntVector:
    """Divide ``v`` by the gcd of its coordinates, keeping the direction."""
    g = content(v)
    if g == 0:
        raise ValidationError("zero vector has no primitive representative")
    return tuple(a // g for a in v)


def is_primitive(v: Sequence[int]) -> bool:
    return content(v) == 1


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Fraction-free Bareiss determinant of a square integer matrix."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValidationError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    pivots: list[int] = []
    r = 0
    for j in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][j] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][j]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][j] != 0:
                f = rows[i][j]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(j)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(m: Sequence[Sequence[int]]) -> int:
    if not m:
        return 0
    # fraction-free elimination; exact and much cheaper than Fraction rows
    rows = [list(r) for r in m]
    ncols = len(rows[0])
    r = 0
    for j in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][j]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        a = rows[r][j]
        for i in range(r + 1, len(rows)):
            b = rows[i][j]
            if b:
                rows[i] = [a * x - b * y for x, y in zip(rows[i], rows[r])]
                g = math.gcd(*rows[i])
                if g > 1:
                    rows[i] = [x // g for x in rows[i]]
        r += 1
        if r == len(rows):
            break
    return r


def nullspace(m: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Primitive integer vectors spanning {x : m x = 0} over Q."""
    rows, piv = _rref([[Fraction(x) for x in r] for r in m], ncols)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(piv):
            x[p] = -rows[i][f]
        den = math.lcm(*(q.denominator for q in x))
        basis.append(primitive([int(q * den) for q in x]))
    return tuple(basis)


def rational_coordinates(basis: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[Fraction, ...] | None:
    """Solve ``c . basis = v`` for rational ``c``; None if v is not in the span."""
    k = len(basis)
    n = len(v)
    # columns of the augmented system are the basis rows
    rows = [[Fraction(basis[i][j]) for i in range(k)] + [Fraction(v[j])] for j in range(n)]
    red, piv = _rref(rows, k + 1)
    if k in piv:
        return None
    c = [Fraction(0)] * k
    for i, p in enumerate(piv):
        c[p] = red[i][k]
    return tuple(c)


def rational_inverse(m: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(m)
    rows = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    red, piv = _rref(rows, n)
    if piv != list(range(n)):
        raise ValidationError("matrix is singular")
    return tuple(tuple(r[n:]) for r in red)


def unimodular_inverse(m: Sequence[Sequence[int]]) -> IntMatrix:
    inv = rational_inverse(m)
    if any(x.denominator != 1 for r in inv for x in r):
        raise ValidationError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in r) for r in inv)


def hermite_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``u . m = h``.  ``h`` is in row
    echelon form with positive pivots and entries above each pivot reduced into
    ``[0, pivot)``; zero rows sit at the bottom.
    """
    h = [list(r) for r in as_matrix(m, ncols)]
    rows = len(h)
    cols = len(h[0]) if h else (ncols or 0)
    u = [list(r) for r in identity(rows)]
    r = 0
    for j in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if h[i][j] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(h[i][j]), i))
            h[r], h[p] = h[p], h[r]
            u[r], u[p] = u[p], u[r]
            clear = True
            for i in range(r + 1, rows):
                if h[i][j]:
                    q = h[i][j] // h[r][j]
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    clear = clear and h[i][j] == 0
            if clear:
                break
        if h[r][j] == 0:
            continue
        if h[r][j] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = h[i][j] // h[r][j]
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return tuple(map(tuple, h)), tuple(map(tuple, u))


def smith_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``(d, l, r)`` with ``l . m . r = d``.

    ``l`` and ``r`` are unimodular, ``d`` is diagonal with nonnegative entries
    and each diagonal entry divides the next.
    """
    a = [list(x) for x in as_matrix(m, ncols)]
    rows = len(a)
    cols = len(a[0]) if a else (ncols or 0)
    left = [list(x) for x in identity(rows)]
    right = [list(x) for x in identity(cols)]

    def swap_cols(j: int, k: int) -> None:
        for row in a:
            row[j], row[k] = row[k], row[j]
        for row in right:
            row[j], row[k] = row[k], row[j]

    def add_col(dst: int, src: int, q: int) -> None:
        # column dst -= q * column src
        for row in a:
            row[dst] -= q * row[src]
        for row in right:
            row[dst] -= q * row[src]

    for t in range(min(rows, cols)):
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            a[t], a[pi] = a[pi], a[t]
            left[t], left[pi] = left[pi], left[t]
            swap_cols(t, pj)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    left[i] = [x - q * y for x, y in zip(left[i], left[t])]
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, a[t][j] // p)
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            left[t] = [x + y for x, y in zip(left[t], left[bad])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
    return tuple(map(tuple, a)), tuple(map(tuple, left)), tuple(map(tuple, right))


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of Z^n given by linearly independent generator rows in HNF."""

    ambient_rank: int
    basis: IntMatrix = field(default=())

    def __post_init__(self) -> None:
        check_rank(self.ambient_rank)

    @classmethod
    def from_generators(cls, generators: Iterable[Iterable[int]], ambient_rank: int) -> "Sublattice":
        gens = as_matrix(generators, ambient_rank)
        h, _ = hermite_normal_form(gens, ambient_rank)
        return cls(ambient_rank, tuple(r for r in h if any(r)))

    @classmethod
    def full(cls, n: int) -> "Sublattice":
        return cls(n, identity(n))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def index(self) -> int | None:
        """Index in Z^n, or None when the sublattice has lower rank (infinite index)."""
        if self.rank != self.ambient_rank:
            return None
        return abs(determinant(self.basis))

    def coordinates(self, v: Sequence[int]) -> tuple[int, ...] | None:
        c = rational_coordinates(self.basis, v)
        if c is None or any(x.denominator != 1 for x in c):
            return None
        return tuple(int(x) for x in c)

    def __contains__(self, v: object) -> bool:
        return self.coordinates(v) is not None  # type: ignore[arg-type]


def lattice_index(inner: Sublattice, outer: Sublattice) -> int:
    """The index ``[outer : inner]`` of nested full-rank lattices."""
    if inner.ambient_rank != outer.ambient_rank:
        raise ValidationError("lattices live in different ambient ranks")
    coords = []
    for row in inner.basis:
        c = outer.coordinates(row)
        if c is None:
            raise ValidationError("not a sublattice")
        coords.append(c)
    if inner.rank != inner.ambient_rank or outer.rank != outer.ambient_rank:
        raise ValidationError("infinite index")
    return abs(determinant(coords))


@dataclass(frozen=True)
class QuotientMap:
    """The surjection Z^n -> Z^(n-r) killing a saturated sublattice.

    ``matrix`` has n-r rows and acts on column vectors; ``section`` is an
    n x (n-r) integer matrix with ``matrix . section = I``.  ``kernel_basis``
    holds r rows forming a Z-basis of the kernel and ``kernel_coords`` is the
    n x r matrix sending a kernel vector (as a row) to its coordinates.
    """

    ambient_rank: int
    matrix: IntMatrix
    section: IntMatrix
    kernel_basis: IntMatrix
    kernel_coords: IntMatrix

    @property
    def target_rank(self) -> int:
        return len(self.matrix)

    def project(self, v: Sequence[int]) -> IntVector:
        return tuple(pairing(row, v) for row in self.matrix)

    def lift(self, w: Sequence[int]) -> IntVector:
        return tuple(pairing(row, w) for row in self.section)

    def kernel_coordinates(self, v: Sequence[int]) -> IntVector:
        """Coordinates of a kernel vector in ``kernel_basis``."""
        return tuple(sum(v[i] * self.kernel_coords[i][k] for i in range(self.ambient_rank))
                     for k in range(len(self.kernel_basis)))

    def from_kernel_coordinates(self, y: Sequence[int]) -> IntVector:
        out = [0] * self.ambient_rank
        for c, row in zip(y, self.kernel_basis):
            for i, x in enumerate(row):
                out[i] += c * x
        return tuple(out)


def quotient_map(n: int, n_tau: Sublattice | Iterable[Iterable[int]]) -> QuotientMap:
    """Projection of Z^n onto Z^n / saturation(n_tau), with a section."""
    gens = n_tau.basis if isinstance(n_tau, Sublattice) else as_matrix(n_tau, n)
    gens = tuple(g for g in gens if any(g))
    if not gens:
        eye = identity(n)
        return QuotientMap(n, eye, eye, (), tuple(() for _ in range(n)))
    d, _, right = smith_normal_form(gens, n)
    r = sum(1 for i in range(min(len(d), n)) if d[i][i] != 0)
    rinv = unimodular_inverse(right)
    proj = tuple(tuple(right[i][r + k] for i in range(n)) for k in range(n - r))
    section = tuple(tuple(rinv[r + k][i] for k in range(n - r)) for i in range(n))
    kernel = rinv[:r]
    kcoords = tuple(tuple(right[i][k] for k in range(r)) for i in range(n))
    return QuotientMap(n, proj, section, kernel, kcoords)


def saturation(sub: Sublattice) -> Sublattice:
    """N intersected with the real span of ``sub``."""
    q = quotient_map(sub.ambient_rank, sub)
    return Sublattice.from_generators(q.kernel_basis, sub.ambient_rank)
