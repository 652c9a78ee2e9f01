"""Lattice points of bounded cone slices, fundamental parallelepipeds and Hilbert bases."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .cone import Cone
from .errors import CapExceeded, ValidationError
from .lattice import (
    IntVector,
    hermite_normal_form,
    pairing,
    rank,
    rational_inverse,
    smith_normal_form,
    unimodular_inverse,
    vadd,
)

DEFAULT_CAP = 10**6


def default_cap() -> int:
    """Enumeration cap; the TORIC_NASH_CAP environment variable overrides it."""
    raw = os.environ.get("TORIC_NASH_CAP")
    if raw is None:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValidationError(f"TORIC_NASH_CAP must be an integer, got {raw!r}") from None
    if cap <= 0:
        raise ValidationError("TORIC_NASH_CAP must be positive")
    return cap


@dataclass(frozen=True)
class PointSet:
    """A sorted, deduplicated set of lattice points."""

    ambient_rank: int
    points: tuple[IntVector, ...]

    @classmethod
    def of(cls, points: Iterable[Sequence[int]], ambient_rank: int) -> "PointSet":
        return cls(ambient_rank, tuple(sorted({tuple(p) for p in points})))

    def __iter__(self) -> Iterator[IntVector]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, v: object) -> bool:
        return tuple(v) in set(self.points)  # type: ignore[arg-type]


def standard_bounds(c: Cone, multiplier: int = 1) -> dict[IntVector, int]:
    """Per-facet bounds ``multiplier * sum of <r, m_F>`` over the rays r."""
    return {m: multiplier * sum(pairing(r, m) for r in c.rays) for m in c.facets()}


def _iter_bounded(c: Cone, bounds: Mapping[IntVector, int], cap: int) -> Iterator[IntVector]:
    normals = c.facets()
    missing = [m for m in normals if m not in bounds]
    if missing:
        raise ValidationError(f"unbounded region: no bound for facet normals {missing}")
    if any(bounds[m] < 0 for m in normals):
        return
    n = c.ambient_rank
    # n independent facet normals give an injective map v -> (<v, m_i>) into a box
    chosen: list[IntVector] = []
    for m in normals:
        if rank(chosen + [m]) > len(chosen):
            chosen.append(m)
        if len(chosen) == n:
            break
    others = [m for m in normals if m not in chosen]
    # rows of h generate the image lattice {A v}; u maps them back: h_i = A u_i
    h, u = hermite_normal_form([tuple(m[j] for m in chosen) for j in range(n)])
    caps = [bounds[m] for m in chosen]
    visited = 0

    def rec(level: int, y: list[int], v: IntVector) -> Iterator[IntVector]:
        nonlocal visited
        if level == n:
            visited += 1
            if visited > cap:
                raise CapExceeded(f"enumeration visited more than {cap} lattice points", cap=cap)
            if all(0 <= pairing(v, m) <= bounds[m] for m in others):
                yield v
            return
        piv = h[level][level]
        # y[level] + k * piv must land in [0, caps[level]]
        lo = -(y[level] // piv)
        hi = (caps[level] - y[level]) // piv
        for k in range(lo, hi + 1):
            y2 = [a + k * b for a, b in zip(y, h[level])]
            v2 = vadd(v, tuple(k * x for x in u[level]))
            yield from rec(level + 1, y2, v2)

    yield from rec(0, [0] * n, tuple(0 for _ in range(n)))


def enumerate_in_bounds(c: Cone, bounds: Mapping[Sequence[int], int], cap: int | None = None) -> PointSet:
    """All v in the cone with ``<v, m_F> <= bounds[m_F]`` for every facet normal."""
    bnd = {tuple(k): int(b) for k, b in bounds.items()}
    pts = list(_iter_bounded(c, bnd, default_cap() if cap is None else cap))
    return PointSet.of(pts, c.ambient_rank)


def graded(c: Cone, points: Iterable[IntVector]) -> list[IntVector]:
    """Points ordered by the sum of their facet pairings, then lexicographically."""
    normals = c.facets()
    return sorted(points, key=lambda v: (sum(pairing(v, m) for m in normals), v))


def _half_open_points(c: Cone) -> list[tuple[IntVector, tuple[bool, ...]]]:
    """Lattice points of the half-open parallelepiped with flags for zero coefficients."""
    v = [list(r) for r in c.rays]
    n = c.ambient_rank
    d, _, right = smith_normal_form(v)
    rinv = unimodular_inverse(right)
    diag = [d[i][i] for i in range(n)]
    vinv = rational_inverse(v)
    out = []
    for y in itertools.product(*(range(k) for k in diag)):
        x = [sum(y[i] * rinv[i][j] for i in range(n)) for j in range(n)]
        lam = [sum(Fraction(x[i]) * vinv[i][j] for i in range(n)) for j in range(n)]
        frac = [q - (q.numerator // q.denominator) for q in lam]
        p = tuple(sum(frac[i] * v[i][j] for i in range(n)) for j in range(n))
        out.append((tuple(int(a) for a in p), tuple(f == 0 for f in frac)))
    return out


def parallelepiped_points(c: Cone, cap: int | None = None) -> PointSet:
    """Lattice points ``sum c_i v_i`` with ``0 <= c_i <= 1`` for a simplicial full-dimensional cone."""
    if not c.is_full_dimensional:
        raise ValidationError("parallelepiped_points: cone is not full-dimensional")
    if not c.is_simplicial():
        raise ValidationError("parallelepiped_points: cone is not simplicial")
    cap = default_cap() if cap is None else cap
    mult = c.multiplicity()
    if mult > cap:
        raise CapExceeded(f"multiplicity {mult} exceeds enumeration cap {cap}", cap=cap, attempted=mult)
    pts = set()
    for p, zero in _half_open_points(c):
        free = [r for r, z in zip(c.rays, zero) if z]
        for k in range(len(free) + 1):
            for sub in itertools.combinations(free, k):
                q = p
                for r in sub:
                    q = vadd(q, r)
                pts.add(q)
    return PointSet.of(pts, c.ambient_rank)


def hilbert_basis(c: Cone, cap: int | None = None) -> PointSet:
    """Minimal generating set of the monoid of lattice points in the cone.

    Candidates are the rays plus the parallelepiped points of each simplicial
    piece of a triangulation.  A candidate h is dropped when some other
    candidate a satisfies h - a in the cone: then h = a + (h - a) with both
    summands nonzero.  Every reducible h has such an a among the candidates,
    because a Hilbert-basis element lies below h in the cone order.
    """
    if c.dim == 0:
        return PointSet(c.ambient_rank, ())
    if not c.is_full_dimensional:
        local, _ = c.restrict_to_span()
        return PointSet.of((c.lift_local(p) for p in hilbert_basis(local, cap)), c.ambient_rank)
    cap = default_cap() if cap is None else cap
    pieces = c.triangulate()
    total = sum(p.multiplicity() for p in pieces)
    if total > cap:
        raise CapExceeded(f"Hilbert basis candidate count {total} exceeds cap {cap}", cap=cap, attempted=total)
    candidates = set(c.rays)
    for piece in pieces:
        for p, _ in _half_open_points(piece):
            if any(p):
                candidates.add(p)
    normals = c.facets()
    prof = {v: tuple(pairing(v, m) for m in normals) for v in candidates}
    basis = []
    for h in candidates:
        ph = prof[h]
        if not any(a != h and all(x >= y for x, y in zip(ph, prof[a])) for a in candidates):
            basis.append(h)
    return PointSet.of(basis, c.ambient_rank)

