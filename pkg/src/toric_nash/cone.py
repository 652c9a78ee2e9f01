"""Pointed rational polyhedral cones in a lattice N = Z^n.

A :class:`Cone` always holds its canonical form: primitive extreme rays,
sorted lexicographically.  Cones that do not span N are handled in the
coordinates of the saturated lattice of their span, so facet normals and
relative interiors are always taken relative to that span.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import ValidationError
from .lattice import (
    IntVector,
    QuotientMap,
    as_vector,
    check_rank,
    determinant,
    nullspace,
    pairing,
    primitive,
    quotient_map,
    rank,
    vadd,
)


def _local_facets(gens: Sequence[IntVector], d: int) -> tuple[IntVector, ...]:
    """Inequality normals of the cone spanned by ``gens`` in Z^d (full span).

    Exhaustive scan of (d-1)-subsets of generators; each hyperplane through a
    subset of rank d-1 is kept when all generators lie on one side of it.
    """
    if d == 0:
        return ()
    if d == 1:
        signs = {1 if g[0] > 0 else -1 for g in gens}
        return ((signs.pop(),),) if len(signs) == 1 else ()
    found: set[IntVector] = set()
    for subset in combinations(gens, d - 1):
        if rank(subset) != d - 1:
            continue
        (m,) = nullspace(subset, d)
        values = [pairing(g, m) for g in gens]
        if all(x >= 0 for x in values):
            found.add(m)
        elif all(x <= 0 for x in values):
            found.add(tuple(-a for a in m))
    return tuple(sorted(found))


@dataclass(frozen=True)
class Cone:
    """A strongly convex rational polyhedral cone in canonical form.

    Construct with any nonzero generators; the stored ``rays`` are the
    primitive extreme rays in lexicographic order.

    >>> Cone([(2, 0), (0, 3), (1, 1)]).rays
    ((0, 1), (1, 0))
    """

    rays: tuple[IntVector, ...]
    ambient_rank: int = field(default=-1)

    def __init__(self, generators: Iterable[Iterable[int]], ambient_rank: int | None = None) -> None:
        gens = [as_vector(g) for g in generators]
        if ambient_rank is None:
            if not gens:
                raise ValidationError("ambient rank required for a cone without generators")
            ambient_rank = len(gens[0])
        check_rank(ambient_rank)
        if any(len(g) != ambient_rank for g in gens):
            raise ValidationError(f"generator length differs from lattice rank {ambient_rank}")
        if any(not any(g) for g in gens):
            raise ValidationError("zero generator")
        gens = sorted({primitive(g) for g in gens})

        span = quotient_map(ambient_rank, gens) if gens else quotient_map(ambient_rank, ())
        d = ambient_rank - span.target_rank if gens else 0
        full = d == ambient_rank
        local = gens if full else [span.kernel_coordinates(g) for g in gens]
        facets = _local_facets(local, d)
        if d > 0 and rank(facets) != d:
            raise ValidationError("cone not strongly convex")
        if d >= 2:
            extreme = [g for g, y in zip(gens, local)
                       if rank([m for m in facets if pairing(y, m) == 0]) == d - 1]
        else:
            extreme = gens
        object.__setattr__(self, "rays", tuple(extreme))
        object.__setattr__(self, "ambient_rank", ambient_rank)
        object.__setattr__(self, "_span", span)
        object.__setattr__(self, "_dim", d)
        object.__setattr__(self, "_local_normals", facets)

    # -- basic structure -------------------------------------------------

    @property
    def dim(self) -> int:
        return self._dim  # type: ignore[attr-defined]

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_rank

    @property
    def span_map(self) -> QuotientMap:
        """Quotient map whose kernel is N intersected with the span of the cone."""
        return self._span  # type: ignore[attr-defined]

    @property
    def local_facets(self) -> tuple[IntVector, ...]:
        """Facet normals in the coordinates of the span lattice."""
        return self._local_normals  # type: ignore[attr-defined]

    def facets(self) -> tuple[IntVector, ...]:
        """Primitive inward facet normals (full-dimensional cones only)."""
        self._require_full("facets")
        return self.local_facets

    def _require_full(self, what: str) -> None:
        if not self.is_full_dimensional:
            raise ValidationError(
                f"{what}: cone is not full-dimensional; project to its span first "
                "(Cone.restrict_to_span or quotient_by_face)")

    def local(self, v: Sequence[int]) -> IntVector:
        if self.is_full_dimensional:
            return tuple(v)
        return self.span_map.kernel_coordinates(v)

    def in_span(self, v: Sequence[int]) -> bool:
        self._check_len(v)
        return self.is_full_dimensional or not any(self.span_map.project(v))

    def _check_len(self, v: Sequence[int]) -> None:
        if len(v) != self.ambient_rank:
            raise ValidationError(f"vector of length {len(v)} in a rank-{self.ambient_rank} lattice")

    def contains(self, v: Sequence[int]) -> bool:
        if not self.in_span(v):
            return False
        y = self.local(v)
        return all(pairing(y, m) >= 0 for m in self.local_facets)

    def relint_contains(self, v: Sequence[int]) -> bool:
        if not self.in_span(v):
            return False
        y = self.local(v)
        return all(pairing(y, m) > 0 for m in self.local_facets)

    __contains__ = contains

    def restrict_to_span(self) -> tuple["Cone", QuotientMap]:
        """The same cone as a full-dimensional cone in N intersected with its span.

        Returns the local cone and the quotient map whose kernel coordinates
        translate between the two presentations.
        """
        local = Cone([self.local(r) for r in self.rays], self.dim)
        return local, self.span_map

    def lift_local(self, y: Sequence[int]) -> IntVector:
        if self.is_full_dimensional:
            return tuple(y)
        return self.span_map.from_kernel_coordinates(y)

    # -- duality -----------------------------------------------------------

    def dual(self) -> "Cone":
        self._require_full("dual_cone")
        return Cone(self.local_facets, self.ambient_rank)

    # -- faces -------------------------------------------------------------

    @cached_property
    def _face_sets(self) -> tuple[frozenset[int], ...]:
        k = len(self.rays)
        if self.dim <= 1:
            return tuple({frozenset(), frozenset(range(k))})
        local = [self.local(r) for r in self.rays]
        facet_sets = [frozenset(i for i in range(k) if pairing(local[i], m) == 0)
                      for m in self.local_facets]
        faces = {frozenset(range(k))}
        frontier = list(faces)
        while frontier:
            nxt = []
            for f in frontier:
                for s in facet_sets:
                    g = f & s
                    if g not in faces:
                        faces.add(g)
                        nxt.append(g)
            frontier = nxt
        return tuple(faces)

    def face(self, ray_indices: Iterable[int]) -> "Face":
        idx = frozenset(ray_indices)
        if idx not in self._face_sets:
            raise ValidationError(f"rays {sorted(idx)} do not span a face of the cone")
        return self._make_face(idx)

    def face_from_rays(self, rays: Iterable[Sequence[int]]) -> "Face":
        pos = {r: i for i, r in enumerate(self.rays)}
        try:
            idx = [pos[primitive(as_vector(r))] for r in rays]
        except KeyError as exc:
            raise ValidationError(f"{exc.args[0]} is not a ray of the cone") from None
        return self.face(idx)

    def _make_face(self, idx: frozenset[int]) -> "Face":
        rays = tuple(self.rays[i] for i in sorted(idx))
        return Face(self, rays, rank(rays))

    @property
    def zero_face(self) -> "Face":
        return self._make_face(frozenset())

    @property
    def as_face(self) -> "Face":
        return self._make_face(frozenset(range(len(self.rays))))

    def faces(self) -> tuple["Face", ...]:
        """All faces, from the zero face up to the cone, by (dim, rays)."""
        out = [self._make_face(s) for s in self._face_sets]
        return tuple(sorted(out, key=lambda f: (f.dim, f.rays)))

    def face_lattice(self) -> "FaceLattice":
        faces = self.faces()
        covers = []
        for i, a in enumerate(faces):
            for j, b in enumerate(faces):
                if b.dim == a.dim + 1 and set(a.rays) <= set(b.rays):
                    covers.append((i, j))
        return FaceLattice(faces, tuple(covers))

    def face_of_point(self, v: Sequence[int]) -> "Face":
        """The unique face whose relative interior contains ``v``."""
        v = as_vector(v)
        if not self.contains(v):
            raise ValidationError(f"point outside cone: {list(v)}")
        y = self.local(v)
        if self.dim <= 1:
            return self.zero_face if not any(v) else self.as_face
        tight = [m for m in self.local_facets if pairing(y, m) == 0]
        idx = frozenset(i for i, r in enumerate(self.rays)
                        if all(pairing(self.local(r), m) == 0 for m in tight))
        return self._make_face(idx)

    # -- simpliciality and smoothness -------------------------------------

    def is_simplicial(self) -> bool:
        return len(self.rays) == self.dim

    def multiplicity(self) -> int:
        """Index of the ray-generated subgroup in N intersected with the span."""
        if not self.is_simplicial():
            raise ValidationError("multiplicity of a non-simplicial cone: triangulate first")
        return abs(determinant([self.local(r) for r in self.rays]))

    def is_smooth(self) -> bool:
        return self.is_simplicial() and self.multiplicity() == 1

    # -- constructions -----------------------------------------------------

    def quotient_by_face(self, face: "Face") -> "Cone":
        if face.parent != self:
            raise ValidationError("face does not belong to this cone")
        q = quotient_map(self.ambient_rank, face.rays)
        images = [q.project(r) for r in self.rays]
        return Cone([w for w in images if any(w)], q.target_rank)

    def triangulate(self) -> tuple["Cone", ...]:
        """Pulling triangulation using the lexicographic order of the rays."""
        self._require_full("triangulate")
        memo: dict[frozenset[int], list[frozenset[int]]] = {}
        face_dims = {s: rank([self.rays[i] for i in s]) for s in self._face_sets}

        def pull(face: frozenset[int]) -> list[frozenset[int]]:
            if face in memo:
                return memo[face]
            d = face_dims[face]
            if len(face) == d:
                out = [face]
            else:
                apex = min(face)  # rays are sorted, so the index order is lexicographic
                out = []
                for sub in self._face_sets:
                    if face_dims[sub] == d - 1 and sub < face and apex not in sub:
                        out.extend(s | {apex} for s in pull(sub))
            memo[face] = out
            return out

        pieces = pull(frozenset(range(len(self.rays))))
        cones = [Cone([self.rays[i] for i in sorted(s)], self.ambient_rank) for s in pieces]
        return tuple(sorted(cones, key=lambda c: c.rays))

    def interior_point(self) -> IntVector:
        """The sum of the rays, a lattice point of the relative interior."""
        total = tuple(0 for _ in range(self.ambient_rank))
        for r in self.rays:
            total = vadd(total, r)
        return total

    def __iter__(self) -> Iterator[IntVector]:
        return iter(self.rays)

    def __repr__(self) -> str:
        return f"Cone({[list(r) for r in self.rays]}, ambient_rank={self.ambient_rank})"


@dataclass(frozen=True)
class Face:
    parent: Cone
    rays: tuple[IntVector, ...]
    dim: int

    @cached_property
    def cone(self) -> Cone:
        return Cone(self.rays, self.parent.ambient_rank)

    @property
    def is_zero(self) -> bool:
        return not self.rays

    def ray_indices(self) -> tuple[int, ...]:
        pos = {r: i for i, r in enumerate(self.parent.rays)}
        return tuple(pos[r] for r in self.rays)

    def relint_contains(self, v: Sequence[int]) -> bool:
        return self.cone.relint_contains(v)

    def contains(self, v: Sequence[int]) -> bool:
        return self.cone.contains(v)

    def __repr__(self) -> str:
        return f"Face(rays={[list(r) for r in self.rays]}, dim={self.dim})"


@dataclass(frozen=True)
class FaceLattice:
    faces: tuple[Face, ...]
    covers: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.faces)


def canonicalize(generators: Iterable[Iterable[int]], ambient_rank: int | None = None) -> Cone:
    return Cone(generators, ambient_rank)


def dual_cone(c: Cone) -> Cone:
    return c.dual()


def orthant(n: int) -> Cone:
    return Cone([tuple(int(i == j) for j in range(n)) for i in range(n)], n)
