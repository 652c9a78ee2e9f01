"""The order on lattice points of a cone and its minimal interior elements.

For a cone sigma, ``v <=_sigma w`` means ``w - v`` lies in sigma.  The minimal
elements of the interior lattice points label both the essential divisors
D_v over the closed orbit and the local Nash components, the closures of the
arc families T(v).  Over the orbit of a face tau the same computation runs in
the lattice N_tau = N intersected with the span of tau.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .cone import Cone, Face
from .errors import ToricNashError, ValidationError
from .lattice import IntVector, as_vector, is_primitive, pairing, primitive, vsub
from .lattice_points import enumerate_in_bounds, parallelepiped_points, standard_bounds
from .serialize import cone_to_dict

SMOOTH_POINT_MARKER = "smooth point: no essential divisors over a torus point"
CASE2_NOTE = "case2: the count is the same at every point of orb(tau), invariant or not"


@dataclass(frozen=True)
class DivisorLabel:
    """The invariant divisor D_v attached to the ray through a primitive v."""

    v: IntVector
    cone: Cone

    def __post_init__(self) -> None:
        v = as_vector(self.v)
        object.__setattr__(self, "v", v)
        if not any(v):
            raise ValidationError("divisor label must be nonzero")
        if not is_primitive(v):
            raise ValidationError(f"divisor labels are primitive; got {list(v)}, use {list(primitive(v))}")
        if not self.cone.contains(v):
            raise ValidationError(f"divisor label {list(v)} lies outside the cone")


@dataclass(frozen=True)
class ArcFamilyLabel:
    """Finite label of the arc family T(v): its order vector and base face."""

    v: IntVector
    base_face: Face

    def __post_init__(self) -> None:
        if not self.base_face.relint_contains(self.v):
            raise ValidationError(f"{list(self.v)} is not in the relative interior of its base face")

    def to_dict(self) -> dict:
        return {"v": list(self.v), "base_face_rays": [list(r) for r in self.base_face.rays]}


@dataclass(frozen=True)
class EssentialSet:
    cone: Cone
    face: Face
    minimal_points: tuple[IntVector, ...]
    labels: tuple[DivisorLabel, ...]
    marker: str | None = None
    case2_note: str | None = None
    bound_escalated: bool = False

    def __len__(self) -> int:
        return len(self.minimal_points)

    @property
    def divisors(self) -> tuple[IntVector, ...]:
        return tuple(d.v for d in self.labels)

    def to_dict(self) -> dict:
        out = {
            "cone": cone_to_dict(self.cone),
            "face_rays": [list(r) for r in self.face.rays],
            "minimal_points": [list(v) for v in self.minimal_points],
            "divisors": [list(v) for v in self.divisors],
        }
        if self.case2_note:
            out["case2_note"] = self.case2_note
        if self.marker:
            out["marker"] = self.marker
        if self.bound_escalated:
            out["bound_escalated"] = True
        return out


@dataclass(frozen=True)
class NashComponents:
    """Local Nash components presented as closures of arc families."""

    cone: Cone
    face: Face
    components: tuple[ArcFamilyLabel, ...]
    marker: str | None = None
    case2_note: str | None = None

    def __len__(self) -> int:
        return len(self.components)

    def to_dict(self) -> dict:
        out = {
            "cone": cone_to_dict(self.cone),
            "face_rays": [list(r) for r in self.face.rays],
            "components": [c.to_dict() for c in self.components],
        }
        if self.case2_note:
            out["case2_note"] = self.case2_note
        if self.marker:
            out["marker"] = self.marker
        return out


@dataclass(frozen=True)
class ArcPoset:
    """Hasse diagram of arc-family labels under the cone order.

    ``order`` lists every strict relation ``(i, j)`` meaning
    ``nodes[i].v <=_sigma nodes[j].v``; ``covers`` keeps only the covering ones.
    """

    nodes: tuple[ArcFamilyLabel, ...]
    order: tuple[tuple[int, int], ...]
    covers: tuple[tuple[int, int], ...]

    def to_dict(self) -> dict:
        return {
            "nodes": [n.to_dict() for n in self.nodes],
            "order": [list(p) for p in self.order],
            "covers": [list(p) for p in self.covers],
        }


def leq_sigma(c: Cone, v: Sequence[int], w: Sequence[int]) -> bool:
    """``v <=_sigma w``, i.e. ``w - v`` lies in the cone."""
    v, w = as_vector(v), as_vector(w)
    for p in (v, w):
        if not c.contains(p):
            raise ValidationError(f"{list(p)} is not a lattice point of the cone")
    return c.contains(vsub(w, v))


def _minimal_interior(c: Cone, candidates: Iterable[IntVector]) -> list[IntVector]:
    """Minimal interior points among ``candidates``.

    The candidate set must be downward closed for interior points: any interior
    w with v - w in the cone must be a candidate whenever v is.  Points are
    scanned by increasing total facet pairing, so a nonminimal v always has
    some already accepted minimal m with v - m in the cone.
    """
    normals = c.facets()
    prof = {}
    for v in candidates:
        p = tuple(pairing(v, m) for m in normals)
        if all(x > 0 for x in p):
            prof[v] = p
    order = sorted(prof, key=lambda v: (sum(prof[v]), v))
    minimal: list[IntVector] = []
    for v in order:
        pv = prof[v]
        if not any(all(a >= b for a, b in zip(pv, prof[m])) for m in minimal):
            minimal.append(v)
    return sorted(minimal)


def minimal_points_full(c: Cone, cap: int | None = None) -> tuple[list[IntVector], bool]:
    """Minimal interior points of a full-dimensional cone and an escalation flag."""
    if c.ambient_rank == 0 or not c.is_full_dimensional:
        raise ValidationError("minimal_interior_elements needs a full-dimensional cone of positive rank")
    if c.is_simplicial():
        # a minimal v has every barycentric coordinate <= 1, otherwise v - v_i is
        # interior and below v; witnesses below v inherit the bound
        return _minimal_interior(c, parallelepiped_points(c, cap)), False
    # Every minimal v lies in the closed parallelepiped of some simplex of a
    # triangulation, so <v, m_F> never exceeds the sum over all rays; the
    # doubled bound re-checks that claim on each call.
    first = _minimal_interior(c, enumerate_in_bounds(c, standard_bounds(c, 1), cap))
    second = _minimal_interior(c, enumerate_in_bounds(c, standard_bounds(c, 2), cap))
    if first == second:
        return first, False
    fourth = _minimal_interior(c, enumerate_in_bounds(c, standard_bounds(c, 4), cap))
    if fourth != second:
        raise ToricNashError("minimal interior elements are unstable under box doubling up to 4x bound")
    return fourth, True


def minimal_interior_elements(c: Cone, cap: int | None = None) -> EssentialSet:
    """Minimal elements of the interior lattice points of a full-dimensional cone."""
    pts, escalated = minimal_points_full(c, cap)
    labels = tuple(DivisorLabel(v, c) for v in pts)
    return EssentialSet(c, c.as_face, tuple(pts), labels, bound_escalated=escalated)


def _resolve_face(c: Cone, t: Face | Sequence[int] | None) -> Face:
    if t is None:
        return c.as_face
    if isinstance(t, Face):
        if t.parent != c:
            raise ValidationError("face does not belong to the given cone")
        return t
    return c.face(t)


def essential_divisors(c: Cone, t: Face | Sequence[int] | None = None, cap: int | None = None) -> EssentialSet:
    """Essential divisors over the invariant point of orb(t).

    ``t`` is a face of ``c`` (or a list of ray indices, default the whole cone).
    The face is treated as a full-dimensional cone in N_tau and its minimal
    interior elements are mapped back to N.
    """
    face = _resolve_face(c, t)
    if face.is_zero:
        return EssentialSet(c, face, (), (), marker=SMOOTH_POINT_MARKER)
    local, _ = face.cone.restrict_to_span()
    pts, escalated = minimal_points_full(local, cap)
    lifted = tuple(sorted(face.cone.lift_local(y) for y in pts))
    labels = tuple(DivisorLabel(v, c) for v in lifted)
    note = CASE2_NOTE if face.dim < c.ambient_rank else None
    return EssentialSet(c, face, lifted, labels, case2_note=note, bound_escalated=escalated)


def local_nash_components(c: Cone, t: Face | Sequence[int] | None = None, cap: int | None = None) -> NashComponents:
    """Local Nash components over orb(t), one closure of T(v) per minimal v."""
    es = essential_divisors(c, t, cap)
    comps = tuple(ArcFamilyLabel(v, c.face_of_point(v)) for v in es.minimal_points)
    return NashComponents(c, es.face, comps, marker=es.marker, case2_note=es.case2_note)


def arc_poset(c: Cone, points: Iterable[Sequence[int]]) -> ArcPoset:
    """Order the arc families T(v) for the given lattice points of the cone."""
    pts = sorted({as_vector(p) for p in points})
    for p in pts:
        if not c.contains(p):
            raise ValidationError(f"{list(p)} is not a lattice point of the cone")
    nodes = tuple(ArcFamilyLabel(p, c.face_of_point(p)) for p in pts)
    k = len(pts)
    below = {(i, j) for i in range(k) for j in range(k)
             if i != j and c.contains(vsub(pts[j], pts[i]))}
    covers = {(i, j) for (i, j) in below
              if not any((i, m) in below and (m, j) in below for m in range(k))}
    return ArcPoset(nodes, tuple(sorted(below)), tuple(sorted(covers)))
