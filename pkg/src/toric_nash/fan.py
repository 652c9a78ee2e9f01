"""Fans refining a cone, star subdivisions and toric resolutions.

Cones of a fan are stored as sorted tuples of indices into ``Fan.rays``.  By
the orbit-cone correspondence a cone tau' of the fan labels the orbit closure
V(tau'); larger cones give smaller orbit closures.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, Iterable, Sequence

from .cone import Cone, Face
from .errors import ResolutionCapExceeded, ValidationError
from .lattice import IntVector, as_vector, is_primitive, primitive, rank, vadd
from .lattice_points import hilbert_basis, parallelepiped_points
from .nash import DivisorLabel
from .serialize import cone_from_dict, cone_to_dict

DEFAULT_SUBDIVISION_CAP = 10_000

ConeIdx = tuple[int, ...]


@dataclass(frozen=True)
class SubdivisionRecord:
    ray: IntVector
    split: tuple[ConeIdx, ...]

    def to_dict(self) -> dict:
        return {"ray": list(self.ray), "split": [list(c) for c in self.split]}


@dataclass(frozen=True)
class FiberComponent:
    """A cone tau' of the fan; the component is the orbit closure V(tau')."""

    rays: tuple[IntVector, ...]
    ray_indices: ConeIdx
    dim: int
    component_dim: int

    def to_dict(self) -> dict:
        return {
            "rays": [list(r) for r in self.rays],
            "ray_indices": list(self.ray_indices),
            "cone_dim": self.dim,
            "component_dim": self.component_dim,
        }


@lru_cache(maxsize=65536)
def _cone_on(rays: tuple[IntVector, ...], n: int) -> Cone:
    # fans after successive subdivisions share most of their cones
    return Cone(rays, n)


@dataclass(frozen=True)
class Fan:
    support: Cone
    rays: tuple[IntVector, ...]
    maximal_cones: tuple[ConeIdx, ...]
    history: tuple[SubdivisionRecord, ...] = field(default=())

    @property
    def ambient_rank(self) -> int:
        return self.support.ambient_rank

    @cached_property
    def _ray_index(self) -> dict[IntVector, int]:
        return {r: i for i, r in enumerate(self.rays)}

    def cone(self, idx: Iterable[int]) -> Cone:
        return _cone_on(tuple(sorted(self.rays[i] for i in idx)), self.ambient_rank)

    @cached_property
    def maximal(self) -> tuple[Cone, ...]:
        return tuple(self.cone(c) for c in self.maximal_cones)

    def _global(self, c: Cone, local: Iterable[int]) -> ConeIdx:
        return tuple(sorted(self._ray_index[c.rays[i]] for i in local))

    @cached_property
    def all_cones(self) -> tuple[ConeIdx, ...]:
        """Every cone of the fan, i.e. every face of a maximal cone, as ray indices."""
        out: set[ConeIdx] = set()
        for c in self.maximal:
            for s in c._face_sets:
                out.add(self._global(c, s))
        return tuple(sorted(out, key=lambda x: (len(x), x)))

    def facets_of(self, k: int) -> list[ConeIdx]:
        c = self.maximal[k]
        return [self._global(c, f.ray_indices()) for f in c.faces() if f.dim == c.dim - 1]

    def is_smooth(self) -> bool:
        return all(c.is_smooth() for c in self.maximal)

    def to_dict(self) -> dict:
        return {
            "support": cone_to_dict(self.support),
            "rays": [list(r) for r in self.rays],
            "maximal_cones": [list(c) for c in self.maximal_cones],
            "history": [h.to_dict() for h in self.history],
        }

    @classmethod
    def from_dict(cls, data: Any) -> "Fan":
        try:
            support = cone_from_dict(data["support"])
            rays = tuple(as_vector(r) for r in data["rays"])
            cones = tuple(tuple(int(i) for i in c) for c in data["maximal_cones"])
            hist = tuple(SubdivisionRecord(as_vector(h["ray"]), tuple(tuple(c) for c in h["split"]))
                         for h in data.get("history", ()))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed fan JSON: {exc}") from None
        if any(i < 0 or i >= len(rays) for c in cones for i in c):
            raise ValidationError("fan JSON references a ray index out of range")
        return cls(support, rays, cones, hist)


def face_fan(c: Cone) -> Fan:
    """The fan whose only maximal cone is ``c``."""
    if not c.is_full_dimensional:
        raise ValidationError("face_fan needs a full-dimensional cone")
    return Fan(c, c.rays, (tuple(range(len(c.rays))),))


def star_subdivision(f: Fan, v: Sequence[int]) -> Fan:
    """Insert the ray through ``v``, coning it over the faces that avoid it."""
    v = as_vector(v)
    if not any(v):
        raise ValidationError("cannot subdivide at the zero vector")
    if not is_primitive(v):
        raise ValidationError(f"subdivision point must be primitive, got {list(v)}")
    if v in f._ray_index:
        raise ValidationError(f"{list(v)} is already a ray of the fan")
    if not f.support.contains(v):
        raise ValidationError(f"{list(v)} lies outside the support of the fan")
    new = len(f.rays)
    cones: list[ConeIdx] = []
    split: list[ConeIdx] = []
    for k, (idx, c) in enumerate(zip(f.maximal_cones, f.maximal)):
        if not c.contains(v):
            cones.append(idx)
            continue
        split.append(idx)
        for facet in f.facets_of(k):
            if not f.cone(facet).contains(v):
                cones.append(facet + (new,))
    record = SubdivisionRecord(v, tuple(split))
    return Fan(f.support, f.rays + (v,), tuple(sorted(set(cones))), f.history + (record,))


def _coordinate_key(v: IntVector) -> tuple[int, IntVector]:
    return (sum(v), v)


def _nonsimplicial_target(f: Fan, exclude: IntVector | None) -> IntVector | None:
    bad = [idx for idx in f.all_cones if len(idx) > rank([f.rays[i] for i in idx])]
    if not bad:
        return None
    minimal = [b for b in bad if not any(o != b and set(o) < set(b) for o in bad)]
    target = min(minimal, key=lambda b: (len(b), sorted(f.rays[i] for i in b)))
    g = f.cone(target)
    relint = [h for h in hilbert_basis(g) if g.relint_contains(h)
              and h not in f._ray_index and h != exclude]
    if relint:
        return min(relint, key=_coordinate_key)
    # no Hilbert-basis point in the relative interior; use ray sums instead
    total = g.interior_point()
    for extra in [()] + [(r,) for r in g.rays]:
        p = primitive(vadd(total, extra[0]) if extra else total)
        if p not in f._ray_index and p != exclude:
            return p
    raise ValidationError("no admissible subdivision point for a non-simplicial cone")


def _smoothing_target(f: Fan, exclude: IntVector | None, rng: random.Random | None) -> IntVector | None:
    rough = [(c.multiplicity(), sorted(c.rays), c) for c in f.maximal if not c.is_smooth()]
    if not rough:
        return None
    rough.sort(key=lambda t: (-t[0], t[1]))
    for _, _, c in rough:
        cand = sorted((h for h in hilbert_basis(c) if h not in f._ray_index and h != exclude),
                      key=_coordinate_key)
        if cand:
            return rng.choice(cand) if rng is not None else cand[0]
    raise ValidationError("cannot smooth the fan without the excluded ray")


def _random_pool(c: Cone) -> list[IntVector]:
    pool = set(hilbert_basis(c))
    for piece in c.triangulate():
        pool.update(primitive(p) for p in parallelepiped_points(piece) if any(p))
    return sorted(pool)


def refine_to_smooth(
    f: Fan,
    *,
    rng: random.Random | None = None,
    exclude: Sequence[int] | None = None,
    cap: int = DEFAULT_SUBDIVISION_CAP,
) -> Fan:
    """Star-subdivide ``f`` until all maximal cones are smooth.

    Non-simplicial cones are removed first, starting from a minimal
    non-simplicial cone.  Then a maximal cone of largest multiplicity (the
    lexicographically smallest among them) is subdivided at a Hilbert-basis
    element that is not a ray, smallest coordinate sum first.  With ``rng``
    the element is drawn at random instead.  ``exclude`` is never inserted.
    """
    ex = primitive(as_vector(exclude)) if exclude is not None else None
    steps = 0
    while True:
        target = _nonsimplicial_target(f, ex)
        if target is None:
            target = _smoothing_target(f, ex, rng)
        if target is None:
            return f
        if steps >= cap:
            raise ResolutionCapExceeded(f"resolution needs more than {cap} subdivisions", cap=cap, partial=f)
        f = star_subdivision(f, target)
        steps += 1


def resolve(
    c: Cone,
    seed: int | str = "canonical",
    *,
    exclude: Sequence[int] | None = None,
    start: Fan | None = None,
    cap: int = DEFAULT_SUBDIVISION_CAP,
) -> Fan:
    """A smooth fan refining the face fan of ``c``.

    ``seed="canonical"`` follows the deterministic selection rule.  An integer
    seed first performs 0 to 3 random star subdivisions at Hilbert-basis or
    parallelepiped points and then smooths with random Hilbert-basis choices;
    the result depends only on the seed.
    """
    f = start if start is not None else face_fan(c)
    ex = primitive(as_vector(exclude)) if exclude is not None else None
    if seed == "canonical":
        return refine_to_smooth(f, exclude=ex, cap=cap)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ValidationError(f'seed must be an integer or "canonical", got {seed!r}')
    rng = random.Random(seed)
    pool = _random_pool(c)
    for _ in range(rng.randint(0, 3)):
        options = [p for p in pool if p not in f._ray_index and p != ex]
        if not options:
            break
        f = star_subdivision(f, rng.choice(options))
    return refine_to_smooth(f, rng=rng, exclude=ex, cap=cap)


def _face_of_support(f: Fan, t: Face | Sequence[int] | None) -> Face:
    if t is None:
        return f.support.as_face
    if isinstance(t, Face):
        if t.parent != f.support:
            raise ValidationError("face does not belong to the support of the fan")
        return t
    return f.support.face(t)


def _component(f: Fan, idx: ConeIdx) -> FiberComponent:
    rays = tuple(f.rays[i] for i in idx)
    d = rank(rays)
    return FiberComponent(rays, idx, d, f.ambient_rank - d)


def fiber_components(f: Fan, t: Face | Sequence[int] | None = None) -> tuple[FiberComponent, ...]:
    """Irreducible components of the closure of the fiber over orb(t).

    These are the cones tau' of the fan with relint(tau') inside relint(t)
    that have no proper face with the same property.
    """
    face = _face_of_support(f, t)
    target = set(face.rays)
    hits = []
    for idx in f.all_cones:
        if not idx:
            if face.is_zero:
                hits.append(idx)
            continue
        p = f.cone(idx).interior_point()
        if set(f.support.face_of_point(p).rays) == target:
            hits.append(idx)
    minimal = [h for h in hits if not any(o != h and set(o) < set(h) for o in hits)]
    return tuple(_component(f, h) for h in minimal)


def center_of_divisor(f: Fan, d: DivisorLabel | Sequence[int]) -> FiberComponent:
    """The cone of ``f`` whose relative interior contains the label of D_v."""
    v = d.v if isinstance(d, DivisorLabel) else as_vector(d)
    for c in f.maximal:
        if c.contains(v):
            sub = c.face_of_point(v)
            return _component(f, tuple(sorted(f._ray_index[r] for r in sub.rays)))
    raise ValidationError(f"{list(v)} lies outside the support of the fan")


def is_component(f: Fan, t: Face | Sequence[int] | None, d: DivisorLabel | Sequence[int]) -> bool:
    center = center_of_divisor(f, d)
    return any(c.ray_indices == center.ray_indices for c in fiber_components(f, t))


def replay(f: Fan, steps: int | None = None) -> Fan:
    """Rebuild the fan after the first ``steps`` recorded subdivisions."""
    g = face_fan(f.support)
    for rec in f.history[: len(f.history) if steps is None else steps]:
        g = star_subdivision(g, rec.ray)
    return g


def refines(fine: Fan, coarse: Fan) -> bool:
    """Every maximal cone of ``fine`` lies in some maximal cone of ``coarse``."""
    return all(any(all(c.contains(r) for r in m.rays) for c in coarse.maximal) for m in fine.maximal)


def validate_fan(f: Fan, sample_bound: int = 3) -> list[str]:
    """Sampled validity check; returns a list of problems, empty when valid."""
    problems = []
    rays = set(f.rays)
    for r in f.support.rays:
        if r not in rays:
            problems.append(f"support ray {list(r)} missing from the fan")
    for c in f.maximal:
        if not all(f.support.contains(r) for r in c.rays):
            problems.append(f"cone {c} leaves the support")
    n = f.ambient_rank
    box = itertools.product(range(-sample_bound, sample_bound + 1), repeat=n)
    sample = [p for p in box if f.support.contains(p)]
    for p in sample:
        if not any(c.contains(p) for c in f.maximal):
            problems.append(f"point {list(p)} of the support is not covered")
    for (ia, a), (ib, b) in itertools.combinations(enumerate(f.maximal_cones), 2):
        common = sorted(set(a) & set(b))
        ca, cb = f.maximal[ia], f.maximal[ib]
        shared = f.cone(common) if common else None
        for p in sample:
            if ca.contains(p) and cb.contains(p):
                inside = shared.contains(p) if shared is not None else not any(p)
                if not inside:
                    problems.append(f"cones {list(a)} and {list(b)} overlap outside a common face at {list(p)}")
                    break
    return problems
