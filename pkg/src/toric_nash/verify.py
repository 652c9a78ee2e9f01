"""Independent checks of the minimal-element characterization.

Two families of checks live here.  Brute-force oracles scan coordinate boxes
and apply the defining predicates literally; they share nothing with the
:mod:`toric_nash.nash` code paths except cone membership.  Resolution-side
checks build smooth fans and ask whether the center of D_v is an irreducible
component of the fiber, which is the definition of an essential divisor
restricted to the sampled resolutions.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .cone import Cone, Face
from .errors import CapExceeded, ValidationError
from .fan import Fan, center_of_divisor, face_fan, is_component, resolve, star_subdivision
from .lattice import IntVector, as_vector, is_primitive, rank, rational_coordinates, vsub
from .lattice_points import PointSet, default_cap
from .nash import DivisorLabel, EssentialSet, essential_divisors
from .serialize import cone_to_dict

CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"
INCONCLUSIVE = "inconclusive"

_INT64_SAFE = 2**62


def _region_box(c: Cone, bounds: dict[IntVector, int]) -> list[tuple[int, int]]:
    """Integer bounding box of {v : 0 <= <v, m> <= bounds[m]} from its exact vertices."""
    n = c.ambient_rank
    planes = [(m, 0) for m in bounds] + [(m, b) for m, b in bounds.items()]
    lo = [None] * n
    hi = [None] * n
    for combo in itertools.combinations(planes, n):
        normals = [m for m, _ in combo]
        if rank(normals) < n:
            continue
        # solve <v, m_i> = b_i: v is the coordinate vector of b in the dual basis
        sol = rational_coordinates(list(zip(*normals)), [b for _, b in combo])
        if sol is None:
            continue
        if all(0 <= sum(Fraction(m[j]) * sol[j] for j in range(n)) <= b for m, b in bounds.items()):
            for j, x in enumerate(sol):
                lo[j] = x if lo[j] is None else min(lo[j], x)
                hi[j] = x if hi[j] is None else max(hi[j], x)
    return [(math.floor(a), math.ceil(b)) for a, b in zip(lo, hi)]


def oracle_points(c: Cone, bound_multiplier: int = 1, cap: int | None = None) -> list[IntVector]:
    """Lattice points of the cone inside ``bound_multiplier`` times the standard facet bounds.

    Plain coordinate-box scan filtered by membership and the facet bounds.
    """
    if not c.is_full_dimensional:
        raise ValidationError("oracle needs a full-dimensional cone")
    cap = default_cap() if cap is None else cap
    normals = c.facets()
    bounds = {m: bound_multiplier * sum(sum(a * b for a, b in zip(r, m)) for r in c.rays) for m in normals}
    box = _region_box(c, bounds)
    size = 1
    for a, b in box:
        size *= b - a + 1
    if size > cap:
        raise CapExceeded(f"oracle box holds {size} points, cap is {cap}", cap=cap, attempted=size)
    out = []
    for p in itertools.product(*(range(a, b + 1) for a, b in box)):
        if c.contains(p) and all(sum(x * y for x, y in zip(p, m)) <= bounds[m] for m in normals):
            out.append(p)
    return out


def oracle_minimal_elements(c: Cone, bound_multiplier: int = 1, cap: int | None = None) -> PointSet:
    """Brute-force minimal interior points: v such that no other interior w has v - w in the cone."""
    pts = [p for p in oracle_points(c, bound_multiplier, cap) if c.relint_contains(p)]
    if not pts:
        return PointSet(c.ambient_rank, ())
    normals = c.facets()
    prof = [[sum(x * y for x, y in zip(p, m)) for m in normals] for p in pts]
    if max(abs(x) for row in prof for x in row) >= _INT64_SAFE:
        raise CapExceeded("oracle pairings exceed the int64 range", cap=_INT64_SAFE)
    arr = np.array(prof, dtype=np.int64)
    minimal = []
    for i, p in enumerate(pts):
        # v - w in the cone  <=>  every facet pairing of v - w is >= 0
        below = (arr[i] - arr >= 0).all(axis=1)
        below[i] = False
        if not below.any():
            minimal.append(p)
    return PointSet.of(minimal, c.ambient_rank)


def oracle_hilbert_decompose(c: Cone, v: Sequence[int], basis: PointSet | Sequence[Sequence[int]]) -> bool:
    """Whether ``v`` is a nonnegative integer combination of ``basis``."""
    v = as_vector(v)
    if not c.contains(v):
        raise ValidationError(f"{list(v)} is not a lattice point of the cone")
    gens = [as_vector(b) for b in basis if any(b)]

    @lru_cache(maxsize=None)
    def reach(w: IntVector) -> bool:
        if not any(w):
            return True
        # subtracting a used generator keeps the remainder inside the cone
        return any(c.contains(rest) and reach(rest) for rest in (vsub(w, g) for g in gens))

    return reach(v)


def oracle_is_irreducible(c: Cone, h: Sequence[int]) -> bool:
    """No decomposition ``h = a + b`` with a, b nonzero lattice points of the cone."""
    h = as_vector(h)
    normals = c.facets()
    bounds = {m: sum(x * y for x, y in zip(h, m)) for m in normals}
    box = _region_box(c, bounds)
    for p in itertools.product(*(range(a, b + 1) for a, b in box)):
        if any(p) and p != h and c.contains(p) and c.contains(vsub(h, p)):
            return False
    return True


@dataclass(frozen=True)
class EssentialCheck:
    in_all: bool
    first_failure: int | None


def check_essential(c: Cone, t: Face, d: DivisorLabel, resolutions: Sequence[Fan]) -> EssentialCheck:
    """Is the center of D_v a fiber component over orb(t) on every listed resolution?"""
    if not t.relint_contains(d.v):
        raise ValidationError(f"{list(d.v)} is not in the relative interior of the face")
    for i, f in enumerate(resolutions):
        if not is_component(f, t, d):
            return EssentialCheck(False, i)
    return EssentialCheck(True, None)


def _search(c: Cone, t: Face, d: DivisorLabel, budget: int, seed: int,
            minimal: EssentialSet | None = None) -> tuple[Fan, int | str] | None:
    v = d.v
    if not t.relint_contains(v):
        raise ValidationError(f"{list(v)} is not in the relative interior of the face")
    es = minimal if minimal is not None else essential_divisors(c, t)
    if v in es.minimal_points:
        raise ValidationError(f"{list(v)} is minimal; no witness resolution exists")
    below = [w for w in es.minimal_points if t.cone.contains(vsub(v, w))]
    if not below:
        raise ValidationError(f"no minimal element lies below {list(v)}")
    for attempt in range(budget):
        attempt_seed: int | str = "canonical" if attempt == 0 else seed + attempt
        w = below[0] if attempt == 0 else random.Random(seed + attempt).choice(below)
        start = star_subdivision(face_fan(c), w)
        fan = resolve(c, attempt_seed, start=start, exclude=v)
        if not is_component(fan, t, d):
            return fan, attempt_seed
    return None


def witness_search(c: Cone, t: Face, d: DivisorLabel, budget: int = 20, seed: int = 0) -> Fan | None:
    """A resolution on which the center of D_v is not a fiber component, if one is found.

    Each attempt first subdivides at a minimal w below v and then resolves
    without ever inserting the ray through v.
    """
    found = _search(c, t, d, budget, seed)
    return found[0] if found else None


@dataclass(frozen=True)
class VerificationReport:
    cone: Cone
    face: Face
    minimal_set: EssentialSet
    oracle_sets: dict[str, tuple[IntVector, ...]]
    resolution_seeds: tuple[int | str, ...]
    per_divisor: tuple[dict, ...]
    nonminimal_probes: tuple[dict, ...]
    verdict: str
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "cone": cone_to_dict(self.cone),
            "face_rays": [list(r) for r in self.face.rays],
            "minimal_set": self.minimal_set.to_dict(),
            "oracle_sets": {k: [list(p) for p in v] for k, v in sorted(self.oracle_sets.items())},
            "resolutions_tested": {"count": len(self.resolution_seeds), "seeds": list(self.resolution_seeds)},
            "per_divisor": list(self.per_divisor),
            "nonminimal_probes": list(self.nonminimal_probes),
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def nonminimal_probes(c: Cone, t: Face, es: EssentialSet, limit: int = 5) -> list[IntVector]:
    """Primitive non-minimal points of relint(t), smallest coordinate sum first."""
    local, _ = t.cone.restrict_to_span()
    pts = [t.cone.lift_local(y) for y in oracle_points(local, 2) if local.relint_contains(y)]
    mins = set(es.minimal_points)
    probes = [p for p in pts if is_primitive(p) and p not in mins]
    return sorted(probes, key=lambda p: (sum(p), p))[:limit]


def cross_validate(
    c: Cone,
    t: Face | Sequence[int] | None = None,
    trials: int = 10,
    seed: int = 0,
    bound_multiplier: int = 1,
    probe_limit: int = 5,
    budget: int = 20,
) -> VerificationReport:
    """Compare the minimal-element answer with brute force and with resolutions."""
    if trials < 1:
        raise ValidationError("trials must be at least 1")
    face = c.as_face if t is None else (t if isinstance(t, Face) else c.face(t))
    es = essential_divisors(c, face)
    if face.is_zero:
        return VerificationReport(c, face, es, {}, (), (), (), CONSISTENT, (es.marker or "",))

    notes = []
    local, _ = face.cone.restrict_to_span()
    oracle = {}
    for k in (bound_multiplier, 2 * bound_multiplier):
        oracle[f"x{k}"] = tuple(sorted(face.cone.lift_local(p) for p in oracle_minimal_elements(local, k)))
    mismatch = any(v != es.minimal_points for v in oracle.values())
    if mismatch:
        notes.append("oracle and minimal-element computation disagree")

    seeds: list[int | str] = ["canonical"] + [seed + i for i in range(1, trials)]
    fans = [resolve(c, s) for s in seeds]

    per_divisor = []
    falsified = False
    for label in es.labels:
        chk = check_essential(c, face, label, fans)
        entry = {"v": list(label.v), "component_in_all": chk.in_all}
        if not chk.in_all:
            falsified = True
            entry["failure_seed"] = seeds[chk.first_failure]
            center = center_of_divisor(fans[chk.first_failure], label)
            entry["failure_center"] = [list(r) for r in center.rays]
        per_divisor.append(entry)
    if falsified:
        notes.append("a minimal divisor is not a fiber component on some resolution")

    probes = []
    for p in nonminimal_probes(c, face, es, probe_limit):
        found = _search(c, face, DivisorLabel(p, c), budget, seed, es)
        probes.append({
            "v": list(p),
            "witness_found": found is not None,
            "witness_seed": found[1] if found else None,
        })

    if mismatch or falsified:
        verdict = INCONSISTENT
    elif all(p["witness_found"] for p in probes):
        verdict = CONSISTENT
    else:
        verdict = INCONCLUSIVE
    return VerificationReport(c, face, es, oracle, tuple(seeds), tuple(per_divisor), tuple(probes),
                              verdict, tuple(notes))

