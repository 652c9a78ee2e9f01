import json
import random

import pytest

from corpus import QUADRIC, a_n, random_cone
from toric_nash.cone import Cone, orthant
from toric_nash.errors import ResolutionCapExceeded, ValidationError
from toric_nash.fan import (
    Fan,
    center_of_divisor,
    face_fan,
    fiber_components,
    is_component,
    refines,
    replay,
    resolve,
    star_subdivision,
    validate_fan,
)
from toric_nash.lattice_points import hilbert_basis
from toric_nash.nash import DivisorLabel


def blowup():
    return star_subdivision(face_fan(orthant(2)), (1, 1))


def cones_as_rays(f):
    return {frozenset(c.rays) for c in f.maximal}


def test_face_fan():
    f = face_fan(orthant(2))
    assert len(f.maximal_cones) == 1 and f.support == orthant(2)
    assert face_fan(QUADRIC).support == QUADRIC


def test_star_subdivision_examples():
    assert cones_as_rays(blowup()) == {frozenset({(1, 0), (1, 1)}), frozenset({(1, 1), (0, 1)})}
    f = star_subdivision(face_fan(a_n(1)), (1, 1))
    assert len(f.maximal) == 2 and f.is_smooth()
    assert len(f.rays) == 3 and validate_fan(f) == []


def test_star_subdivision_rejects():
    f = face_fan(orthant(2))
    with pytest.raises(ValidationError):
        star_subdivision(f, (2, 2))
    with pytest.raises(ValidationError):
        star_subdivision(f, (1, 0))
    with pytest.raises(ValidationError):
        star_subdivision(f, (-1, 1))


def test_resolve_examples():
    f = resolve(orthant(3))
    assert f.history == () and f == face_fan(orthant(3))
    f = resolve(a_n(1))
    assert len(f.maximal) == 2 and [h.ray for h in f.history] == [(1, 1)]
    c = Cone([(1, 0), (1, 5)])
    assert set(resolve(c).rays) == set(hilbert_basis(c))
    f = resolve(QUADRIC)
    assert f.is_smooth() and validate_fan(f) == []


def test_resolve_random_valid():
    rng = random.Random(17)
    for _ in range(10):
        n = rng.choice((2, 3))
        c = random_cone(rng, n, -4, 4, extra=rng.randint(0, 1))
        for seed in ("canonical", 0, 1):
            f = resolve(c, seed)
            assert f.is_smooth()
            assert validate_fan(f) == []
            assert all(refines(f, replay(f, k)) for k in range(len(f.history) + 1))
            assert replay(f) == f
            assert len(f.rays) == len(c.rays) + len(f.history)


def test_resolve_seeded_is_reproducible():
    c = Cone([(1, 0, 0), (0, 1, 0), (1, 2, 5)])
    assert resolve(c, 4) == resolve(c, 4)


def test_resolve_cap():
    with pytest.raises(ResolutionCapExceeded) as info:
        resolve(Cone([(1, 0), (1, 7)]), cap=2)
    assert len(info.value.partial.history) == 2


def test_fiber_components_examples():
    smooth = face_fan(orthant(2))
    (comp,) = fiber_components(smooth)
    assert comp.dim == 2 and comp.component_dim == 0
    (comp,) = fiber_components(blowup())
    assert comp.rays == ((1, 1),)
    f = resolve(a_n(2))
    assert {c.rays for c in fiber_components(f)} == {((1, 1),), ((1, 2),)}


def test_fiber_components_incomparable_and_cover():
    rng = random.Random(2)
    for _ in range(6):
        c = random_cone(rng, 3, -3, 3, extra=1)
        f = resolve(c, rng.randint(0, 9))
        comps = fiber_components(f)
        sets = [set(x.ray_indices) for x in comps]
        assert all(not (a < b) for a in sets for b in sets)
        for idx in f.all_cones:
            if idx and f.cone(idx).interior_point() and c.relint_contains(f.cone(idx).interior_point()):
                assert any(s <= set(idx) for s in sets)


def test_center_and_is_component():
    f = blowup()
    o = orthant(2)
    assert center_of_divisor(f, DivisorLabel((1, 1), o)).rays == ((1, 1),)
    center = center_of_divisor(f, DivisorLabel((2, 1), o))
    assert set(center.rays) == {(1, 0), (1, 1)} and center.dim == 2
    assert center_of_divisor(face_fan(o), (1, 2)).rays == o.rays
    assert not is_component(f, None, (2, 1))
    assert is_component(f, None, (1, 1))
    r = resolve(a_n(2))
    assert all(is_component(r, None, (1, k)) for k in (1, 2))


def test_fan_json_round_trip():
    f = resolve(QUADRIC, 3)
    again = Fan.from_dict(json.loads(json.dumps(f.to_dict())))
    assert again == f
    with pytest.raises(ValidationError):
        Fan.from_dict({"support": {"lattice_rank": 2, "rays": [[1, 0], [0, 1]]}, "rays": [[1, 0]],
                       "maximal_cones": [[0, 5]]})
