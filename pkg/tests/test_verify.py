import pytest

from corpus import QUADRIC, a_n
from toric_nash.cone import Cone, orthant
from toric_nash.errors import ValidationError
from toric_nash.fan import face_fan, resolve, star_subdivision
from toric_nash.nash import DivisorLabel
from toric_nash.serialize import canonical_json
from toric_nash.verify import (
    CONSISTENT,
    check_essential,
    cross_validate,
    oracle_hilbert_decompose,
    oracle_minimal_elements,
    witness_search,
)


def test_oracle_examples():
    assert oracle_minimal_elements(orthant(2), 1).points == ((1, 1),)
    assert oracle_minimal_elements(a_n(3), 1).points == ((1, 1), (1, 2), (1, 3))
    assert oracle_minimal_elements(QUADRIC, 2).points == ((1, 1, 1),)


def test_oracle_decompose():
    o = orthant(2)
    assert oracle_hilbert_decompose(o, (1, 0), [(1, 0), (0, 1)])
    assert oracle_hilbert_decompose(o, (3, 2), [(1, 0), (0, 1)])
    assert not oracle_hilbert_decompose(a_n(1), (1, 1), [(1, 0), (1, 2)])


def test_check_essential():
    o = orthant(2)
    blow = star_subdivision(face_fan(o), (1, 1))
    fans = [face_fan(o), blow, resolve(o, 3)]
    assert check_essential(o, o.as_face, DivisorLabel((1, 1), o), fans).in_all
    chk = check_essential(o, o.as_face, DivisorLabel((2, 1), o), fans)
    assert not chk.in_all and chk.first_failure == 1
    a2 = a_n(2)
    res = [resolve(a2, s) for s in ("canonical", 1, 2)]
    assert check_essential(a2, a2.as_face, DivisorLabel((1, 1), a2), res).in_all


def test_witness_search():
    o = orthant(2)
    w = witness_search(o, o.as_face, DivisorLabel((2, 1), o))
    assert w is not None and (1, 1) in w.rays
    with pytest.raises(ValidationError):
        DivisorLabel((2, 2), o)
    a2 = a_n(2)
    w = witness_search(a2, a2.as_face, DivisorLabel((2, 3), a2))
    assert w is not None and {(1, 1), (1, 2)} <= set(w.rays) and (2, 3) not in w.rays
    with pytest.raises(ValidationError, match="minimal"):
        witness_search(a2, a2.as_face, DivisorLabel((1, 1), a2))


@pytest.mark.parametrize("c", [orthant(3), QUADRIC, a_n(2)])
def test_cross_validate(c):
    rep = cross_validate(c, trials=10, seed=0)
    assert rep.verdict == CONSISTENT
    assert all(d["component_in_all"] for d in rep.per_divisor)
    assert rep.to_dict()["resolutions_tested"]["count"] == 10


def test_cross_validate_face_and_zero_face():
    c = Cone([(1, 0, 0), (1, 3, 0), (0, 0, 1)])
    face = c.face_from_rays([(1, 0, 0), (1, 3, 0)])
    rep = cross_validate(c, face, trials=5)
    assert rep.verdict == CONSISTENT
    assert [tuple(d["v"]) for d in rep.per_divisor] == [(1, 1, 0), (1, 2, 0)]
    rep = cross_validate(c, c.zero_face)
    assert rep.verdict == CONSISTENT and rep.notes


def test_report_determinism():
    a = canonical_json(cross_validate(QUADRIC, trials=4, seed=7).to_dict())
    b = canonical_json(cross_validate(QUADRIC, trials=4, seed=7).to_dict())
    assert a == b
