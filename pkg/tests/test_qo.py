import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from fractions import Fraction

from toric_nash.cone import Cone, orthant
from toric_nash.errors import ValidationError
from toric_nash.lattice import determinant, smith_normal_form
from toric_nash.nash import minimal_interior_elements
from toric_nash.qo import (
    QOBranch,
    branches_from_json,
    lattice_from_exponents,
    multi_branch,
    qo_essential,
    step_indices,
)


def unimodular_equivalent_2d(a: Cone, b: Cone) -> bool:
    if a.multiplicity() != b.multiplicity():
        return False
    # search small GL(2, Z) matrices mapping the rays of a onto those of b
    for m in itertools.product(range(-4, 5), repeat=4):
        if abs(m[0] * m[3] - m[1] * m[2]) != 1:
            continue
        img = Cone([(m[0] * x + m[1] * y, m[2] * x + m[3] * y) for x, y in a.rays])
        if img == b:
            return True
    return False


def test_a1_surface():
    lp = lattice_from_exponents(QOBranch(2, [["1/2", "1/2"]]))
    assert lp.index == 2
    assert unimodular_equivalent_2d(lp.sigma, Cone([(1, 0), (1, 2)]))
    assert lp.sigma_dual.dual() == lp.sigma


def test_whitney_umbrella():
    b = QOBranch(2, [[1, "1/2"]])
    lp = lattice_from_exponents(b)
    assert lp.index == 2 and lp.sigma.is_smooth()
    assert {tuple(r) for r in lp.m_basis} == {(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1, 2))}
    assert len(qo_essential(b)) == 1


def test_no_exponents():
    lp = lattice_from_exponents(QOBranch(3, []))
    assert lp.index == 1 and lp.sigma == orthant(3)
    assert qo_essential(QOBranch(3, [])).essential.minimal_points == ((1, 1, 1),)


def test_qo_essential_a1():
    r = qo_essential(QOBranch(2, [["1/2", "1/2"]]))
    assert len(r) == 1 and r.lattice.index == 2
    d = r.to_dict()
    assert d["count"] == 1 and d["index"] == 2


def test_validation():
    with pytest.raises(ValidationError, match="at least 2"):
        QOBranch(1, [["1/2"]])
    with pytest.raises(ValidationError, match="negative"):
        QOBranch(2, [["-1/2", "1/2"]])
    with pytest.raises(ValidationError, match="lexicographic"):
        QOBranch(2, [["1/2", "1/3"], ["1/3", "1/2"]])
    with pytest.raises(ValidationError, match="already lies"):
        QOBranch(2, [["1/2", "1/2"], ["3/2", "1/2"]])
    with pytest.raises(ValidationError, match="length"):
        QOBranch(2, [["1/2"]])
    with pytest.raises(ValidationError, match="rational"):
        QOBranch(2, [["x", "1"]])
    b = QOBranch(2, [["1/2", "1/3"], ["1/3", "1/2"]], checked=False)
    # scaled by 6 the generators have 2x2 minors with gcd 1, so M is (1/6)Z^2
    assert lattice_from_exponents(b).index == 36


def test_index_matches_snf_and_steps():
    b = QOBranch(3, [["1/2", "1/3", "0"], ["1/2", "1/2", "1/5"]])
    lp = lattice_from_exponents(b)
    den = 30
    gens = [[den * int(i == j) for j in range(3)] for i in range(3)]
    gens += [[int(q * den) for q in lam] for lam in b.exponents]
    d, _, _ = smith_normal_form(gens)
    snf_det = d[0][0] * d[1][1] * d[2][2]
    assert den ** 3 // snf_det == lp.index == 60
    steps = step_indices(b)
    assert steps == [6, 10]


fractions = st.fractions(min_value=0, max_value=3, max_denominator=6)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(fractions, fractions), min_size=1, max_size=3))
def test_index_is_product_of_steps(exps):
    b = QOBranch(2, sorted(exps), checked=False)
    prod = 1
    for k in step_indices(b):
        prod *= k
    assert lattice_from_exponents(b).index == prod


@pytest.mark.parametrize("exps", [
    [["1/2", "1/3"]],
    [["1/2", "1/2", "0"], ["1/2", "3/4", "1/3"]],
    [["1/3", "2/3"]],
])
def test_permutation_invariance(exps):
    n = len(exps[0])
    base = qo_essential(QOBranch(n, exps))
    for perm in itertools.permutations(range(n)):
        permuted = [[lam[i] for i in perm] for lam in exps]
        other = qo_essential(QOBranch(n, sorted(permuted, key=lambda lam: [Fraction(x) for x in lam]), checked=False))
        assert len(other) == len(base)
        assert other.lattice.index == base.lattice.index
        want = sorted(tuple(v[i] for i in perm) for v in base.original_divisors)
        assert sorted(other.original_divisors) == want


def test_multi_branch():
    a1 = QOBranch(2, [["1/2", "1/2"]])
    single = multi_branch([a1])
    assert single.total == 1 and single.results[0].essential == qo_essential(a1).essential
    two = multi_branch([a1, a1])
    assert two.total == 2 and [i for i, _ in two.tagged] == [0, 1]
    mixed = multi_branch([a1, QOBranch(2, []), QOBranch(2, [["1/3", "2/3"]])])
    assert mixed.total == sum(len(r) for r in mixed.results)


def test_multi_branch_keeps_going_after_errors():
    data = {"n": 2, "branches": [{"exponents": [["1/2", "1/2"]]}, {"exponents": [["-1", "0"]]}]}
    rep = multi_branch(branches_from_json(data))
    assert rep.results[0] is not None and rep.errors[1] is not None
    assert rep.total == 1 and not rep.ok
    with pytest.raises(ValidationError):
        branches_from_json({"branches": []})


def test_essential_matches_direct_minimal():
    b = QOBranch(2, [["1/3", "2/3"]])
    r = qo_essential(b)
    assert r.essential.minimal_points == minimal_interior_elements(r.lattice.sigma).minimal_points
    assert abs(determinant(r.lattice.n_basis)) == r.lattice.index
