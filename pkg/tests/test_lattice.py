import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_nash.errors import ValidationError
from toric_nash.lattice import (
    Sublattice,
    determinant,
    hermite_normal_form,
    identity,
    is_primitive,
    lattice_index,
    matmul,
    pairing,
    primitive,
    quotient_map,
    rank,
    saturation,
    smith_normal_form,
)

small = st.integers(-6, 6)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_hnf_identity():
    h, u = hermite_normal_form(identity(2))
    assert h == identity(2) and u == identity(2)


def test_hnf_example():
    m = [[2, 4], [1, 3]]
    h, u = hermite_normal_form(m)
    # positive pivots, entries above a pivot reduced into [0, pivot)
    assert h == ((1, 1), (0, 2))
    assert matmul(u, m) == h
    assert abs(determinant(u)) == 1


def test_hnf_zero_matrix():
    h, u = hermite_normal_form([[0, 0], [0, 0]])
    assert h == ((0, 0), (0, 0)) and u == identity(2)


@settings(max_examples=60, deadline=None)
@given(matrices(3, 3))
def test_hnf_properties(m):
    h, u = hermite_normal_form(m)
    assert matmul(u, m) == h
    assert abs(determinant(u)) == 1
    assert hermite_normal_form(h)[0] == h
    col = -1
    for row in h:
        if not any(row):
            continue
        j = next(k for k, x in enumerate(row) if x)
        assert j > col and row[j] > 0
        col = j


@pytest.mark.parametrize("m,diag", [
    ([[1, 0], [0, 1]], (1, 1)),
    ([[2, 0], [0, 3]], (1, 6)),
    ([[0, 0], [0, 0]], (0, 0)),
])
def test_snf_examples(m, diag):
    d, l, r = smith_normal_form(m)
    assert (d[0][0], d[1][1]) == diag
    assert matmul(matmul(l, m), r) == d


@settings(max_examples=60, deadline=None)
@given(matrices(3, 3))
def test_snf_chain(m):
    d, l, r = smith_normal_form(m)
    assert matmul(matmul(l, m), r) == d
    assert abs(determinant(l)) == 1 and abs(determinant(r)) == 1
    diag = [d[i][i] for i in range(3)]
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else b % a == 0
    assert diag[0] * diag[1] * diag[2] == abs(determinant(m))


@pytest.mark.parametrize("v,p", [((2, 4), (1, 2)), ((1, 0, 0), (1, 0, 0)), ((-3, 6), (-1, 2))])
def test_primitive(v, p):
    assert primitive(v) == p


def test_primitive_zero():
    with pytest.raises(ValidationError):
        primitive((0, 0))


@given(st.lists(small, min_size=2, max_size=4).filter(any), st.integers(1, 9))
def test_primitive_scaling(v, k):
    assert primitive([k * x for x in v]) == primitive(v)
    assert is_primitive(primitive(v))


def test_pairing():
    assert pairing((1, 2), (3, 4)) == 11
    assert pairing((5, -7), (0, 0)) == 0
    assert pairing((1, 1), (1, -1)) == 0
    with pytest.raises(ValidationError):
        pairing((1, 2), (1, 2, 3))


def test_lattice_index_examples():
    z2 = Sublattice.full(2)
    assert lattice_index(z2, z2) == 1
    assert lattice_index(Sublattice.from_generators([(2, 0), (0, 2)], 2), z2) == 4
    assert lattice_index(Sublattice.from_generators([(2, 0), (0, 2), (1, 1)], 2), z2) == 2
    with pytest.raises(ValidationError):
        lattice_index(Sublattice.from_generators([(1, 0)], 2), z2)
    with pytest.raises(ValidationError):
        lattice_index(z2, Sublattice.from_generators([(2, 0), (0, 2)], 2))


def test_lattice_index_towers():
    rng = random.Random(7)
    for _ in range(30):
        n = rng.randint(2, 3)
        a = Sublattice.full(n)
        while True:
            gb = [tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n)]
            if determinant(gb):
                break
        b = Sublattice.from_generators(gb, n)
        while True:
            k = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
            if determinant(k):
                break
        c = Sublattice.from_generators(matmul(k, b.basis), n)
        assert lattice_index(c, a) == lattice_index(c, b) * lattice_index(b, a)


def test_quotient_examples():
    q = quotient_map(3, [(1, 0, 0)])
    assert q.target_rank == 2
    assert q.project((5, 0, 0)) == (0, 0)
    assert len({q.project(v) for v in [(0, 1, 0), (0, 0, 1), (0, 1, 1)]}) == 3

    q = quotient_map(2, [(2, 0)])
    assert q.kernel_basis in (((1, 0),), ((-1, 0),))
    assert q.target_rank == 1
    assert q.project((3, 1)) in ((1,), (-1,))
    assert q.project((7, 0)) == (0,)

    q = quotient_map(2, Sublattice.full(2))
    assert q.target_rank == 0


@pytest.mark.parametrize("gens", [[(2, 0, 0)], [(1, 1, 0), (0, 2, 2)], [(2, 4, 6)], [(1, -1, 3), (2, 0, 1)]])
def test_quotient_kernel_is_saturation(gens):
    n = 3
    q = quotient_map(n, gens)
    sat = saturation(Sublattice.from_generators(gens, n))
    for x in itertools.product(range(-3, 4), repeat=n):
        assert (not any(q.project(x))) == (x in sat)
        assert q.project(q.lift(q.project(x))) == q.project(x)


def test_rank_and_validation():
    assert rank([(1, 2, 3), (2, 4, 6), (0, 0, 1)]) == 2
    with pytest.raises(ValidationError):
        Sublattice.from_generators([(1.5, 0)], 2)
    with pytest.raises(ValidationError):
        Sublattice.full(9)
