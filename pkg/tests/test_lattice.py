"""Tests for exact integer/rational linear algebra and presented groups."""

import random
from fractions import Fraction

import pytest

from verbalclosure.lattice import (
    AbelianPresentation,
    Lattice,
    NotInLattice,
    content_and_primitive_part,
    eye,
    kernel_basis,
    mat_inv,
    mat_mul,
    mat_vec,
    membership_solve,
    smith_normal_form,
    snf_diagonal,
    solve_integer_combination,
    solve_rational,
)


def _det(M):
    n = len(M)
    work = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if work[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            det = -det
        det *= work[col][col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for i in range(col + 1, n):
            f = work[i][col]
            if f:
                work[i] = [x - f * y for x, y in zip(work[i], work[col])]
    return det


def test_smith_normal_form_random():
    rng = random.Random(11)
    for _ in range(60):
        r = rng.randint(1, 4)
        c = rng.randint(1, 4)
        M = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        U, D, V = smith_normal_form(M)
        assert mat_mul(mat_mul(U, M), V) == D
        assert abs(_det(U)) == 1
        assert abs(_det(V)) == 1
        diag = snf_diagonal(D)
        for i in range(r):
            for j in range(c):
                if i != j:
                    assert D[i][j] == 0
        assert all(d >= 0 for d in diag)
        for a, b in zip(diag, diag[1:]):
            if a != 0:
                assert b % a == 0
            else:
                assert b == 0


def test_smith_normal_form_fixture():
    # the 1x2 row (3, 5) has gcd 1
    _, D, _ = smith_normal_form([[3, 5]])
    assert snf_diagonal(D) == [1]
    _, D, _ = smith_normal_form([[4, 6], [2, 2]])
    diag = snf_diagonal(D)
    assert diag == [2, 2]


def test_kernel_basis_saturated():
    rng = random.Random(5)
    for _ in range(40):
        r = rng.randint(1, 3)
        c = rng.randint(1, 4)
        M = [[rng.randint(-5, 5) for _ in range(c)] for _ in range(r)]
        basis = kernel_basis(M, cols=c)
        for v in basis:
            assert all(x == 0 for x in mat_vec(M, v))
        # random integer kernel vectors lie in the integer span
        if basis:
            L = Lattice.from_generators(basis, dim=c)
            for _ in range(5):
                coeffs = [rng.randint(-3, 3) for _ in basis]
                v = tuple(sum(k * b[i] for k, b in zip(coeffs, basis))
                          for i in range(c))
                assert L.integer_coordinates(v) is not None
    assert kernel_basis([], cols=3) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_solve_integer_combination_roundtrip():
    rng = random.Random(9)
    for _ in range(50):
        g = rng.randint(1, 4)
        n = rng.randint(1, 4)
        gens = [tuple(rng.randint(-4, 4) for _ in range(n)) for _ in range(g)]
        coeffs = [rng.randint(-5, 5) for _ in range(g)]
        target = tuple(sum(c * v[i] for c, v in zip(coeffs, gens))
                       for i in range(n))
        got = solve_integer_combination(gens, target)
        assert got is not None
        back = tuple(sum(c * v[i] for c, v in zip(got, gens))
                     for i in range(n))
        assert back == target


def test_solve_integer_combination_rejects_outsiders():
    gens = [(2, 0), (0, 2)]
    assert solve_integer_combination(gens, (1, 0)) is None
    assert solve_integer_combination(gens, (2, 3)) is None
    assert solve_integer_combination([], (0, 0)) == ()
    assert solve_integer_combination([], (1, 0)) is None


def test_solve_rational():
    assert solve_rational([(1, 1), (1, -1)], (2, 5)) == (
        Fraction(7, 2), Fraction(-3, 2))
    assert solve_rational([(1, 0), (0, 1)], (4, -2)) == (4, -2)
    assert solve_rational([(1, 0)], (0, 1)) is None


def test_lattice_from_generators_spans_same_lattice():
    rng = random.Random(21)
    for _ in range(30):
        n = rng.randint(1, 4)
        g = rng.randint(1, 5)
        gens = [tuple(Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2)))
                      for _ in range(n)) for _ in range(g)]
        L = Lattice.from_generators(gens, dim=n)
        for v in gens:
            assert L.integer_coordinates(v) is not None
        for b in L.basis:
            assert solve_integer_combination(gens, b) is not None


def test_membership_solve_fixture():
    closure = Lattice.from_generators(
        [(Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 2), Fraction(-1, 2))],
        dim=2)
    assert membership_solve(closure, (2, 5)) == (7, -3)
    assert membership_solve(closure, (Fraction(1, 2), Fraction(3, 2))) == (2, -1)
    assert membership_solve(closure, (Fraction(1, 3), 0)) is None


def test_content_and_primitive_part():
    L = Lattice([(1, 0), (0, 1)])
    k, u = content_and_primitive_part((4, 6), L)
    assert k == 2 and u == (2, 3)
    k, u = content_and_primitive_part((3, 5), L)
    assert k == 1 and u == (3, 5)
    k, u = content_and_primitive_part((0, 0), L)
    assert k == 0
    with pytest.raises(NotInLattice):
        content_and_primitive_part((Fraction(1, 2), 0), L)


def test_mat_inv_unimodular_is_integral():
    U = [[1, 2], [0, 1]]
    assert mat_inv(U) == [[1, -2], [0, 1]]
    with pytest.raises(ValueError):
        mat_inv([[1, 2], [2, 4]])


def test_presentation_free_part():
    # Z^3 / (0,0,2): free rank 2, torsion Z/2
    P = AbelianPresentation(3, [(0, 0, 2)])
    assert P.free_rank == 2
    assert P.torsion_order == 2
    assert P.invariant_factors == [2]
    assert P.free_coordinates((0, 0, 2)) == (0, 0)
    assert P.is_torsion((0, 0, 1))
    assert not P.is_torsion((1, 0, 0))
    # lift is a section of the projection
    for v in [(1, 0), (0, 1), (3, -4)]:
        assert P.free_coordinates(P.lift_free(v)) == v


def test_presentation_equality_and_canonical():
    P = AbelianPresentation(2, [(0, 3)])
    assert P.elements_equal((1, 1), (1, 4))
    assert not P.elements_equal((1, 1), (1, 3))
    assert P.canonical((0, 3)) == P.canonical((0, 0))
    rng = random.Random(3)
    for _ in range(30):
        v = (rng.randint(-9, 9), rng.randint(-9, 9))
        w = (v[0], v[1] + 3 * rng.randint(-3, 3))
        assert P.canonical(v) == P.canonical(w)


def test_presentation_mixed_invariants():
    P = AbelianPresentation(3, [(2, 0, 0), (0, 4, 0)])
    assert P.free_rank == 1
    assert sorted(P.invariant_factors) == [2, 4]
    assert P.torsion_order == 8
    assert P.in_relation_lattice((2, 0, 0))
    assert P.in_relation_lattice((2, 4, 0))
    assert not P.in_relation_lattice((1, 0, 0))
    assert not P.in_relation_lattice((0, 0, 1))


def test_presentation_no_relations():
    P = AbelianPresentation(2, [])
    assert P.free_rank == 2
    assert P.torsion_order == 1
    assert P.free_coordinates((3, 5)) in [(3, 5), (5, 3), (-3, 5), (3, -5),
                                          (-3, -5), (-5, 3), (5, -3), (-5, -3)]
    # projection composed with lift is the identity on free coordinates
    assert P.free_coordinates(P.lift_free((3, 5))) == (3, 5)
