import random
from fractions import Fraction

from betachow.linalg import kernel_basis, mat_vec, rank, rref


def test_kernel_of_identity_is_empty():
    assert kernel_basis([[1, 0], [0, 1]]) == []


def test_kernel_of_row_vector():
    assert kernel_basis([[1, 1]]) == [[Fraction(1), Fraction(-1)]]


def test_kernel_of_monomial_evaluation_matrix():
    # monomials 1, x, y, x^2, xy, y^2 at (1,1), (1,-1), (-1,1)
    pts = [(1, 1), (1, -1), (-1, 1)]
    rows = [[1, x, y, x * x, x * y, y * y] for x, y in pts]
    basis = kernel_basis(rows)
    assert len(basis) == 3
    for vec in basis:
        assert all(v == 0 for v in mat_vec(rows, vec))


def test_kernel_annihilates_random_matrices():
    rng = random.Random(2)
    for _ in range(60):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 6)
        m = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(cols)]
             for _ in range(rows)]
        basis = kernel_basis(m)
        assert len(basis) == cols - rank(m)
        for vec in basis:
            assert all(v == 0 for v in mat_vec(m, vec))
            lead = next(x for x in vec if x != 0)
            assert lead > 0


def test_rref_pivots():
    reduced, pivots = rref([[2, 4], [1, 2]])
    assert pivots == [0]
    assert reduced[0] == [Fraction(1), Fraction(2)]
