import itertools
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from sandpile_ilp import linalg
from sandpile_ilp.errors import NotSquare, Singular
from sandpile_ilp.graph import family, random_graph

small_int = st.integers(-6, 6)


def square(n):
    return st.lists(st.lists(small_int, min_size=n, max_size=n), min_size=n, max_size=n)


matrices = st.integers(1, 4).flatmap(square)


def leibniz_det(A):
    n = len(A)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        prod = 1
        for i in range(n):
            prod *= A[i][perm[i]]
        total += (-1) ** inv * prod
    return total


def determinantal_divisors(A):
    """gcd of all k×k minors, k = 1..n (the classic SNF oracle)."""
    n = len(A)
    out = []
    for k in range(1, n + 1):
        g = 0
        for rows in itertools.combinations(range(n), k):
            for cols in itertools.combinations(range(n), k):
                g = gcd(g, leibniz_det([[A[i][j] for j in cols] for i in rows]))
        out.append(g)
    return out


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_det_matches_leibniz(A):
    assert linalg.det(A) == leibniz_det(A)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_inverse_is_two_sided(A):
    if leibniz_det(A) == 0:
        with pytest.raises(Singular):
            linalg.inverse(A)
        return
    B = linalg.inverse(A)
    I = linalg.identity_matrix(len(A))
    assert linalg.matmul(A, B) == I
    assert linalg.matmul(B, A) == I


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_properties(A):
    res = linalg.smith_normal_form(A)
    D, U, V = res.D, res.U, res.V
    assert linalg.matmul(linalg.matmul(U, A), V) == D
    assert abs(linalg.det(U)) == 1 and abs(linalg.det(V)) == 1
    n = len(A)
    assert all(D[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    diag = res.diagonal
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert diag[:len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    # diagonal prefix products equal the determinantal divisors
    dd = determinantal_divisors(A)
    prod = 1
    for k, d in enumerate(diag):
        prod *= d
        assert prod == dd[k]


def test_solve_and_solve_row():
    A = [[2, -1], [-1, 2]]
    assert linalg.solve(A, [1, 0]) == [Fraction(2, 3), Fraction(1, 3)]
    B = [[3, -2], [-1, 2]]
    x = linalg.solve_row(B, [1, 1])
    assert linalg.vecmat(x, B) == [1, 1]
    y = linalg.solve(B, [1, 1])
    assert linalg.matvec(B, y) == [1, 1]


def test_errors():
    with pytest.raises(NotSquare):
        linalg.det([[1, 2]])
    with pytest.raises(Singular):
        linalg.solve([[1, 2], [2, 4]], [1, 1])


def test_lcm_denominators():
    assert linalg.lcm_denominators([Fraction(1, 4), Fraction(5, 6), 3]) == 12
    assert linalg.lcm_denominators([]) == 1


def test_cycle5_snf():
    L = family("cycle", 5).reduced_laplacian()
    assert linalg.invariant_factors(L) == [1, 1, 1, 5]
    assert linalg.det(L) == 5


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 6), st.booleans())
def test_reduced_laplacian_inverse_nonnegative(seed, n, directed):
    L = random_graph(seed, n, directed=directed).reduced_laplacian()
    inv = linalg.inverse(L)
    assert all(v >= 0 for row in inv for v in row)
    assert linalg.det(L) > 0
