import random
from math import gcd

from hypothesis import given, settings, strategies as st

from eqres.intlinalg import (
    gauss_reduce_2d,
    gfp_rank,
    hnf_basis,
    int_det,
    kernel_basis,
    mat_vec,
    row_hnf,
    smith_normal_form,
    solve_combination,
)

small_matrix = st.integers(min_value=1, max_value=4).flatmap(
    lambda n: st.integers(min_value=1, max_value=4).flatmap(
        lambda m: st.lists(
            st.lists(st.integers(min_value=-9, max_value=9), min_size=m, max_size=m),
            min_size=n, max_size=n)))


def test_hnf_known():
    A = [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]
    H = row_hnf(A)
    assert H == [[2, 0, 120], [0, 2, 20], [0, 0, 156]]
    # lattice determinant is preserved
    assert abs(int_det(H)) == abs(int_det(A)) == 624


@settings(max_examples=60)
@given(small_matrix)
def test_hnf_transform_unimodular(A):
    H, U = row_hnf(A, with_transform=True)
    n = len(A)
    assert abs(int_det(U)) == 1
    # U * A = H
    prod = [[sum(U[i][t] * A[t][j] for t in range(n)) for j in range(len(A[0]))]
            for i in range(n)]
    assert prod == H


@settings(max_examples=60)
@given(small_matrix)
def test_kernel_annihilates(A):
    for x in kernel_basis(A):
        assert all(v == 0 for v in mat_vec(A, x))


def test_kernel_full_and_trivial():
    assert kernel_basis([[0, 0], [0, 0]]) == [[1, 0], [0, 1]]
    assert kernel_basis([[1, 0], [0, 1]]) == []


def test_kernel_rank_nullity():
    A = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    ker = kernel_basis(A)
    assert len(ker) == 1
    assert all(v == 0 for v in mat_vec(A, ker[0]))


def test_snf_known_diagonal():
    assert smith_normal_form([[2, 0], [0, 3]]) == [1, 6]
    assert smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]
    assert smith_normal_form([[0, 0], [0, 0]]) == []


@settings(max_examples=60)
@given(small_matrix)
def test_snf_divisibility_chain(A):
    d = smith_normal_form(A)
    assert all(x > 0 for x in d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))


@settings(max_examples=40)
@given(small_matrix)
def test_snf_product_matches_gcd_of_minors(A):
    # d_1 equals the gcd of all entries
    d = smith_normal_form(A)
    g = 0
    for row in A:
        for x in row:
            g = gcd(g, x)
    if g == 0:
        assert d == []
    else:
        assert d[0] == g


def test_gfp_rank():
    assert gfp_rank([[1, 2], [2, 4]], 5) == 1
    assert gfp_rank([[1, 2], [2, 4]], 3) == 1
    assert gfp_rank([[2, 0], [0, 2]], 2) == 0
    assert gfp_rank([[1, 0], [0, 1]], 7) == 2


def test_solve_combination():
    x = solve_combination([6, 10, 15], 1)
    assert sum(a * b for a, b in zip(x, [6, 10, 15])) == 1
    assert solve_combination([4, 6], 3) is None
    assert solve_combination([0, 0], 0) == [0, 0]
    assert solve_combination([0, 0], 2) is None
    x = solve_combination([-4, 6], 2)
    assert -4 * x[0] + 6 * x[1] == 2


def test_gauss_reduction_shortest():
    rng = random.Random(7)
    for _ in range(200):
        b1 = (rng.randint(-20, 20), rng.randint(-20, 20))
        b2 = (rng.randint(-20, 20), rng.randint(-20, 20))
        if b1[0] * b2[1] - b1[1] * b2[0] == 0:
            continue
        v1, v2 = gauss_reduce_2d(b1, b2)
        # exhaustive check over small coefficient window
        best = min(
            (a * b1[0] + b * b2[0]) ** 2 + (a * b1[1] + b * b2[1]) ** 2
            for a in range(-25, 26) for b in range(-25, 26)
            if (a, b) != (0, 0)
        )
        assert v1[0] ** 2 + v1[1] ** 2 == best


def test_int_det():
    assert int_det([[1, 2], [3, 4]]) == -2
    assert int_det([[2, 0, 0], [0, 3, 0], [0, 0, 4]]) == 24
    assert int_det([[1, 1], [1, 1]]) == 0
