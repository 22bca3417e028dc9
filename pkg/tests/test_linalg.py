import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compact_knapsack.intmatrix import IntMatrix
from compact_knapsack.linalg import NoIntegerSolution, kernel_basis, snf, solve_integer_system

from oracles import brute_force_solutions, elementary_divisors, is_primitive, matvec, rational_rank


def small_matrices(max_rows=4, max_cols=5, bound=6):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n),
                               min_size=m, max_size=m)))


def check_snf(A):
    dec = snf(A)
    M = IntMatrix(A)
    assert dec.P @ M @ dec.Q == dec.D
    assert abs(dec.P.determinant()) == 1
    assert abs(dec.Q.determinant()) == 1
    for i in range(dec.D.rows):
        for j in range(dec.D.cols):
            if i != j:
                assert dec.D[i, j] == 0
    lams = dec.divisors
    assert all(v > 0 for v in lams)
    assert all(b % a == 0 for a, b in zip(lams, lams[1:]))
    assert len(lams) == dec.rank
    return dec


@settings(max_examples=150, deadline=None)
@given(small_matrices())
def test_snf_identities(A):
    check_snf(A)


@settings(max_examples=100, deadline=None)
@given(small_matrices(max_rows=3, max_cols=4))
def test_snf_matches_determinantal_divisors(A):
    dec = snf(A)
    assert list(dec.divisors) == elementary_divisors(A)
    assert dec.rank == rational_rank(A)


def test_snf_known_example():
    A = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    assert snf(A).divisors == (2, 6, 12)


def test_snf_zero_matrix():
    dec = check_snf([[0, 0], [0, 0]])
    assert dec.rank == 0 and dec.divisors == ()


def test_snf_rejects_empty():
    with pytest.raises(ValueError):
        snf([])


@settings(max_examples=100, deadline=None)
@given(small_matrices(max_rows=3, max_cols=5))
def test_kernel_basis_is_saturated(A):
    ker = kernel_basis(A)
    assert len(ker) == len(A[0]) - rational_rank(A)
    for v in ker:
        assert all(x == 0 for x in matvec(A, v))
    assert is_primitive(ker)


def test_kernel_of_full_rank_square_is_trivial():
    assert kernel_basis([[2, 1], [1, 1]]) == []


@settings(max_examples=80, deadline=None)
@given(small_matrices(max_rows=2, max_cols=3, bound=4), st.lists(st.integers(-6, 6), min_size=2, max_size=2))
def test_solve_agrees_with_brute_force(A, rhs):
    b = rhs[:len(A)]
    found = brute_force_solutions(A, b, 6)
    try:
        sol = solve_integer_system(A, b)
    except NoIntegerSolution:
        # no integer solution at all, so certainly none in the box
        assert not found
        return
    assert matvec(A, sol.particular) == tuple(b)
    for v in sol.free_basis:
        assert all(x == 0 for x in matvec(A, v))
    # every boxed solution is the particular one plus an integer combination of the free basis
    for x in found:
        diff = [a - c for a, c in zip(x, sol.particular)]
        if not sol.free_basis:
            assert not any(diff)
        else:
            solve_integer_system(IntMatrix.from_columns(sol.free_basis), diff)


def test_solve_detects_divisibility_obstruction():
    with pytest.raises(NoIntegerSolution):
        solve_integer_system([[2, 4]], [3])
    with pytest.raises(NoIntegerSolution):
        solve_integer_system([[1, 1], [1, 1]], [1, 2])


def test_solve_rhs_length_checked():
    with pytest.raises(ValueError):
        solve_integer_system([[1, 2]], [1, 2])


def test_solve_large_entries():
    rng = random.Random(5)
    A = [[rng.randint(1, 2**10) for _ in range(8)] for _ in range(3)]
    x = [rng.randint(2**79, 2**80) for _ in range(8)]
    b = matvec(A, x)
    sol = solve_integer_system(A, b)
    assert matvec(A, sol.particular) == b
    assert sol.free_count == 5
