"""Exact linear algebra: echelon forms, kernels, subspace lattice, eigenspaces."""

import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lefper.rational_linalg import (
    DimensionMismatchError,
    Matrix,
    Subspace,
    integer_eigenspaces,
    intersect,
    inverse,
    kernel,
    rank,
    rref,
    solve_right,
    subspace_sum,
)


def M(rows):
    return Matrix.from_rows(rows)


# ----------------------------------------------------------------------- rref

def test_rref_zero_matrix():
    z = Matrix.zero(2, 2)
    red, rk, _ = rref(z)
    assert red == z
    assert rk == 0


def test_rref_identity():
    i3 = Matrix.identity(3)
    red, rk, _ = rref(i3)
    assert red == i3
    assert rk == 3


def test_rref_rank_one():
    # hand row reduction: R2 <- R2 - 2 R1
    red, rk, _ = rref(M([[1, 2], [2, 4]]))
    assert red == M([[1, 2], [0, 0]])
    assert rk == 1


def test_rref_fractional_pivot():
    red, rk, _ = rref(M([[Q(1, 2), 1], [1, 3]]))
    assert rk == 2
    assert red == Matrix.identity(2)


# --------------------------------------------------------------------- kernel

def test_kernel_injective():
    assert kernel(Matrix.identity(2)).dim == 0


def test_kernel_zero_map():
    k = kernel(Matrix.zero(2, 2))
    assert k == Subspace.full(2)


def test_kernel_rank_one():
    # hand solve: x + 2y = 0 -> span{(-2, 1)}
    k = kernel(M([[1, 2], [2, 4]]))
    assert k.dim == 1
    assert k.contains([-2, 1])
    assert not k.contains([1, 0])


# ------------------------------------------------------------ intersect / sum

def test_intersect_idempotent():
    s = Subspace.from_spanning([[1, 1, 0], [0, 0, 1]], 3)
    assert intersect(s, s) == s
    assert subspace_sum(s, s) == s


def test_complementary_axes():
    x_axis = Subspace.from_spanning([[1, 0]], 2)
    y_axis = Subspace.from_spanning([[0, 1]], 2)
    assert intersect(x_axis, y_axis).is_zero()
    assert subspace_sum(x_axis, y_axis) == Subspace.full(2)


def test_intersect_hand_solved():
    # hand solve: a(1,1,0)+b(0,0,1) = c(1,1,1)  =>  a=b=c
    s1 = Subspace.from_spanning([[1, 1, 0], [0, 0, 1]], 3)
    s2 = Subspace.from_spanning([[1, 1, 1]], 3)
    got = intersect(s1, s2)
    assert got == Subspace.from_spanning([[1, 1, 1]], 3)


def test_ambient_mismatch_rejected():
    with pytest.raises(DimensionMismatchError):
        intersect(Subspace.full(2), Subspace.full(3))
    with pytest.raises(DimensionMismatchError):
        subspace_sum(Subspace.full(2), Subspace.full(3))


def test_canonical_equality():
    # same plane described by two different spanning sets
    s1 = Subspace.from_spanning([[1, 0, 1], [0, 1, 1]], 3)
    s2 = Subspace.from_spanning([[1, 1, 2], [1, -1, 0]], 3)
    assert s1 == s2
    assert s1.basis.entries == s2.basis.entries


# ----------------------------------------------------------------- eigenspaces

def test_eigenspaces_identity():
    pairs, complete = integer_eigenspaces(Matrix.identity(3), [0, 1])
    assert complete
    assert [(lam, s.dim) for lam, s in pairs] == [(1, 3)]


def test_eigenspaces_diagonal_readout():
    m = M([[2, 0, 0], [0, 2, 0], [0, 0, 5]])
    pairs, complete = integer_eigenspaces(m, [2, 5])
    assert complete
    assert [(lam, s.dim) for lam, s in pairs] == [(2, 2), (5, 1)]


def test_eigenspaces_jordan_block_incomplete():
    j2 = M([[0, 1], [0, 0]])
    pairs, complete = integer_eigenspaces(j2, [0])
    assert not complete
    assert [(lam, s.dim) for lam, s in pairs] == [(0, 1)]


def test_eigenspaces_empty_result_is_valid():
    pairs, complete = integer_eigenspaces(Matrix.identity(2), [5])
    assert pairs == [] and not complete


# ------------------------------------------------------------------ utilities

def test_solve_right_and_inverse():
    a = M([[2, 1], [1, 1]])
    x = solve_right(a, [3, 2])
    assert x == (Q(1), Q(1))
    assert inverse(a) @ a == Matrix.identity(2)
    assert solve_right(M([[1, 0], [1, 0]]), [0, 1]) is None


# ------------------------------------------------------------------ properties

small_entries = st.integers(min_value=-6, max_value=6)


def matrices(max_dim=5):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(
                st.lists(small_entries, min_size=c, max_size=c),
                min_size=r, max_size=r).map(Matrix.from_rows)))


@given(matrices())
@settings(max_examples=120, deadline=None)
def test_rank_nullity(m):
    assert rank(m) + kernel(m).dim == m.cols


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_rref_idempotent(m):
    red = rref(m).matrix
    assert rref(red).matrix == red


def _random_subspace(rng, n):
    vecs = [[rng.randint(-4, 4) for _ in range(n)]
            for _ in range(rng.randint(0, n))]
    return Subspace.from_spanning(vecs, n)


def test_modular_law_on_random_pairs():
    rng = random.Random(20240817)
    for _ in range(80):
        n = rng.randint(1, 6)
        a = _random_subspace(rng, n)
        b = _random_subspace(rng, n)
        assert a.dim + b.dim == subspace_sum(a, b).dim + intersect(a, b).dim


def test_kernel_vectors_are_killed():
    rng = random.Random(7)
    for _ in range(40):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        m = Matrix.from_rows([[rng.randint(-5, 5) for _ in range(c)]
                              for _ in range(r)])
        for v in kernel(m).basis_vectors():
            assert all(x == 0 for x in m.apply(v))
