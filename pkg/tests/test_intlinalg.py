"""Integer linear algebra against sympy as an independent oracle."""

import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors as sympy_invariant_factors
from sympy.polys.domains import ZZ

from shiftequiv import intlinalg as la


def int_matrices(max_dim=4, lo=-4, hi=4, square=False):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_dim))
        k = n if square else draw(st.integers(1, max_dim))
        return draw(st.lists(st.lists(st.integers(lo, hi), min_size=k, max_size=k),
                             min_size=n, max_size=n))
    return build()


@given(int_matrices(square=True))
def test_charpoly_matches_sympy(M):
    t = sympy.Symbol("t")
    expected = sympy.Poly(sympy.Matrix(M).charpoly(t).as_expr(), t).all_coeffs()
    assert la.charpoly(M) == [int(c) for c in expected]


@given(int_matrices(square=True))
def test_det_matches_sympy(M):
    assert la.det(M) == sympy.Matrix(M).det()


@given(int_matrices())
def test_rank_matches_sympy(M):
    assert la.rank(M) == sympy.Matrix(M).rank()


@given(int_matrices())
def test_smith_normal_form_matches_sympy(M):
    D, U, Ui, V, Vi = la.smith_normal_form(M)
    n, k = len(M), len(M[0])
    assert la.matmul(la.matmul(U, M), V) == D
    assert la.matmul(U, Ui) == la.identity(n) and la.matmul(V, Vi) == la.identity(k)
    assert all(D[i][j] == 0 for i in range(n) for j in range(k) if i != j)
    ours = la.invariant_factors(M)
    theirs = [abs(int(x)) for x in sympy_invariant_factors(sympy.Matrix(M), domain=ZZ)]
    theirs += [0] * (len(ours) - len(theirs))
    assert ours == theirs
    nonzero = [d for d in ours if d]
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))


@given(int_matrices())
def test_kernel_basis(M):
    K = la.kernel_basis(M)
    assert len(K) == len(M[0]) - la.rank(M)
    for v in K:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in M)


def test_small_snf_examples():
    assert la.invariant_factors([[-2]]) == [2]
    assert la.invariant_factors([[2, 4], [6, 8]]) == [2, 4]
    assert la.invariant_factors([[0, 0], [0, 0]]) == [0, 0]
