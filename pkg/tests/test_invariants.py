import pytest
import sympy
from hypothesis import given

from shiftequiv import intlinalg as la
from shiftequiv.errors import NotSquare
from shiftequiv.invariants import (INCONCLUSIVE, NOT_SE, NOT_SSE, bowen_franks,
                                   char_poly_away_from_zero, det_i_minus, dimension_pair_data,
                                   format_poly, report_to_json, se_obstruction_report,
                                   unimodular_conjugacy)
from shiftequiv.matrix import NonnegMatrix
from shiftequiv.search import SearchBudget, search_elementary

from corpus import steps
from strategies import elementary_steps, essential_matrices

M = NonnegMatrix.from_rows
A1 = M([[1, 1], [1, 1]])
FIB = M([[1, 1], [1, 0]])


def test_char_poly_examples():
    assert char_poly_away_from_zero(A1) == (1, -2)
    assert format_poly(char_poly_away_from_zero(A1)) == "t - 2"
    assert char_poly_away_from_zero(M([[2]])) == (1, -2)
    assert char_poly_away_from_zero(FIB) == (1, -1, -1)
    assert format_poly((1, -1, -1)) == "t^2 - t - 1"
    with pytest.raises(NotSquare):
        char_poly_away_from_zero(M([[1, 1]]))


def test_bowen_franks_examples():
    assert bowen_franks(M([[3]])).divisors == (2,)
    assert str(bowen_franks(M([[3]]))) == "Z/2"
    assert bowen_franks(M([[2]])).is_trivial
    assert bowen_franks(FIB).is_trivial
    assert bowen_franks(M([[1]])).free_rank == 1


def test_dimension_pair_examples():
    d = dimension_pair_data(M([[2]]))
    assert d.eventual_rank == 1 and d.action == ((2,),)
    d = dimension_pair_data(A1)
    assert d.eventual_rank == 1 and d.action == ((2,),) and d.basis == ((1, 1),)
    d = dimension_pair_data(FIB)
    assert d.eventual_rank == 2
    assert d.basis == ((1, 0), (0, 1)) and d.action == tuple(map(tuple, la.transpose(FIB.tolist())))


def test_report_examples():
    r = se_obstruction_report(M([[2]]), M([[4]]))
    assert r.verdict == NOT_SE
    assert "t - 2 vs t - 4" in r.reasons[0]
    A = M([[2, 1], [0, 1]])
    P = M([[0, 1], [1, 0]])
    conj = M([[1, 0], [1, 2]])  # P A P^-1
    assert conj == P @ A @ P
    assert se_obstruction_report(A, conj).verdict == INCONCLUSIVE
    r = se_obstruction_report(A1, M([[2]]))
    assert r.verdict == INCONCLUSIVE and r.conjugator == ((1,),)
    assert report_to_json(r)["verdict"] == INCONCLUSIVE


def test_bowen_franks_obstruction():
    X, Y = M([[1, 2], [2, 1]]), M([[2, 1], [3, 0]])
    assert char_poly_away_from_zero(X) == char_poly_away_from_zero(Y) == (1, -2, -3)
    assert str(bowen_franks(X)) == "Z/2 + Z/2" and str(bowen_franks(Y)) == "Z/4"
    r = se_obstruction_report(X, Y)
    assert r.verdict == NOT_SSE
    assert any("Bowen-Franks" in reason for reason in r.reasons)


def test_permuted_diagonal_is_inconclusive():
    assert se_obstruction_report(M([[2, 0], [0, 3]]), M([[3, 0], [0, 2]])).verdict == INCONCLUSIVE


@given(essential_matrices())
def test_report_on_itself_is_never_not_se(A):
    assert se_obstruction_report(A, A).verdict != NOT_SE


@given(elementary_steps())
def test_invariants_survive_an_elementary_step(data):
    A, B, _ = data
    assert bowen_franks(A) == bowen_franks(B)
    assert char_poly_away_from_zero(A) == char_poly_away_from_zero(B)
    assert (det_i_minus(A) > 0) == (det_i_minus(B) > 0)
    assert det_i_minus(A) == det_i_minus(B)
    assert dimension_pair_data(A).eventual_rank == dimension_pair_data(B).eventual_rank


def _coordinates(basis, y):
    """Integer coordinates of ``y`` in the lattice spanned by ``basis`` rows."""
    sol = sympy.Matrix(basis).T.solve(sympy.Matrix(y))
    assert all(x.is_integer for x in sol), "vector leaves the lattice"
    return [int(x) for x in sol]


def _induced(F, src, dst):
    """Matrix of ``F^T`` from the lattice ``src`` to the lattice ``dst`` (columns are images)."""
    Ft = la.transpose(F.tolist())
    images = [_coordinates(dst.basis, [sum(a * b for a, b in zip(row, v)) for row in Ft])
              for v in src.basis]
    return la.transpose(images)


def test_dimension_actions_are_intertwined_along_corpus_steps():
    for A, B, step in steps(60, seed=7):
        dA, dB = dimension_pair_data(A), dimension_pair_data(B)
        assert dA.eventual_rank == dB.eventual_rank
        X, Y = [list(map(list, d.action)) for d in (dA, dB)]
        Rm, Sm = _induced(step.R, dA, dB), _induced(step.S, dB, dA)
        assert la.matmul(Rm, X) == la.matmul(Y, Rm)
        assert la.matmul(Sm, Y) == la.matmul(X, Sm)
        assert la.matmul(Sm, Rm) == X and la.matmul(Rm, Sm) == Y


def test_lattice_actions_need_not_be_unimodularly_conjugate():
    # one elementary step apart, yet X - 2I has content 2 on one side and 4 on the other
    A, B = M([[2, 2], [0, 2]]), M([[2, 0], [4, 2]])
    step = search_elementary(A, B, SearchBudget()).witness
    assert step.source == A and step.target == B
    X, Y = dimension_pair_data(A).action, dimension_pair_data(B).action
    assert unimodular_conjugacy(X, Y, bound=3) is None
    assert se_obstruction_report(A, B).verdict == INCONCLUSIVE

