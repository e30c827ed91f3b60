import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shiftequiv.errors import DimensionMismatch, LabelCollision, NotSquare, SchemaError
from shiftequiv.matrix import (NonnegMatrix, block_assemble, is_essential, matrix_from_json,
                               matrix_to_json, multiply, power)

from strategies import matrices, square_matrices

M = NonnegMatrix.from_rows


def test_multiply_examples():
    assert multiply(M([[1], [1]]), M([[1, 1]])) == M([[1, 1], [1, 1]])
    assert multiply(M([[1, 1]]), M([[1], [1]])) == M([[2]])
    A = M([[1, 2], [0, 3]])
    assert multiply(NonnegMatrix.identity(A.rows), A) == A


def test_multiply_needs_matching_index_sets():
    with pytest.raises(DimensionMismatch):
        multiply(M([[1, 1]]), M([[1, 1]]))
    relabelled = M([[1], [1]], rows=("x", "y"))
    with pytest.raises(DimensionMismatch):
        multiply(M([[1, 1]]), relabelled)


def test_power_examples():
    assert power(M([[1, 1], [1, 0]]), 2) == M([[2, 1], [1, 1]])
    assert power(M([[2]]), 3) == M([[8]])
    A = M([[0, 1], [1, 1]])
    assert power(A, 1) == A
    with pytest.raises(NotSquare):
        power(M([[1, 2]]), 2)


def test_power_is_exact_beyond_machine_words():
    assert power(M([[3]]), 90).entries[0][0] == 3 ** 90


def test_is_essential_examples():
    assert is_essential(M([[1, 1], [1, 0]]))
    assert not is_essential(M([[0, 0], [1, 1]]))
    assert not is_essential(M([[1, 0], [1, 0]]))


def test_entries_are_validated():
    with pytest.raises(ValueError):
        M([[1, -1]])
    with pytest.raises(DimensionMismatch):
        NonnegMatrix(("0", "1"), ("0",), ((1,),))
    with pytest.raises(LabelCollision):
        M([[1, 1], [1, 1]], rows=("a", "a"))


def test_block_assemble_examples():
    C, D = block_assemble(M([[2]]), M([[2]]), M([[1]]), M([[2]]))
    assert C.tolist() == [[2, 0], [0, 2]]
    assert D.tolist() == [[0, 1], [2, 0]]
    assert C.rows == ("L:0", "R:0")

    one = M([[1]])
    C, D = block_assemble(one, one, one, one)
    assert C.tolist() == [[1, 0], [0, 1]]
    assert D.tolist() == [[0, 1], [1, 0]]

    C, D = block_assemble(M([[1, 1], [1, 1]]), M([[2]]), M([[1], [1]]), M([[1, 1]]))
    assert multiply(D, D) == power(C, 1)


def test_block_assemble_label_collision():
    one = M([[1]])
    with pytest.raises(LabelCollision):
        block_assemble(one, one, one, one, prefixes=None)


@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.data())
def test_multiply_is_associative(a, b, c, d, data):
    X = data.draw(matrices(a, b, 3))
    Y = data.draw(matrices(b, c, 3))
    Z = data.draw(matrices(c, d, 3))
    assert multiply(multiply(X, Y), Z) == multiply(X, multiply(Y, Z))


@given(square_matrices(max_entry=3), st.integers(1, 4), st.integers(1, 4))
def test_power_adds_exponents(A, j, k):
    assert power(A, j + k) == multiply(power(A, j), power(A, k))


def _is_witness(A, B, R, S, m):
    return (power(A, m) == multiply(R, S) and power(B, m) == multiply(S, R)
            and multiply(A, R) == multiply(R, B) and multiply(S, A) == multiply(B, S))


def _block_equations(A, B, R, S, m):
    C, D = block_assemble(A, B, R, S)
    return multiply(C, D) == multiply(D, C) and multiply(D, D) == power(C, m)


@given(st.integers(1, 2), st.integers(1, 2), st.integers(1, 2), st.data())
def test_block_equations_match_witness_equations(n, k, m, data):
    R = data.draw(matrices(n, k, 2))
    S = data.draw(matrices(k, n, 2))
    if data.draw(st.booleans()):
        A, B = multiply(R, S), multiply(S, R)
        m = 1
    else:
        A = data.draw(matrices(n, n, 2))
        B = data.draw(matrices(k, k, 2))
    assert _block_equations(A, B, R, S, m) == _is_witness(A, B, R, S, m)


def test_block_equations_on_a_lag_two_witness():
    A = M([[1, 1], [1, 1]])
    B = M([[2]])
    R, S = M([[1], [1]]), M([[2, 2]])
    assert _is_witness(A, B, R, S, 2)
    assert _block_equations(A, B, R, S, 2)
    assert not _block_equations(A, B, R, S, 1)


def test_json_roundtrip_uses_decimal_strings():
    A = M([[3 ** 50, 0], [1, 2]], rows=("a", "b"), cols=("a", "b"))
    payload = matrix_to_json(A)
    assert payload["entries"][0][0] == str(3 ** 50)
    assert matrix_from_json(json.loads(json.dumps(payload))) == A
    assert matrix_from_json([[1, 2], [3, 4]]) == M([[1, 2], [3, 4]])


def test_json_errors_name_the_field():
    with pytest.raises(SchemaError) as err:
        matrix_from_json({"entries": [["1", "-2"]]}, "pair.A")
    assert err.value.field == "pair.A.entries[0][1]"
    with pytest.raises(SchemaError):
        matrix_from_json({"entries": [[1, 2], [3]]})
