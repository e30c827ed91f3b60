"""Nonnegative integer matrices with named, ordered index sets.

Entries are Python ints, so arithmetic is exact at any size. Index sets are
tuples of distinct string labels; their order is part of the value and
drives every "canonical" choice made elsewhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch, LabelCollision, NotSquare, SchemaError

IndexSet = tuple  # tuple[str, ...]; non-empty, labels pairwise distinct

LEFT_PREFIX = "L:"
RIGHT_PREFIX = "R:"


def index_set(labels: Iterable) -> IndexSet:
    labels = tuple(str(x) for x in labels)
    if not labels:
        raise DimensionMismatch("index set must be non-empty")
    if len(set(labels)) != len(labels):
        raise LabelCollision(f"duplicate labels in index set {labels!r}")
    return labels


def default_labels(n: int) -> IndexSet:
    return tuple(str(i) for i in range(n))


@dataclass(frozen=True)
class NonnegMatrix:
    rows: IndexSet
    cols: IndexSet
    entries: tuple  # tuple[tuple[int, ...], ...], row-major

    def __post_init__(self):
        object.__setattr__(self, "rows", index_set(self.rows))
        object.__setattr__(self, "cols", index_set(self.cols))
        entries = tuple(tuple(row) for row in self.entries)
        if len(entries) != len(self.rows):
            raise DimensionMismatch(
                f"{len(entries)} entry rows for {len(self.rows)} row labels")
        for row in entries:
            if len(row) != len(self.cols):
                raise DimensionMismatch(
                    f"entry row of length {len(row)} for {len(self.cols)} column labels")
            for x in row:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise TypeError(f"matrix entries must be int, got {x!r}")
                if x < 0:
                    raise ValueError(f"negative entry {x}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[int]], rows=None, cols=None) -> "NonnegMatrix":
        data = [list(r) for r in data]
        n = len(data)
        k = len(data[0]) if data else 0
        rows = default_labels(n) if rows is None else rows
        cols = default_labels(k) if cols is None else cols
        return cls(tuple(rows), tuple(cols), tuple(tuple(r) for r in data))

    @classmethod
    def identity(cls, labels) -> "NonnegMatrix":
        labels = index_set(labels)
        n = len(labels)
        return cls(labels, labels,
                   tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows, cols) -> "NonnegMatrix":
        rows, cols = index_set(rows), index_set(cols)
        return cls(rows, cols, tuple((0,) * len(cols) for _ in rows))

    @property
    def shape(self) -> tuple:
        return len(self.rows), len(self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def entry_sum(self) -> int:
        return sum(sum(r) for r in self.entries)

    def max_entry(self) -> int:
        return max(max(r) for r in self.entries)

    def row_index(self, label) -> int:
        return self.rows.index(label)

    def col_index(self, label) -> int:
        return self.cols.index(label)

    def __getitem__(self, key) -> int:
        v, w = key
        return self.entries[self.rows.index(v)][self.cols.index(w)]

    def __matmul__(self, other: "NonnegMatrix") -> "NonnegMatrix":
        return multiply(self, other)

    def __repr__(self):
        return f"NonnegMatrix({[list(r) for r in self.entries]}, rows={list(self.rows)}, cols={list(self.cols)})"

    def tolist(self) -> list:
        return [list(r) for r in self.entries]

    def transpose(self) -> "NonnegMatrix":
        return NonnegMatrix(self.cols, self.rows, tuple(zip(*self.entries)))

    def relabel(self, rows=None, cols=None) -> "NonnegMatrix":
        return NonnegMatrix(self.rows if rows is None else tuple(rows),
                            self.cols if cols is None else tuple(cols),
                            self.entries)

    def prefixed(self, row_prefix: str, col_prefix: str) -> "NonnegMatrix":
        return self.relabel(tuple(row_prefix + v for v in self.rows),
                            tuple(col_prefix + w for w in self.cols))


def multiply(M: NonnegMatrix, N: NonnegMatrix) -> NonnegMatrix:
    if M.cols != N.rows:
        raise DimensionMismatch(
            f"cannot multiply: inner index sets {M.cols!r} and {N.rows!r} differ")
    ncols = list(zip(*N.entries))
    entries = tuple(
        tuple(sum(a * b for a, b in zip(row, col)) for col in ncols)
        for row in M.entries)
    return NonnegMatrix(M.rows, N.cols, entries)


def power(M: NonnegMatrix, k: int) -> NonnegMatrix:
    """Exact ``k``-th power of a square matrix, ``k >= 1``."""
    if not M.is_square:
        raise NotSquare(f"matrix with rows {M.rows!r} and cols {M.cols!r} is not square")
    if k < 1:
        raise ValueError("power requires k >= 1")
    result = None
    base = M
    while k:
        if k & 1:
            result = base if result is None else multiply(result, base)
        k >>= 1
        if k:
            base = multiply(base, base)
    return result


def is_essential(M: NonnegMatrix) -> bool:
    """No zero rows and no zero columns."""
    return all(any(r) for r in M.entries) and all(any(c) for c in zip(*M.entries))


def block_assemble(A: NonnegMatrix, B: NonnegMatrix, R: NonnegMatrix, S: NonnegMatrix,
                   prefixes=(LEFT_PREFIX, RIGHT_PREFIX)):
    """Return ``(C, D)`` with ``C = diag(A, B)`` and ``D = [[0, R], [S, 0]]``.

    Both live over the disjoint union of the index sets of ``A`` and ``B``, with
    the ``A`` labels first. Labels are disambiguated with ``prefixes``; pass
    ``prefixes=None`` to keep them as they are, in which case overlapping index
    sets raise :class:`LabelCollision`.
    """
    if not A.is_square:
        raise NotSquare("A is not square")
    if not B.is_square:
        raise NotSquare("B is not square")
    if R.rows != A.rows or R.cols != B.rows:
        raise DimensionMismatch("R must be indexed by V x W")
    if S.rows != B.rows or S.cols != A.rows:
        raise DimensionMismatch("S must be indexed by W x V")
    lp, rp = prefixes if prefixes is not None else ("", "")
    V = tuple(lp + v for v in A.rows)
    W = tuple(rp + w for w in B.rows)
    if set(V) & set(W):
        raise LabelCollision(f"index sets share labels {sorted(set(V) & set(W))!r}")
    n, k = len(V), len(W)
    C = [[0] * (n + k) for _ in range(n + k)]
    D = [[0] * (n + k) for _ in range(n + k)]
    for i in range(n):
        for j in range(n):
            C[i][j] = A.entries[i][j]
        for j in range(k):
            D[i][n + j] = R.entries[i][j]
    for i in range(k):
        for j in range(k):
            C[n + i][n + j] = B.entries[i][j]
        for j in range(n):
            D[n + i][j] = S.entries[i][j]
    labels = V + W
    return NonnegMatrix.from_rows(C, labels, labels), NonnegMatrix.from_rows(D, labels, labels)


# --- JSON -----------------------------------------------------------------

def matrix_to_json(M: NonnegMatrix) -> dict:
    return {"rows": list(M.rows), "cols": list(M.cols),
            "entries": [[str(x) for x in row] for row in M.entries]}


def _parse_entry(x, field):
    if isinstance(x, bool):
        raise SchemaError(field, "boolean is not a matrix entry")
    if isinstance(x, int):
        value = x
    elif isinstance(x, str) and x.strip().isdigit():
        value = int(x)
    else:
        raise SchemaError(field, f"expected a nonnegative decimal string, got {x!r}")
    if value < 0:
        raise SchemaError(field, "entry is negative")
    return value


def matrix_from_json(obj, field="matrix") -> NonnegMatrix:
    """Parse the matrix schema. Bare lists of rows are accepted too."""
    if isinstance(obj, list):
        obj = {"entries": obj}
    if not isinstance(obj, dict):
        raise SchemaError(field, "expected an object with rows/cols/entries")
    entries = obj.get("entries")
    if not isinstance(entries, list) or not entries or not all(isinstance(r, list) for r in entries):
        raise SchemaError(f"{field}.entries", "expected a non-empty list of rows")
    data = [[_parse_entry(x, f"{field}.entries[{i}][{j}]") for j, x in enumerate(row)]
            for i, row in enumerate(entries)]
    rows = obj.get("rows", default_labels(len(data)))
    cols = obj.get("cols", default_labels(len(data[0])))
    for name, labels in (("rows", rows), ("cols", cols)):
        if not isinstance(labels, list | tuple) or not all(isinstance(x, str) for x in labels):
            raise SchemaError(f"{field}.{name}", "expected a list of string labels")
    if any(len(r) != len(cols) for r in data) or len(data) != len(rows):
        raise SchemaError(f"{field}.entries", "shape does not match the row/column labels")
    try:
        return NonnegMatrix.from_rows(data, rows, cols)
    except LabelCollision as exc:
        raise SchemaError(field, str(exc)) from exc
