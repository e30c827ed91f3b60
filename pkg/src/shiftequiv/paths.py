"""Edge sets of matrices and composable path spaces built from them.

For a matrix ``F`` over ``V x W`` the edge set is
``{(v, w, n) : 0 <= n < F[v, w]}``. A path space is given by a list of
factors ``[M1, ..., Mk]`` whose inner index sets agree; its elements are the
edge sequences ``e1 ... ek`` with ``e_i`` an edge of ``M_i`` and
``range(e_i) == source(e_{i+1})``.

Enumeration order is fixed once here and every other module relies on it:
edges are ordered by (row position, column position, ordinal) in the
matrix's own index order, and paths lexicographically by their edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

from .errors import NonComposableFactors, NotSquare, SchemaError
from .matrix import NonnegMatrix, matrix_from_json, matrix_to_json, multiply


class Edge(NamedTuple):
    source: str
    range: str
    ordinal: int


Path = tuple  # tuple[Edge, ...], non-empty


def path_source(p: Path) -> str:
    return p[0].source


def path_range(p: Path) -> str:
    return p[-1].range


def block_of(p: Path) -> tuple:
    return p[0].source, p[-1].range


def edge_set(F: NonnegMatrix) -> list:
    """All edges of ``F`` in canonical order."""
    return [Edge(v, w, n)
            for v, row in zip(F.rows, F.entries)
            for w, count in zip(F.cols, row)
            for n in range(count)]


@dataclass(frozen=True)
class PathSpaceSpec:
    factors: tuple  # tuple[NonnegMatrix, ...]
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise NonComposableFactors("a path space needs at least one factor")
        for i, (M, N) in enumerate(zip(factors, factors[1:])):
            if M.cols != N.rows:
                raise NonComposableFactors(
                    f"factor {i} has columns {M.cols!r} but factor {i + 1} has rows {N.rows!r}")
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "_hash", hash(factors))

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.factors)

    def __add__(self, other: "PathSpaceSpec") -> "PathSpaceSpec":
        return PathSpaceSpec(self.factors + other.factors)

    def __repr__(self):
        return f"PathSpaceSpec({len(self.factors)} factors)"

    @property
    def rows(self):
        return self.factors[0].rows

    @property
    def cols(self):
        return self.factors[-1].cols

    def product_matrix(self) -> NonnegMatrix:
        result = self.factors[0]
        for M in self.factors[1:]:
            result = multiply(result, M)
        return result

    def paths(self) -> list:
        return path_space(self)

    def contains(self, p) -> bool:
        if not isinstance(p, tuple) or len(p) != len(self.factors):
            return False
        prev = None
        for e, F in zip(p, self.factors):
            if not isinstance(e, tuple) or len(e) != 3:
                return False
            v, w, n = e
            if v not in F.rows or w not in F.cols or not isinstance(n, int):
                return False
            if not 0 <= n < F[v, w]:
                return False
            if prev is not None and prev != v:
                return False
            prev = w
        return True


def spec(*factors: NonnegMatrix) -> PathSpaceSpec:
    return PathSpaceSpec(tuple(factors))


def repeat(M: NonnegMatrix, k: int) -> tuple:
    return (M,) * k


@lru_cache(maxsize=4096)
def _out_edges(F: NonnegMatrix) -> dict:
    out = {v: [] for v in F.rows}
    for e in edge_set(F):
        out[e.source].append(e)
    return out


@lru_cache(maxsize=1024)
def _path_space(spec: PathSpaceSpec) -> tuple:
    layers = [_out_edges(F) for F in spec.factors]
    result = [(e,) for e in edge_set(spec.factors[0])]
    for out in layers[1:]:
        result = [p + (e,) for p in result for e in out[p[-1].range]]
    return tuple(result)


def path_space(spec: PathSpaceSpec) -> list:
    """All paths of ``spec`` in lexicographic order."""
    return list(_path_space(spec))


@lru_cache(maxsize=1024)
def path_index(spec: PathSpaceSpec) -> dict:
    """Position of each path in the canonical enumeration."""
    return {p: i for i, p in enumerate(_path_space(spec))}


def blocks(spec: PathSpaceSpec) -> dict:
    """Paths grouped by (source, range), each group in enumeration order."""
    out = {}
    for p in _path_space(spec):
        out.setdefault(block_of(p), []).append(p)
    return out


def power_identification(C: NonnegMatrix, n: int):
    """The fixed identification of the edges of ``C**n`` with ``n``-paths of ``C``.

    In every (v, w) block the k-th edge of the power matrix goes to the k-th
    ``n``-path from v to w.
    """
    from .matrix import power
    from .pathiso import make_canonical

    if not C.is_square:
        raise NotSquare("power_identification needs a square matrix")
    return make_canonical(spec(power(C, n)), PathSpaceSpec(repeat(C, n)))


# --- JSON -----------------------------------------------------------------

def path_to_json(p: Path) -> list:
    return [[e.source, e.range, e.ordinal] for e in p]


def path_from_json(obj, field="path") -> Path:
    if not isinstance(obj, list) or not obj:
        raise SchemaError(field, "expected a non-empty list of edges")
    edges = []
    for i, e in enumerate(obj):
        if (not isinstance(e, list) or len(e) != 3 or not isinstance(e[0], str)
                or not isinstance(e[1], str) or not isinstance(e[2], int) or isinstance(e[2], bool)):
            raise SchemaError(f"{field}[{i}]", "expected [source, range, ordinal]")
        edges.append(Edge(e[0], e[1], e[2]))
    return tuple(edges)


def spec_to_json(s: PathSpaceSpec) -> list:
    return [matrix_to_json(F) for F in s.factors]


def spec_from_json(obj, field="spec") -> PathSpaceSpec:
    if not isinstance(obj, list) or not obj:
        raise SchemaError(field, "expected a non-empty list of matrices")
    factors = tuple(matrix_from_json(m, f"{field}[{i}]") for i, m in enumerate(obj))
    try:
        return PathSpaceSpec(factors)
    except NonComposableFactors as exc:
        raise SchemaError(field, str(exc)) from exc
