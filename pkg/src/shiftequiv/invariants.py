"""Computable invariants that can separate matrices up to SE or SSE.

A ``NotSE`` verdict is only issued on a proof (different nonzero spectra).
Everything else that differs is reported as an SSE obstruction, and agreement
on every computed invariant is ``Inconclusive``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import intlinalg as la
from .errors import NotSquare
from .matrix import NonnegMatrix, power

NOT_SE = "NotSE"
NOT_SSE = "NotSSEKnownObstruction"
INCONCLUSIVE = "Inconclusive"


def _require_square(A: NonnegMatrix):
    if not A.is_square:
        raise NotSquare("invariants are defined for square matrices")


def char_poly_away_from_zero(A: NonnegMatrix) -> tuple:
    """Characteristic polynomial with all factors of ``t`` removed.

    Coefficients are listed from the leading one down to the (nonzero)
    constant term: ``t^2 - t - 1`` is ``(1, -1, -1)``.
    """
    _require_square(A)
    coeffs = la.charpoly(A.tolist())
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def format_poly(coeffs, var="t") -> str:
    deg = len(coeffs) - 1
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        p = deg - i
        mono = "" if p == 0 else (var if p == 1 else f"{var}^{p}")
        mag = abs(c)
        body = (str(mag) if mono == "" else mono) if mag == 1 else f"{mag}{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    return " ".join([head] + [f"{s} {b}" for s, b in terms[1:]])


@dataclass(frozen=True)
class BowenFranksGroup:
    """``Z/d1 + ... + Z/dk + Z^free_rank`` with ``1 < d1 | d2 | ...``."""

    divisors: tuple
    free_rank: int

    @property
    def is_trivial(self) -> bool:
        return not self.divisors and self.free_rank == 0

    def __str__(self):
        parts = [f"Z/{d}" for d in self.divisors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def bowen_franks(A: NonnegMatrix) -> BowenFranksGroup:
    """Cokernel of ``I - A`` via Smith normal form."""
    _require_square(A)
    n = len(A.rows)
    M = [[int(i == j) - A.entries[i][j] for j in range(n)] for i in range(n)]
    diag = la.invariant_factors(M)
    return BowenFranksGroup(tuple(d for d in diag if d > 1), sum(1 for d in diag if d == 0))


def det_i_minus(A: NonnegMatrix) -> int:
    n = len(A.rows)
    return la.det([[int(i == j) - A.entries[i][j] for j in range(n)] for i in range(n)])


@dataclass(frozen=True)
class DimensionData:
    """The eventual image lattice of ``A^T`` and the action of ``A^T`` on it.

    ``basis`` rows are vectors in ``Z^V`` (Hermite normal form, so the basis is
    canonical); ``action[i][j]`` is the coefficient of ``basis[i]`` in
    ``A^T basis[j]``.
    """

    eventual_rank: int
    basis: tuple
    action: tuple


def dimension_pair_data(A: NonnegMatrix) -> DimensionData:
    _require_square(A)
    n = len(A.rows)
    At = power(A, n).transpose().tolist()
    D, _, Uinv, _, _ = la.smith_normal_form(At)
    r = sum(1 for i in range(n) if D[i][i])
    # Leading r columns of U^-1 span the saturation of the column space.
    sat = [[Uinv[i][j] for i in range(n)] for j in range(r)]
    H, pivots = la.hermite_rows(sat)
    AT = A.transpose().tolist()
    action = [[0] * r for _ in range(r)]
    for j, b in enumerate(H):
        y = [sum(AT[i][k] * b[k] for k in range(n)) for i in range(n)]
        for i, (h, p) in enumerate(zip(H, pivots)):
            q, rem = divmod(y[p], h[p])
            assert rem == 0, "image lattice not invariant"
            action[i][j] = q
            y = [a - q * c for a, c in zip(y, h)]
        assert not any(y), "vector outside the eventual image lattice"
    return DimensionData(r, tuple(tuple(b) for b in H), tuple(tuple(row) for row in action))


def unimodular_conjugacy(X, Y, bound: int = 2):
    """Search ``P`` in ``GL(r, Z)`` with ``P X = Y P`` among small combinations
    of an integral basis of all intertwiners. ``None`` if nothing is found,
    which proves nothing."""
    r = len(X)
    if r != len(Y):
        return None
    if r == 0:
        return ()
    # vec(P) with P[i][j] at index i*r + j; L(P) = P X - Y P.
    L = [[0] * (r * r) for _ in range(r * r)]
    for i in range(r):
        for j in range(r):
            row = i * r + j
            for k in range(r):
                L[row][i * r + k] += X[k][j]
                L[row][k * r + j] -= Y[i][k]
    K = la.kernel_basis(L)
    d = len(K)
    if d == 0:
        return None
    if d > 4:
        bound = 1
    coeff_range = sorted(range(-bound, bound + 1), key=lambda c: (abs(c), c < 0))
    candidates = sorted(itertools.product(coeff_range, repeat=d),
                        key=lambda cs: (max(abs(c) for c in cs), [abs(c) for c in cs], [c < 0 for c in cs]))
    for cs in candidates:
        if not any(cs):
            continue
        vec = [sum(c * k[t] for c, k in zip(cs, K)) for t in range(r * r)]
        P = [vec[i * r:(i + 1) * r] for i in range(r)]
        if abs(la.det(P)) == 1:
            return tuple(tuple(row) for row in P)
    return None


@dataclass(frozen=True)
class MatrixInvariants:
    char_poly_away_from_zero: tuple
    bowen_franks: BowenFranksGroup
    det_i_minus: int
    dimension: DimensionData


def matrix_invariants(A: NonnegMatrix) -> MatrixInvariants:
    return MatrixInvariants(char_poly_away_from_zero(A), bowen_franks(A),
                            det_i_minus(A), dimension_pair_data(A))


@dataclass(frozen=True)
class ObstructionReport:
    A: MatrixInvariants
    B: MatrixInvariants
    verdict: str
    reasons: tuple = ()
    conjugator: tuple | None = field(default=None)


def _sign(x):
    return (x > 0) - (x < 0)


def se_obstruction_report(A: NonnegMatrix, B: NonnegMatrix, conjugacy_bound: int = 2) -> ObstructionReport:
    ia, ib = matrix_invariants(A), matrix_invariants(B)
    reasons = []
    conjugator = None
    if ia.char_poly_away_from_zero != ib.char_poly_away_from_zero:
        reasons.append("characteristic polynomials away from zero differ: "
                       f"{format_poly(ia.char_poly_away_from_zero)} vs "
                       f"{format_poly(ib.char_poly_away_from_zero)}")
    if ia.dimension.eventual_rank != ib.dimension.eventual_rank:
        reasons.append(f"eventual ranks differ: {ia.dimension.eventual_rank} vs "
                       f"{ib.dimension.eventual_rank}")
    if reasons:
        return ObstructionReport(ia, ib, NOT_SE, tuple(reasons))

    conjugator = unimodular_conjugacy(ia.dimension.action, ib.dimension.action, conjugacy_bound)
    if conjugator is None:
        reasons.append("no unimodular conjugacy of the dimension actions found within "
                       f"coefficient bound {conjugacy_bound} (not a proof)")
    sse_reasons = []
    if ia.bowen_franks != ib.bowen_franks:
        sse_reasons.append(f"Bowen-Franks groups differ: {ia.bowen_franks} vs {ib.bowen_franks}")
    if _sign(ia.det_i_minus) != _sign(ib.det_i_minus):
        sse_reasons.append(f"signs of det(I - A) differ: {ia.det_i_minus} vs {ib.det_i_minus}")
    if sse_reasons:
        return ObstructionReport(ia, ib, NOT_SSE, tuple(sse_reasons + reasons), conjugator)
    return ObstructionReport(ia, ib, INCONCLUSIVE, tuple(reasons), conjugator)


# --- JSON -----------------------------------------------------------------

def _inv_to_json(inv: MatrixInvariants) -> dict:
    return {
        "char_poly_away_from_zero": [str(c) for c in inv.char_poly_away_from_zero],
        "char_poly_text": format_poly(inv.char_poly_away_from_zero),
        "bowen_franks": {"divisors": [str(d) for d in inv.bowen_franks.divisors],
                         "free_rank": inv.bowen_franks.free_rank,
                         "text": str(inv.bowen_franks)},
        "det_I_minus": str(inv.det_i_minus),
        "eventual_rank": inv.dimension.eventual_rank,
        "dimension_action": {
            "basis": [[str(x) for x in b] for b in inv.dimension.basis],
            "action": [[str(x) for x in row] for row in inv.dimension.action],
        },
    }


def report_to_json(report: ObstructionReport) -> dict:
    return {
        "verdict": report.verdict,
        "reasons": list(report.reasons),
        "A": _inv_to_json(report.A),
        "B": _inv_to_json(report.B),
        "conjugator": None if report.conjugator is None
        else [[str(x) for x in row] for row in report.conjugator],
    }
