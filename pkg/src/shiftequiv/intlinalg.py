"""Exact integer linear algebra on lists of Python ints.

Only what the invariants need: Smith normal form with unimodular transforms,
row Hermite normal form, characteristic polynomial, determinant and kernel.
"""

from __future__ import annotations


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(X, Y):
    cols = list(zip(*Y))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in X]


def transpose(X):
    return [list(c) for c in zip(*X)]


def smith_normal_form(M):
    """Return ``(D, U, U_inv, V, V_inv)`` with ``U @ M @ V == D``.

    ``D`` is diagonal (same shape as ``M``) with nonnegative entries, each
    dividing the next; ``U``, ``V`` are unimodular and ``U_inv``, ``V_inv``
    their exact inverses.
    """
    A = [list(r) for r in M]
    n = len(A)
    k = len(A[0]) if n else 0
    U, Ui, V, Vi = identity(n), identity(n), identity(k), identity(k)

    def swap_rows(i, j):
        if i == j:
            return
        for X in (A, U):
            X[i], X[j] = X[j], X[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, q):  # row_i += q * row_j
        for X in (A, U):
            X[i] = [a + q * b for a, b in zip(X[i], X[j])]
        for row in Ui:
            row[j] -= q * row[i]

    def neg_row(i):
        for X in (A, U):
            X[i] = [-a for a in X[i]]
        for row in Ui:
            row[i] = -row[i]

    def swap_cols(i, j):
        if i == j:
            return
        for X in (A, V):
            for row in X:
                row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_col(j, i, q):  # col_j += q * col_i
        for X in (A, V):
            for row in X:
                row[j] += q * row[i]
        Vi[i] = [a - q * b for a, b in zip(Vi[i], Vi[j])]

    for t in range(min(n, k)):
        while True:
            nonzero = [(abs(A[i][j]), i, j) for i in range(t, n) for j in range(t, k) if A[i][j]]
            if not nonzero:
                break
            _, pi, pj = min(nonzero)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = A[t][t]
            clean = True
            for i in range(t + 1, n):
                q = A[i][t] // p
                if q:
                    add_row(i, t, -q)
                if A[i][t]:
                    clean = False
            for j in range(t + 1, k):
                q = A[t][j] // p
                if q:
                    add_col(j, t, -q)
                if A[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, k)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            neg_row(t)
    return A, U, Ui, V, Vi


def invariant_factors(M):
    D = smith_normal_form(M)[0]
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def rank(M):
    return sum(1 for d in invariant_factors(M) if d)


def kernel_basis(M):
    """Columns spanning ``{x in Z^k : M x = 0}`` (a saturated basis)."""
    D, _, _, V, _ = smith_normal_form(M)
    n = len(D)
    k = len(D[0]) if n else 0
    r = sum(1 for i in range(min(n, k)) if D[i][i])
    return [[V[i][j] for i in range(k)] for j in range(r, k)]


def hermite_rows(B):
    """Row-style Hermite normal form of a full-row-rank integer matrix."""
    H = [list(r) for r in B]
    m = len(H)
    n = len(H[0]) if m else 0
    row = 0
    pivots = []
    for col in range(n):
        if row == m:
            break
        while True:
            nz = [(abs(H[i][col]), i) for i in range(row, m) if H[i][col]]
            if not nz:
                break
            _, i = min(nz)
            H[row], H[i] = H[i], H[row]
            done = True
            for i in range(row + 1, m):
                q = H[i][col] // H[row][col]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[row])]
                if H[i][col]:
                    done = False
            if done:
                break
        if row < m and H[row][col]:
            if H[row][col] < 0:
                H[row] = [-a for a in H[row]]
            for i in range(row):
                q = H[i][col] // H[row][col]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[row])]
            pivots.append(col)
            row += 1
    return H[:row], pivots


def charpoly(M):
    """Coefficients of ``det(tI - M)``, highest degree first (Faddeev-LeVerrier)."""
    n = len(M)
    coeffs = [1]
    Mk = [[0] * n for _ in range(n)]
    c = 1
    for k in range(1, n + 1):
        AM = matmul(M, Mk)
        Mk = [[AM[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
        tr = sum(matmul(M, Mk)[i][i] for i in range(n))
        assert tr % k == 0
        c = -tr // k
        coeffs.append(c)
    return coeffs


def det(M):
    """Bareiss fraction-free determinant."""
    A = [list(r) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]
