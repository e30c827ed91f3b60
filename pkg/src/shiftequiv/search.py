"""Bounded, deterministic searches for witnesses.

Every search visits candidates in a fixed lexicographic order and returns the
first solution in that order, whatever the number of workers. A ``None``
witness means the bounded space was exhausted; only when the bound provably
covers every possible solution (or an invariant rules one out) is the result
marked ``proved-none``. Running out of ``node_limit`` raises
:class:`BudgetExceeded` instead.
"""

from __future__ import annotations

import itertools
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

from .equivalences import (CSEWitness, ElementaryStep, SEWitness, SSEChain, expected_specs,
                           identity_step, verify_cse, verify_se)
from .errors import BudgetExceeded, InvalidUnderlyingSE, NotSquare
from .invariants import char_poly_away_from_zero
from .matrix import NonnegMatrix, default_labels, is_essential, multiply, power
from .pathiso import PathIso
from .paths import block_of, edge_set, path_space

FOUND = "found"
EXHAUSTED = "exhausted"
PROVED_NONE = "proved-none"


@dataclass(frozen=True)
class SearchBudget:
    max_inner_dim: int = 3
    entry_bound: Optional[int] = None
    max_lag: int = 3
    max_depth: int = 3
    node_limit: int = 200_000
    seed: int = 0

    def __post_init__(self):
        for name in ("max_inner_dim", "max_lag", "max_depth", "node_limit"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.entry_bound is not None and self.entry_bound < 1:
            raise ValueError("entry_bound must be >= 1")

    def bound_for(self, *matrices: NonnegMatrix) -> int:
        if self.entry_bound is not None:
            return self.entry_bound
        return max(M.max_entry() for M in matrices) + 1


@dataclass(frozen=True)
class SearchResult:
    witness: object
    status: str
    nodes: int
    note: str = ""

    def __bool__(self):
        return self.witness is not None


class _Counter:
    """Node budget for one sequential unit of search."""

    def __init__(self, limit: int, cancelled: Callable[[], bool] = lambda: False):
        self.limit = limit
        self.nodes = 0
        self.cancelled = cancelled

    def tick(self):
        self.nodes += 1
        if self.nodes > self.limit:
            raise _OutOfNodes(self.nodes)
        if self.nodes & 0x3FF == 0 and self.cancelled():
            raise _Cancelled()


class _OutOfNodes(Exception):
    pass


class _Cancelled(Exception):
    pass


def _run_partitions(tasks: list, run: Callable, workers: int, node_limit: int):
    """Run ``run(task, counter)`` over ordered partitions of one search tree.

    The outcome is the one a single sequential pass over the partitions, in
    order, would produce: the first partition that finds something wins, and
    the node budget is charged cumulatively in partition order.
    """
    best = [len(tasks)]
    lock = threading.Lock()

    def one(index):
        counter = _Counter(node_limit, lambda: best[0] < index)
        try:
            found = run(tasks[index], counter)
        except _OutOfNodes:
            return None, counter.nodes, True
        except _Cancelled:
            return None, counter.nodes, "cancelled"
        if found is not None:
            with lock:
                best[0] = min(best[0], index)
        return found, counter.nodes, False

    if workers <= 1 or len(tasks) <= 1:
        outcomes = []
        for i in range(len(tasks)):
            outcomes.append(one(i))
            if outcomes[-1][0] is not None or outcomes[-1][2] is True:
                break
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one, range(len(tasks))))

    total = 0
    for found, nodes, exceeded in outcomes:
        if exceeded == "cancelled":
            raise AssertionError("cancelled partition reached in sequential order")
        total += nodes
        if exceeded is True or total > node_limit:
            raise BudgetExceeded(f"node limit {node_limit} exhausted", nodes=min(total, node_limit + 1))
        if found is not None:
            return found, total
    return None, total


# --- nonnegative factorizations ---------------------------------------------

def _column_solutions(R, target, counter):
    """All ``s >= 0`` with ``R s == target`` in lexicographic order. ``R`` has
    no zero columns, so every coordinate of ``s`` is bounded."""
    n, k = len(R), len(R[0])
    caps = []
    for l in range(k):
        caps.append(min(target[i] // R[i][l] for i in range(n) if R[i][l]))
    out = []
    s = [0] * k
    residual = list(target)

    def rec(l):
        counter.tick()
        if l == k:
            if not any(residual):
                out.append(tuple(s))
            return
        col = [R[i][l] for i in range(n)]
        top = min([caps[l]] + [residual[i] // col[i] for i in range(n) if col[i]])
        for v in range(top + 1):
            s[l] = v
            for i in range(n):
                residual[i] -= v * col[i]
            # entries that no later column can touch must already be matched
            if all(residual[i] == 0 or any(R[i][t] for t in range(l + 1, k)) for i in range(n)):
                rec(l + 1)
            for i in range(n):
                residual[i] += v * col[i]
        s[l] = 0

    rec(0)
    return out


def _solve_right_factors(R, M, counter):
    """All ``S >= 0`` with ``R S == M`` (as row tuples), lexicographic by columns."""
    cols = [_column_solutions(R, [M[i][j] for i in range(len(M))], counter)
            for j in range(len(M[0]))]
    if any(not c for c in cols):
        return
    for choice in itertools.product(*cols):
        counter.tick()
        yield tuple(zip(*choice))


def _left_factor_candidates(M, k, bound, first_value=None):
    """Left factors ``R`` (``n x k``) in row-major lexicographic order, with no
    zero rows or columns and ``R[i][l] <= min(bound, max(M[i]))``."""
    n = len(M)
    caps = [min(bound, max(M[i])) for i in range(n)]
    cells = [(i, l) for i in range(n) for l in range(k)]
    ranges = [range(caps[i] + 1) for i, _ in cells]
    if first_value is not None:
        ranges[0] = [first_value]
    for flat in itertools.product(*ranges):
        R = [flat[i * k:(i + 1) * k] for i in range(n)]
        if not all(any(row) for row in R):
            continue
        if not all(any(R[i][l] for i in range(n)) for l in range(k)):
            continue
        yield R


def _first_cell_values(M, bound):
    return list(range(min(bound, max(M[0])) + 1))


def factorizations(M: NonnegMatrix, inner: tuple, bound: int, counter: _Counter, first_value=None):
    """Yield ``(R, S)`` with ``M == R S``, ``R`` over ``M.rows x inner``.

    ``R`` has no zero rows or columns and ``S`` has no zero rows; entries of
    ``R`` are capped by ``bound``.
    """
    Mx = M.tolist()
    k = len(inner)
    for R in _left_factor_candidates(Mx, k, bound, first_value):
        counter.tick()
        for S in _solve_right_factors(R, Mx, counter):
            if not all(any(row) for row in S):
                continue
            yield (NonnegMatrix.from_rows(R, M.rows, inner),
                   NonnegMatrix.from_rows(S, inner, M.cols))


# --- elementary steps -------------------------------------------------------

def _check_inputs(A, B):
    if not A.is_square or not B.is_square:
        raise NotSquare("search inputs must be square")
    if not is_essential(A) or not is_essential(B):
        raise ValueError("search inputs must be essential")


def search_elementary(A: NonnegMatrix, B: NonnegMatrix, budget: SearchBudget = SearchBudget(),
                      workers: int = 1) -> SearchResult:
    """Find ``R, S`` with ``A == RS`` and ``B == SR``.

    ``A == B`` is answered directly with ``R = A``, ``S = I``. The search is
    complete once ``budget.entry_bound`` reaches the largest entry of ``A``,
    and an unsuccessful complete search is reported as ``proved-none``.
    """
    _check_inputs(A, B)
    if A == B:
        return SearchResult(identity_step(A), FOUND, 0, "identity factorization")
    if char_poly_away_from_zero(A) != char_poly_away_from_zero(B):
        return SearchResult(None, PROVED_NONE, 0, "nonzero spectra differ")
    bound = budget.bound_for(A, B)
    Bx = B

    def run(first, counter):
        for R, S in factorizations(A, B.rows, bound, counter, first_value=first):
            if multiply(S, R) == Bx:
                return ElementaryStep(R, S)
        return None

    found, nodes = _run_partitions(_first_cell_values(A.tolist(), bound), run, workers,
                                   budget.node_limit)
    if found is not None:
        return SearchResult(found, FOUND, nodes)
    complete = bound >= A.max_entry()
    return SearchResult(None, PROVED_NONE if complete else EXHAUSTED, nodes,
                        "entry bound dominates every factorization" if complete
                        else f"no factorization with entries <= {bound}")


# --- strong shift equivalence chains ----------------------------------------

def canonical_form(M: NonnegMatrix) -> tuple:
    """Lexicographically least entry tuple over simultaneous row/column
    permutations, together with a permutation achieving it."""
    n = len(M.rows)
    E = M.entries
    best, best_perm = None, None
    for perm in itertools.permutations(range(n)):
        key = tuple(E[perm[i]][perm[j]] for i in range(n) for j in range(n))
        if best is None or key < best:
            best, best_perm = key, perm
    return (n, best), best_perm


def _relabel_into(N: NonnegMatrix, B: NonnegMatrix):
    """Permutation matrix ``Q`` over ``N.rows x B.rows`` with ``Q^T N Q == B``,
    or ``None`` if ``N`` and ``B`` are not permutation-conjugate."""
    (kn, _), pn = canonical_form(N)
    (kb, _), pb = canonical_form(B)
    if canonical_form(N)[0] != canonical_form(B)[0]:
        return None
    n = len(N.rows)
    # N[pn[i]][pn[j]] == B[pb[i]][pb[j]]: send N index pn[i] to B index pb[i].
    Q = [[0] * n for _ in range(n)]
    for i in range(n):
        Q[pn[i]][pb[i]] = 1
    return NonnegMatrix.from_rows(Q, N.rows, B.rows)


def _permutation_step(N: NonnegMatrix, B: NonnegMatrix) -> ElementaryStep:
    Q = _relabel_into(N, B)
    return ElementaryStep(Q, multiply(Q.transpose(), N))


def search_sse_chain(A: NonnegMatrix, B: NonnegMatrix, budget: SearchBudget = SearchBudget(),
                     workers: int = 1, progress: Callable = None) -> SearchResult:
    """Breadth-first search over elementary moves, states deduplicated up to
    permutation. Returns the shortest chain found (empty when ``A == B``)."""
    _check_inputs(A, B)
    if A == B:
        return SearchResult(SSEChain(A, ()), FOUND, 0)
    if char_poly_away_from_zero(A) != char_poly_away_from_zero(B):
        return SearchResult(None, PROVED_NONE, 0, "nonzero spectra differ")
    target_key = canonical_form(B)[0]
    if canonical_form(A)[0] == target_key:
        return SearchResult(SSEChain(A, (_permutation_step(A, B),)), FOUND, 0,
                            "permutation conjugate")
    bound = budget.bound_for(A, B)
    max_dim = max(budget.max_inner_dim, len(A.rows), len(B.rows))
    seen = {canonical_form(A)[0]}
    frontier = [(A, ())]
    total = 0

    def expand(state, limit):
        M, steps = state
        counter = _Counter(limit)
        children = []
        try:
            for k in range(1, max_dim + 1):
                inner = default_labels(k)
                for R, S in factorizations(M, inner, bound, counter):
                    N = multiply(S, R)
                    if is_essential(N):
                        children.append((R, S, N))
        except _OutOfNodes:
            return None, counter.nodes
        return children, counter.nodes

    for depth in range(1, budget.max_depth + 1):
        remaining = budget.node_limit - total
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                expansions = list(pool.map(lambda s: expand(s, remaining), frontier))
        else:
            expansions = []
            for s in frontier:
                expansions.append(expand(s, budget.node_limit - total - sum(n for _, n in expansions)))
                if expansions[-1][0] is None:
                    break
        next_frontier = []
        for (M, steps), (children, nodes) in zip(frontier, expansions):
            total += nodes
            if children is None or total > budget.node_limit:
                raise BudgetExceeded(f"node limit {budget.node_limit} exhausted at depth {depth}",
                                     nodes=total)
            for R, S, N in children:
                key = canonical_form(N)[0]
                if key == target_key:
                    Q = _relabel_into(N, B)
                    last = ElementaryStep(multiply(R, Q), multiply(Q.transpose(), S))
                    chain = SSEChain(A, steps + (last,))
                    if progress:
                        progress({"event": "found", "depth": depth, "nodes": total})
                    return SearchResult(chain, FOUND, total)
                if key in seen:
                    continue
                seen.add(key)
                next_frontier.append((N, steps + (ElementaryStep(R, S),)))
        if progress:
            progress({"event": "layer", "depth": depth, "frontier": len(next_frontier),
                      "nodes": total})
        frontier = next_frontier
        if not frontier:
            break
    return SearchResult(None, EXHAUSTED, total,
                        f"no chain of length <= {budget.max_depth} with inner dimension "
                        f"<= {max_dim} and entries <= {bound}")


# --- shift equivalence witnesses --------------------------------------------

def _intertwining_checks(A, B):
    """For ``AR == RB`` with ``R`` filled row-major: the equations ``(i, j)``
    that become fully determined when cell ``t`` is filled."""
    n, k = len(A), len(B)
    ready = {}
    for i in range(n):
        for j in range(k):
            cells = [u * k + j for u in range(n) if A[i][u]] + [i * k + l for l in range(k) if B[l][j]]
            last = max(cells) if cells else 0
            ready.setdefault(last, []).append((i, j))
    return ready


def _intertwiners(A, B, bound_rows, counter, first_value=None):
    """Row-major backtracking over ``R`` with ``AR == RB``, forward-checked."""
    n, k = len(A), len(B)
    ready = _intertwining_checks(A, B)
    cells = n * k
    R = [0] * cells

    def holds(i, j):
        lhs = sum(A[i][u] * R[u * k + j] for u in range(n))
        rhs = sum(R[i * k + l] * B[l][j] for l in range(k))
        return lhs == rhs

    def rec(t):
        counter.tick()
        if t == cells:
            yield [R[i * k:(i + 1) * k] for i in range(n)]
            return
        values = [first_value] if (t == 0 and first_value is not None) else range(bound_rows[t // k] + 1)
        for v in values:
            R[t] = v
            if all(holds(i, j) for i, j in ready.get(t, ())):
                yield from rec(t + 1)
        R[t] = 0

    yield from rec(0)


def search_se_witness(A: NonnegMatrix, B: NonnegMatrix, budget: SearchBudget = SearchBudget(),
                      workers: int = 1) -> SearchResult:
    """Smallest lag first; for each lag, ``R`` by backtracking under ``AR == RB``,
    then every ``S`` with ``RS == A^m`` checked against the other equations."""
    _check_inputs(A, B)
    if A == B:
        return SearchResult(SEWitness(1, A, NonnegMatrix.identity(A.rows)), FOUND, 0,
                            "identity witness")
    if char_poly_away_from_zero(A) != char_poly_away_from_zero(B):
        return SearchResult(None, PROVED_NONE, 0, "nonzero spectra differ")
    Ax, Bx = A.tolist(), B.tolist()
    total = 0
    for m in range(1, budget.max_lag + 1):
        Am, Bm = power(A, m), power(B, m)
        Amx = Am.tolist()
        bound = budget.entry_bound if budget.entry_bound is not None else max(
            A.max_entry(), B.max_entry(), Am.max_entry()) + 1
        caps = [min(bound, max(row)) for row in Amx]

        def run(first, counter, m=m, Am=Am, Bm=Bm, Amx=Amx, caps=caps):
            for Rx in _intertwiners(Ax, Bx, caps, counter, first):
                if not all(any(r) for r in Rx) or not all(any(Rx[i][l] for i in range(len(Rx)))
                                                          for l in range(len(Rx[0]))):
                    continue
                R = NonnegMatrix.from_rows(Rx, A.rows, B.rows)
                for Sx in _solve_right_factors(Rx, Amx, counter):
                    S = NonnegMatrix.from_rows(Sx, B.rows, A.rows)
                    w = SEWitness(m, R, S)
                    if verify_se(A, B, w):
                        return w
            return None

        found, nodes = _run_partitions(list(range(caps[0] + 1)), run, workers,
                                       budget.node_limit - total)
        total += nodes
        if found is not None:
            return SearchResult(found, FOUND, total)
    return SearchResult(None, EXHAUSTED, total,
                        f"no witness with lag <= {budget.max_lag} within the entry bound")


# --- compatible path isomorphisms ---------------------------------------------

def _bijections(domain_paths, codomain_paths, counter, accept=None):
    """Blockwise bijections in lexicographic order of image positions.

    Yields lists ``images`` with ``images[i]`` the codomain position of
    ``domain_paths[i]``. ``accept(i, images)`` may prune a partial assignment.
    """
    by_block = {}
    for j, q in enumerate(codomain_paths):
        by_block.setdefault(block_of(q), []).append(j)
    slots = [by_block.get(block_of(p), []) for p in domain_paths]
    n = len(domain_paths)
    used = set()
    images = [None] * n
    stack = [iter(slots[0])] if n else []
    if n == 0:
        yield []
        return
    i = 0
    while stack:
        advanced = False
        for j in stack[-1]:
            if j in used:
                continue
            counter.tick()
            images[i] = j
            if accept is not None and not accept(i, images):
                continue
            used.add(j)
            if i + 1 == n:
                yield list(images)
                used.discard(j)
                continue
            i += 1
            stack.append(iter(slots[i]))
            advanced = True
            break
        if not advanced:
            stack.pop()
            i -= 1
            if i >= 0:
                used.discard(images[i])
            # next loop iteration resumes the parent iterator


def _staircase_checker(phi_dom, phi_cod, m, target_pairs):
    """Pruning predicate for ``phi`` against a required staircase power.

    ``target_pairs`` lists ``(input path, required output path)`` of the
    ``m``-fold staircase. A partial ``phi`` is rejected as soon as some
    determined piece of a staircase output disagrees with the requirement.
    """
    dom_index = {p: i for i, p in enumerate(phi_dom)}

    def accept(i, images):
        assigned = i
        for src, want in target_pairs:
            state = list(src)
            for k in range(m - 1, -1, -1):
                pos = dom_index[(state[k], state[k + 1])]
                if pos > assigned:
                    break
                y, z = phi_cod[images[pos]]
                if z != want[k + 1]:
                    return False
                state[k], state[k + 1] = y, z
            else:
                if state[0] != want[0]:
                    return False
        return True

    return accept


def _table(domain_paths, codomain_paths, images) -> dict:
    return {p: codomain_paths[j] for p, j in zip(domain_paths, images)}


def search_compatible_iso(A: NonnegMatrix, B: NonnegMatrix, w: SEWitness,
                          budget: SearchBudget = SearchBudget()) -> SearchResult:
    """Lexicographically first ``(psi_A, psi_B, phi_R, phi_S)`` making ``w`` compatible.

    For fixed ``psi`` maps the compatibility equations prescribe the staircase
    powers of ``phi_R`` and ``phi_S``; each ``phi`` is then found by
    backtracking with pruning on partially determined staircases.
    """
    if not verify_se(A, B, w):
        raise InvalidUnderlyingSE("the witness is not a shift equivalence")
    specs = expected_specs(A, B, w)
    m = w.m
    counter = _Counter(budget.node_limit)
    P = {name: (path_space(d), path_space(c)) for name, (d, c) in specs.items()}

    def iso(name, images):
        d, c = specs[name]
        dp, cp = P[name]
        fwd = _table(dp, cp, images)
        return PathIso(d, c, fwd, {v: k for k, v in fwd.items()})

    try:
        for psi_A_img in _bijections(*P["psi_A"], counter):
            psi_A = _table(*P["psi_A"], psi_A_img)
            psi_A_inv = {v: k for k, v in psi_A.items()}
            for psi_B_img in _bijections(*P["psi_B"], counter):
                psi_B = _table(*P["psi_B"], psi_B_img)
                psi_B_inv = {v: k for k, v in psi_B.items()}
                req_R = _required(psi_A_inv, psi_B, w.R)
                req_S = _required(psi_B_inv, psi_A, w.S)
                phi_R_img = next(_bijections(*P["phi_R"], counter,
                                             _staircase_checker(P["phi_R"][0], P["phi_R"][1], m, req_R)),
                                 None)
                if phi_R_img is None:
                    continue
                phi_S_img = next(_bijections(*P["phi_S"], counter,
                                             _staircase_checker(P["phi_S"][0], P["phi_S"][1], m, req_S)),
                                 None)
                if phi_S_img is None:
                    continue
                c = CSEWitness(w, iso("phi_R", phi_R_img), iso("phi_S", phi_S_img),
                               iso("psi_A", psi_A_img), iso("psi_B", psi_B_img))
                if not verify_cse(A, B, c):
                    raise AssertionError("search produced a witness that does not verify")
                return SearchResult(c, FOUND, counter.nodes)
    except _OutOfNodes:
        raise BudgetExceeded(f"node limit {budget.node_limit} exhausted", nodes=counter.nodes)
    return SearchResult(None, PROVED_NONE, counter.nodes,
                        "every pair of psi maps was tried")


def _required(psi_inv, psi_other, M):
    """Pairs ``(x_1..x_m y, y' z_1..z_m)`` prescribed by
    ``(id_M x psi_other) o (psi^-1 x id_M)``."""
    out_edges = {}
    for e in edge_set(M):
        out_edges.setdefault(e.source, []).append(e)
    pairs = []
    for x, (y0, t0) in psi_inv.items():
        for y in out_edges.get(x[-1].range, ()):
            pairs.append((x + (y,), (y0,) + psi_other[(t0, y)]))
    return pairs
