"""Seeded generators for the randomized test corpus."""

from __future__ import annotations

import random

from shiftequiv.equivalences import ElementaryStep, sse_step_to_cse
from shiftequiv.matrix import NonnegMatrix, default_labels, is_essential, multiply
from shiftequiv.search import _Counter, _OutOfNodes, factorizations

MAX_DIM = 4
MAX_ENTRY_SUM = 8


def _random_matrix(rng, rows, cols, max_entry):
    return NonnegMatrix.from_rows(
        [[rng.choice([0, 0, 1, 1, 2][: max_entry + 3]) for _ in cols] for _ in rows], rows, cols)


def random_step(rng: random.Random, max_dim: int = MAX_DIM, max_sum: int = MAX_ENTRY_SUM):
    """A random elementary step ``A = RS -> B = SR`` with both sides essential,
    at most ``max_dim`` vertices and entry sum at most ``max_sum``."""
    while True:
        n, k = rng.randint(1, max_dim), rng.randint(1, max_dim)
        R = _random_matrix(rng, default_labels(n), default_labels(k), 2)
        S = _random_matrix(rng, default_labels(k), default_labels(n), 2)
        A, B = multiply(R, S), multiply(S, R)
        if not (is_essential(A) and is_essential(B)):
            continue
        if A.entry_sum() > max_sum or B.entry_sum() > max_sum:
            continue
        return A, B, ElementaryStep(R, S)


def steps(count: int, seed: int = 0):
    rng = random.Random(seed)
    return [random_step(rng) for _ in range(count)]


def random_step_from(rng: random.Random, B: NonnegMatrix, back: ElementaryStep,
                     max_dim: int = MAX_DIM):
    """A random elementary step starting at ``B``: the step ``back`` reversed,
    the identity step, or a factorization found within a small node budget."""
    options = [ElementaryStep(back.S, back.R), ElementaryStep(B, NonnegMatrix.identity(B.rows))]
    for k in range(1, max_dim + 1):
        counter = _Counter(3_000)
        try:
            for R, S in factorizations(B, default_labels(k), B.max_entry(), counter):
                if is_essential(multiply(S, R)) and multiply(S, R).entry_sum() <= 2 * MAX_ENTRY_SUM:
                    options.append(ElementaryStep(R, S))
        except _OutOfNodes:
            pass
    return rng.choice(options)


def composable_pairs(count: int, seed: int = 1):
    """Pairs of lag-1 compatible witnesses ``A -> B -> C``."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        A, B, st1 = random_step(rng)
        st2 = random_step_from(rng, B, st1)
        C = st2.target
        out.append((sse_step_to_cse(A, B, st1), sse_step_to_cse(B, C, st2)))
    return out
