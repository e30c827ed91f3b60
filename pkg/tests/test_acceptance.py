"""Acceptance criteria, one test each.

Every test records a one-line verdict in ``SUMMARY``; pytest prints the lines
at the end of the session and ``python tests/test_acceptance.py`` runs the
criteria directly.
"""

import contextlib
import io
import os
import sys
import tempfile
import time
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from shiftequiv.ckrep import build_representation, twist_representation, verify_ck_relations, verify_rse_equations
from shiftequiv.cli import main
from shiftequiv.equivalences import (SEWitness, SSEChain, chain_to_cse, check_derived_identities,
                                     compose_cse, sse_step_to_cse, verify_cse)
from shiftequiv.invariants import INCONCLUSIVE, NOT_SE, bowen_franks, char_poly_away_from_zero, se_obstruction_report
from shiftequiv.matrix import NonnegMatrix
from shiftequiv.pathiso import lex_key
from shiftequiv.search import FOUND, search_compatible_iso, search_elementary

import oracles
from cli_suite import cases, write_inputs
from corpus import composable_pairs, random_step_from, steps

SUMMARY = []
M = NonnegMatrix.from_rows
TWISTS = {"1": Fraction(0), "-1": Fraction(1, 2), "i": Fraction(1, 4), "primitive 6th root": Fraction(1, 6)}


class Criterion:
    def __init__(self, number, title, limit):
        self.number, self.title, self.limit = number, title, limit
        self.detail = ""

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        timing = f"{elapsed:.1f} s" + (f" of {self.limit} s" if self.limit else "")
        slow = self.limit is not None and elapsed > self.limit
        ok = exc_type is None and not slow
        why = "" if ok else (f" [{exc_type.__name__}: {exc}]" if exc_type else " [over time limit]")
        SUMMARY.append(f"C{self.number} {'PASS' if ok else 'FAIL'}  {self.title}: {self.detail} ({timing}){why}")
        if exc_type is None and slow:
            raise AssertionError(f"criterion {self.number} took {elapsed:.1f} s, limit {self.limit} s")
        return False


@lru_cache(maxsize=None)
def corpus():
    """The generated witness corpus: single steps, composed pairs, three-step
    chains and the searched witnesses over every small shift equivalence."""
    import random

    out = [sse_step_to_cse(A, B, st) for A, B, st in steps(200)]
    out += [compose_cse(c1, c2) for c1, c2 in composable_pairs(100)]
    rng = random.Random(3)
    for A, B, st in steps(20, seed=5):
        chain = [st]
        for _ in range(2):
            chain.append(random_step_from(rng, chain[-1].target, chain[-1]))
        out.append(chain_to_cse(SSEChain(A, tuple(chain)), chain[-1].target))
    for m, A, B, R, S in oracles.small_se_witnesses():
        A, B, R, S = (M([list(r) for r in X]) for X in (A, B, R, S))
        out.append(search_compatible_iso(A, B, SEWitness(m, R, S)).witness)
    return tuple(out)


def test_c1_sse_to_cse_soundness():
    with Criterion(1, "SSE to CSE soundness", 10) as c:
        failures = [i for i, (A, B, st) in enumerate(steps(200))
                    if not verify_cse(A, B, sse_step_to_cse(A, B, st))]
        c.detail = f"{200 - len(failures)}/200 random elementary steps verify"
        assert not failures, failures


def test_c2_transitivity():
    with Criterion(2, "transitivity", 60) as c:
        failures = []
        for i, (c1, c2) in enumerate(composable_pairs(100)):
            w = compose_cse(c1, c2)
            if not (verify_cse(c1.A, c2.B, w) and check_derived_identities(c1.A, c2.B, w)
                    and oracles.compatible(w)):
                failures.append(i)
        c.detail = f"{100 - len(failures)}/100 composed pairs verify with derived identities"
        assert not failures, failures


def test_c3_derived_identity_closure():
    with Criterion(3, "derived identity closure", 30) as c:
        witnesses = corpus()
        passing = [w for w in witnesses if verify_cse(w.A, w.B, w)]
        failures = [i for i, w in enumerate(passing)
                    if not (check_derived_identities(w.A, w.B, w) and oracles.derived_identities_hold(w))]
        c.detail = f"{len(passing) - len(failures)}/{len(passing)} verified corpus witnesses satisfy both identities"
        assert len(passing) == len(witnesses)
        assert not failures, failures


def test_c4_representation():
    with Criterion(4, "representation relations", 300) as c:
        checked, failures = 0, []
        for i, w in enumerate(corpus()):
            if w.R.entry_sum() + w.S.entry_sum() > 20:
                continue
            rep = build_representation(w, max(6, 2 * w.m))
            for name, angle in TWISTS.items():
                r = twist_representation(rep, angle)
                if not (verify_ck_relations(r, w.m) and verify_rse_equations(r, w, w.m)):
                    failures.append((i, name))
            checked += 1
        c.detail = f"{checked} witnesses x {len(TWISTS)} twists, {len(failures)} failures at depth 6"
        assert checked and not failures, failures


def test_c5_search_matches_brute_force():
    with Criterion(5, "search and brute force agree", 120) as c:
        witnesses = oracles.small_se_witnesses(max_edges=4)
        mismatches = []
        for m, A, B, R, S in witnesses:
            want = oracles.first_compatible_quadruple(m, *(M([list(r) for r in X]) for X in (A, B, R, S)))
            A_, B_, R_, S_ = (M([list(r) for r in X]) for X in (A, B, R, S))
            result = search_compatible_iso(A_, B_, SEWitness(m, R_, S_))
            got = None if result.witness is None else tuple(
                lex_key(getattr(result.witness, f)) for f in ("psi_A", "psi_B", "phi_R", "phi_S"))
            if got != want:
                mismatches.append((m, A, B, R, S))
        lags = sorted({w[0] for w in witnesses})
        c.detail = (f"{len(witnesses) - len(mismatches)}/{len(witnesses)} witnesses "
                    f"(lags {lags}) agree on existence and first quadruple")
        assert witnesses and not mismatches, mismatches


def test_c6_worked_pair():
    with Criterion(6, "worked pair", 5) as c:
        A, B = M([[1, 1], [1, 1]]), M([[2]])
        found = search_elementary(A, B)
        assert found.status == FOUND
        w = chain_to_cse(SSEChain(A, (found.witness,)), B)
        assert verify_cse(A, B, w)
        rep = build_representation(w, 6)
        for angle in TWISTS.values():
            r = twist_representation(rep, angle)
            assert verify_ck_relations(r, w.m) and verify_rse_equations(r, w, w.m)
        same = se_obstruction_report(A, B)
        assert same.verdict == INCONCLUSIVE
        assert same.A.char_poly_away_from_zero == same.B.char_poly_away_from_zero == (1, -2)
        assert same.A.bowen_franks == same.B.bowen_franks
        apart = se_obstruction_report(M([[2]]), M([[4]]))
        assert apart.verdict == NOT_SE and "t - 2 vs t - 4" in apart.reasons[0]
        c.detail = f"step found, witness and representation verify, {same.verdict}; [[2]] vs [[4]] {apart.verdict}"


def test_c7_invariant_stability():
    with Criterion(7, "invariant stability", 30) as c:
        failures = [i for i, (A, B, _) in enumerate(steps(500, seed=11))
                    if bowen_franks(A) != bowen_franks(B)
                    or char_poly_away_from_zero(A) != char_poly_away_from_zero(B)]
        c.detail = f"{500 - len(failures)}/500 random steps preserve both invariants"
        assert not failures, failures


def _replay(argv, workers, out_path):
    stdout, stderr = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
        code = main(argv + ["--workers", str(workers), "--out", str(out_path)])
    body = out_path.read_bytes() if out_path.exists() else b""
    return code, body, stdout.getvalue().encode(), stderr.getvalue().encode()


def test_c8_determinism():
    with Criterion(8, "determinism across workers", None) as c:
        with tempfile.TemporaryDirectory() as tmp:
            root = Path(tmp)
            paths = write_inputs(root)
            suite = cases(paths)
            differing = []
            for i, (argv, _) in enumerate(suite):
                runs = [_replay(argv, w, root / f"cert-{i}-{w}.json") for w in (1, 4)]
                if runs[0] != runs[1]:
                    differing.append(" ".join(argv[:1]))
        c.detail = f"{len(suite) - len(differing)}/{len(suite)} CLI cases byte-identical with 1 and 4 workers"
        assert not differing, differing


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
