"""Command-line front end. Every successful run prints one certificate.

Exit codes: 0 verified/found (or an inconclusive invariant comparison),
1 refuted or nothing found within budget, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction

from . import __version__
from .ckrep import (build_representation, report_to_json as check_report_to_json, rep_to_json,
                    twist_representation, verify_ck_relations, verify_rse_equations,
                    vertex_projections_agree)
from .equivalences import (chain_from_json, chain_to_cse, chain_to_json,
                           check_derived_identities, compose_cse, cse_from_json, cse_to_json,
                           se_equations, se_witness_from_json, se_witness_to_json, sse_step_to_cse,
                           step_from_json, step_to_json, verify_cse, verify_se)
from .errors import BudgetExceeded, NotElementary, SchemaError
from .invariants import INCONCLUSIVE, report_to_json, se_obstruction_report
from .matrix import matrix_from_json
from .search import (SearchBudget, search_compatible_iso, search_elementary,
                     search_se_witness, search_sse_chain)

COMMANDS = ("verify-se", "verify-cse", "derived-identities", "sse-to-cse", "compose-cse",
            "chain-to-cse", "search-elementary", "search-sse", "search-se", "search-cse",
            "invariants", "rep-build", "rep-verify", "rep-twist")


class InputError(Exception):
    """Bad usage or input; the message names the offending field."""


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


# --- input parsing -----------------------------------------------------------

def _pair(inputs, required=True):
    pair = inputs.get("pair")
    if pair is None:
        if required:
            raise InputError("pair: missing (use --pair FILE)")
        return None, None
    if not isinstance(pair, dict):
        raise SchemaError("pair", "expected an object with keys A and B")
    for key in ("A", "B"):
        if key not in pair:
            raise SchemaError(f"pair.{key}", "missing")
    A = matrix_from_json(pair["A"], "pair.A")
    B = matrix_from_json(pair["B"], "pair.B")
    for name, M in (("A", A), ("B", B)):
        if not M.is_square:
            raise SchemaError(f"pair.{name}", f"matrix must be square, got shape {M.shape}")
    return A, B


def _witnesses(inputs, count):
    ws = inputs.get("witnesses") or []
    if len(ws) < count:
        raise InputError(f"witness: expected {count} --witness file(s), got {len(ws)}")
    return ws


def _budget(inputs) -> SearchBudget:
    raw = inputs.get("budget") or {}
    if not isinstance(raw, dict):
        raise SchemaError("budget", "expected an object")
    known = {"max_inner_dim", "entry_bound", "max_lag", "max_depth", "node_limit", "seed"}
    fields = {}
    for key, value in raw.items():
        if key not in known:
            raise SchemaError(f"budget.{key}", "unknown budget field")
        if value is None and key == "entry_bound":
            continue
        if isinstance(value, str) and value.lstrip("-").isdigit():
            value = int(value)
        if not isinstance(value, int) or isinstance(value, bool):
            raise SchemaError(f"budget.{key}", "expected an integer")
        fields[key] = value
    if inputs.get("depth") is not None:
        fields["max_depth"] = inputs["depth"]
    try:
        return SearchBudget(**fields)
    except ValueError as exc:
        raise SchemaError("budget", str(exc)) from exc


def _cse(obj, field, A=None, B=None):
    c = cse_from_json(obj, field)
    if A is not None and (c.A != A or c.B != B):
        raise SchemaError(field, "witness matrices differ from the --pair matrices")
    return c


def _depth(inputs, default):
    L = inputs.get("depth")
    return default if L is None else L


def _margin(inputs, m):
    margin = inputs.get("margin")
    return m if margin is None else margin


def _angle(inputs) -> Fraction:
    raw = inputs.get("angle")
    if raw is None:
        raise InputError("angle: missing (use --angle p/q for z = exp(2 pi i p/q))")
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError("angle", f"expected a rational number like 1/6, got {raw!r}") from exc


# --- commands ------------------------------------------------------------------
# Each returns (exit_code, result, checks).

def _cmd_verify_se(inputs, ctx):
    A, B = _pair(inputs)
    w = se_witness_from_json(_witnesses(inputs, 1)[0], "witness")
    eqs = se_equations(A, B, w)
    ok = verify_se(A, B, w)
    checks = [[name, value] for name, value in eqs.items()]
    return (0 if ok else 1), {"verified": ok, "lag": w.m}, checks


def _cmd_verify_cse(inputs, ctx):
    A, B = _pair(inputs, required=False)
    c = _cse(_witnesses(inputs, 1)[0], "witness", A, B)
    if not verify_se(c.A, c.B, c.se):
        return 1, {"verified": False, "reason": "underlying shift equivalence fails"}, \
            [["shift equivalence", False]]
    ok = verify_cse(c.A, c.B, c)
    return (0 if ok else 1), {"verified": ok, "lag": c.m}, \
        [["shift equivalence", True], ["compatibility", ok]]


def _cmd_derived_identities(inputs, ctx):
    A, B = _pair(inputs, required=False)
    c = _cse(_witnesses(inputs, 1)[0], "witness", A, B)
    if not verify_se(c.A, c.B, c.se) or not verify_cse(c.A, c.B, c):
        return 1, {"holds": False, "reason": "witness is not compatible"}, [["compatibility", False]]
    ok = check_derived_identities(c.A, c.B, c)
    return (0 if ok else 1), {"holds": ok}, [["compatibility", True], ["derived identities", ok]]


def _cse_result(c, A, B):
    ok = verify_cse(A, B, c)
    derived = check_derived_identities(A, B, c) if ok else False
    return cse_to_json(c), [["compatibility", ok], ["derived identities", derived]]


def _cmd_sse_to_cse(inputs, ctx):
    A, B = _pair(inputs)
    step = step_from_json(_witnesses(inputs, 1)[0], "witness")
    try:
        c = sse_step_to_cse(A, B, step)
    except NotElementary as exc:
        return 1, {"verified": False, "reason": str(exc)}, [["elementary step", False]]
    result, checks = _cse_result(c, A, B)
    return (0 if all(v for _, v in checks) else 1), {"witness": result}, checks


def _cmd_compose_cse(inputs, ctx):
    w1, w2 = _witnesses(inputs, 2)[:2]
    c1, c2 = _cse(w1, "witness[0]"), _cse(w2, "witness[1]")
    c = compose_cse(c1, c2)
    result, checks = _cse_result(c, c.A, c.B)
    return (0 if all(v for _, v in checks) else 1), {"witness": result}, checks


def _cmd_chain_to_cse(inputs, ctx):
    A, B = _pair(inputs, required=False)
    chain = chain_from_json(_witnesses(inputs, 1)[0], "witness")
    if A is not None and chain.start != A:
        raise SchemaError("witness.start", "chain does not start at pair.A")
    target = B if B is not None else chain.end
    if chain.end != target:
        raise SchemaError("witness.steps", "chain does not end at pair.B")
    c = chain_to_cse(chain, target)
    result, checks = _cse_result(c, chain.start, target)
    return (0 if all(v for _, v in checks) else 1), {"witness": result}, checks


def _search_outcome(res, payload, checks):
    result = {"status": res.status, "nodes": res.nodes, "note": res.note}
    if res.witness is None:
        return 1, result, checks
    result["witness"] = payload
    return (0 if all(v for _, v in checks) else 1), result, checks


def _budget_exceeded(exc):
    return 1, {"status": "budget-exceeded", "nodes": exc.nodes, "note": str(exc)}, []


def _cmd_search_elementary(inputs, ctx):
    A, B = _pair(inputs)
    res = search_elementary(A, B, _budget(inputs), workers=ctx["workers"])
    if res.witness is None:
        return _search_outcome(res, None, [])
    step = res.witness
    c = sse_step_to_cse(A, B, step)
    checks = [["A == RS", step.source == A], ["B == SR", step.target == B],
              ["compatible witness from step", verify_cse(A, B, c)]]
    return _search_outcome(res, step_to_json(step), checks)


def _cmd_search_sse(inputs, ctx):
    A, B = _pair(inputs)
    res = search_sse_chain(A, B, _budget(inputs), workers=ctx["workers"], progress=ctx["progress"])
    if res.witness is None:
        return _search_outcome(res, None, [])
    chain = res.witness
    c = chain_to_cse(chain, B)
    checks = [["chain starts at A", chain.start == A], ["chain ends at B", chain.end == B],
              ["compatible witness from chain", verify_cse(A, B, c)]]
    return _search_outcome(res, chain_to_json(chain), checks)


def _cmd_search_se(inputs, ctx):
    A, B = _pair(inputs)
    res = search_se_witness(A, B, _budget(inputs), workers=ctx["workers"])
    if res.witness is None:
        return _search_outcome(res, None, [])
    checks = [[k, v] for k, v in se_equations(A, B, res.witness).items()]
    return _search_outcome(res, se_witness_to_json(res.witness), checks)


def _cmd_search_cse(inputs, ctx):
    A, B = _pair(inputs)
    w = se_witness_from_json(_witnesses(inputs, 1)[0], "witness")
    if not verify_se(A, B, w):
        return 1, {"status": "invalid-input", "note": "witness is not a shift equivalence"}, \
            [["shift equivalence", False]]
    res = search_compatible_iso(A, B, w, _budget(inputs))
    if res.witness is None:
        return _search_outcome(res, None, [["shift equivalence", True]])
    result, checks = _cse_result(res.witness, A, B)
    return _search_outcome(res, result, checks)


def _cmd_invariants(inputs, ctx):
    A, B = _pair(inputs)
    report = se_obstruction_report(A, B)
    return (0 if report.verdict == INCONCLUSIVE else 1), report_to_json(report), \
        [["verdict", report.verdict == INCONCLUSIVE]]


def _rep_checks(rep, c, margin):
    ck = verify_ck_relations(rep, margin)
    rse = verify_rse_equations(rep, c, margin)
    vp = vertex_projections_agree(rep, margin)
    reports = {"ck_relations": check_report_to_json(ck), "rse_equations": check_report_to_json(rse),
               "vertex_projections": check_report_to_json(vp)}
    checks = [["Cuntz-Krieger relations", ck.ok], ["representation equations", rse.ok],
              ["vertex projections agree", vp.ok]]
    return reports, checks


def _cmd_rep_build(inputs, ctx):
    c = _cse(_witnesses(inputs, 1)[0], "witness")
    rep = build_representation(c, _depth(inputs, max(6, 2 * c.m)))
    reports, checks = _rep_checks(rep, c, _margin(inputs, c.m))
    result = {"representation": rep_to_json(rep), "reports": reports}
    return (0 if all(v for _, v in checks) else 1), result, checks


def _cmd_rep_verify(inputs, ctx):
    c = _cse(_witnesses(inputs, 1)[0], "witness")
    rep = build_representation(c, _depth(inputs, max(6, 2 * c.m)))
    reports, checks = _rep_checks(rep, c, _margin(inputs, c.m))
    result = {"depth": rep.depth, "margin": _margin(inputs, c.m), "reports": reports}
    return (0 if all(v for _, v in checks) else 1), result, checks


def _cmd_rep_twist(inputs, ctx):
    c = _cse(_witnesses(inputs, 1)[0], "witness")
    theta = _angle(inputs)
    rep = twist_representation(build_representation(c, _depth(inputs, max(6, 2 * c.m))), theta)
    reports, checks = _rep_checks(rep, c, _margin(inputs, c.m))
    result = {"depth": rep.depth, "angle": f"{theta.numerator}/{theta.denominator}",
              "margin": _margin(inputs, c.m), "reports": reports,
              "representation": rep_to_json(rep, include_assignments=False)}
    return (0 if all(v for _, v in checks) else 1), result, checks


HANDLERS = {
    "verify-se": _cmd_verify_se,
    "verify-cse": _cmd_verify_cse,
    "derived-identities": _cmd_derived_identities,
    "sse-to-cse": _cmd_sse_to_cse,
    "compose-cse": _cmd_compose_cse,
    "chain-to-cse": _cmd_chain_to_cse,
    "search-elementary": _cmd_search_elementary,
    "search-sse": _cmd_search_sse,
    "search-se": _cmd_search_se,
    "search-cse": _cmd_search_cse,
    "invariants": _cmd_invariants,
    "rep-build": _cmd_rep_build,
    "rep-verify": _cmd_rep_verify,
    "rep-twist": _cmd_rep_twist,
}


def run_command(command: str, inputs: dict, seed: int = 0, workers: int = 1,
                progress=None) -> tuple:
    """Execute one command on already-loaded inputs; returns ``(exit_code, certificate)``.

    Input problems raise :class:`InputError` or :class:`SchemaError`. The worker
    count is not part of the certificate: results do not depend on it.
    """
    if command not in HANDLERS:
        raise InputError(f"command: unknown command {command!r}")
    ctx = {"workers": workers, "progress": progress}
    try:
        code, result, checks = HANDLERS[command](inputs, ctx)
    except BudgetExceeded as exc:
        code, result, checks = _budget_exceeded(exc)
    cert = {"command": command, "inputs": inputs, "result": result,
            "checks": [[str(name), bool(ok)] for name, ok in checks],
            "tool_version": __version__, "seed": seed}
    return code, cert


def certificate_roundtrip(cert: dict, workers: int = 1) -> bool:
    """Re-run ``cert`` and compare result and checks byte for byte."""
    if cert.get("tool_version") != __version__:
        warnings.warn(f"certificate was produced by version {cert.get('tool_version')!r}, "
                      f"replaying with {__version__!r}", stacklevel=2)
    _, fresh = run_command(cert["command"], cert["inputs"], cert.get("seed", 0), workers)
    return (canonical_json(fresh["result"]) == canonical_json(cert.get("result"))
            and canonical_json(fresh["checks"]) == canonical_json(cert.get("checks")))


# --- argv handling -------------------------------------------------------------------

def _load(path, field):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{field}: cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{field}: malformed JSON in {path} (line {exc.lineno}, column {exc.colno})") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shiftequiv",
                                     description="Verify, construct and search shift equivalences.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--pair", help="JSON file with matrices A and B")
    parser.add_argument("--witness", action="append", default=[],
                        help="JSON witness file (repeat for compose-cse)")
    parser.add_argument("--budget", help="JSON search budget")
    parser.add_argument("--depth", type=int, help="truncation depth L (rep-*) or chain depth (search-sse)")
    parser.add_argument("--margin", type=int, help="residual-depth margin for representation checks")
    parser.add_argument("--angle", help="twist angle p/q, z = exp(2 pi i p/q) (rep-twist)")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", help="also write the certificate to this file")
    parser.add_argument("--progress", action="store_true",
                        help="stream search progress as JSON lines on stderr")
    return parser


def gather_inputs(args) -> dict:
    inputs = {}
    if args.pair:
        inputs["pair"] = _load(args.pair, "pair")
    if args.witness:
        inputs["witnesses"] = [_load(p, f"witness[{i}]") for i, p in enumerate(args.witness)]
    if args.budget:
        inputs["budget"] = _load(args.budget, "budget")
    for key in ("depth", "margin", "angle"):
        value = getattr(args, key)
        if value is not None:
            inputs[key] = value
    return inputs


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.workers < 1:
        print("error: workers: must be >= 1", file=sys.stderr)
        return 2

    def progress(event):
        if args.progress:
            print(canonical_json(event), file=sys.stderr, flush=True)

    try:
        inputs = gather_inputs(args)
        code, cert = run_command(args.command, inputs, args.seed, args.workers, progress)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = canonical_json(cert)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
