"""Shift equivalence witnesses and compatible path-isomorphism data.

Conventions. For ``A`` over ``V`` and ``B`` over ``W`` a lag-``m`` witness is a
pair ``R`` (``V x W``) and ``S`` (``W x V``) with

    A^m = RS,   B^m = SR,   AR = RB,   SA = BS.

A compatible witness adds four path isomorphisms

    phi_R : [A, R] -> [R, B]        phi_S : [B, S] -> [S, A]
    psi_A : [R, S] -> [A] * m       psi_B : [S, R] -> [B] * m

subject to the two compatibility equations

    phi_R^(m) == (id_R x psi_B) o (psi_A^-1 x id_R)
    phi_S^(m) == (id_S x psi_A) o (psi_B^-1 x id_S).

All checks are extensional over the finite path spaces.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (BrokenChain, DimensionMismatch, InvalidUnderlyingSE, InvalidWitness,
                     MiddleMismatch, NotElementary, NotSquare, SchemaError, SpecMismatch,
                     TypeCheckFailure)
from .matrix import NonnegMatrix, matrix_from_json, matrix_to_json, multiply, power
from .pathiso import (PathIso, compose, compose_many, identity, invert, make_canonical,
                      pathiso_from_json, pathiso_to_json, phi_power, product, product_many,
                      verify_path_iso)
from .paths import PathSpaceSpec, spec


@dataclass(frozen=True)
class SEWitness:
    m: int
    R: NonnegMatrix
    S: NonnegMatrix

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError("lag must be a positive integer")


@dataclass(frozen=True)
class ElementaryStep:
    R: NonnegMatrix
    S: NonnegMatrix

    def __post_init__(self):
        if self.R.cols != self.S.rows or self.S.cols != self.R.rows:
            raise DimensionMismatch("R and S are not mutually composable")

    @property
    def source(self) -> NonnegMatrix:
        return multiply(self.R, self.S)

    @property
    def target(self) -> NonnegMatrix:
        return multiply(self.S, self.R)


@dataclass(frozen=True)
class SSEChain:
    start: NonnegMatrix
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        current = self.start
        for i, step in enumerate(self.steps):
            if step.source != current:
                raise BrokenChain(f"step {i}: RS does not equal the current matrix")
            current = step.target

    def __len__(self):
        return len(self.steps)

    @property
    def end(self) -> NonnegMatrix:
        return self.steps[-1].target if self.steps else self.start

    def matrices(self) -> list:
        return [self.start] + [s.target for s in self.steps]


@dataclass(frozen=True, eq=False)
class CSEWitness:
    se: SEWitness
    phi_R: PathIso
    phi_S: PathIso
    psi_A: PathIso
    psi_B: PathIso

    @property
    def m(self) -> int:
        return self.se.m

    @property
    def R(self) -> NonnegMatrix:
        return self.se.R

    @property
    def S(self) -> NonnegMatrix:
        return self.se.S

    @property
    def A(self) -> NonnegMatrix:
        return self.phi_R.domain.factors[0]

    @property
    def B(self) -> NonnegMatrix:
        return self.phi_R.codomain.factors[1]

    def __eq__(self, other):
        if not isinstance(other, CSEWitness):
            return NotImplemented
        return (self.se == other.se and self.phi_R == other.phi_R and self.phi_S == other.phi_S
                and self.psi_A == other.psi_A and self.psi_B == other.psi_B)

    __hash__ = None

    def replace(self, **changes) -> "CSEWitness":
        fields = dict(se=self.se, phi_R=self.phi_R, phi_S=self.phi_S,
                      psi_A=self.psi_A, psi_B=self.psi_B)
        fields.update(changes)
        return CSEWitness(**fields)


def expected_specs(A: NonnegMatrix, B: NonnegMatrix, w: SEWitness) -> dict:
    """Domain and codomain of each of the four isomorphisms of a compatible witness."""
    R, S, m = w.R, w.S, w.m
    return {
        "phi_R": (spec(A, R), spec(R, B)),
        "phi_S": (spec(B, S), spec(S, A)),
        "psi_A": (spec(R, S), PathSpaceSpec((A,) * m)),
        "psi_B": (spec(S, R), PathSpaceSpec((B,) * m)),
    }


def _check_shapes(A, B, w):
    if not A.is_square:
        raise NotSquare("A is not square")
    if not B.is_square:
        raise NotSquare("B is not square")
    if w.R.rows != A.rows or w.R.cols != B.rows:
        raise DimensionMismatch("R must be indexed by (rows of A) x (rows of B)")
    if w.S.rows != B.rows or w.S.cols != A.rows:
        raise DimensionMismatch("S must be indexed by (rows of B) x (rows of A)")


def se_equations(A: NonnegMatrix, B: NonnegMatrix, w: SEWitness) -> dict:
    """Each defining equation of the witness, evaluated exactly.

    The intertwining relation on the ``S`` side is checked as ``SA == BS``.
    The ordering ``SB == AS`` is reported as well, but only when the index
    sets make it composable; it does not enter :func:`verify_se`.
    """
    _check_shapes(A, B, w)
    R, S, m = w.R, w.S, w.m
    out = {
        "A^m == RS": power(A, m) == multiply(R, S),
        "B^m == SR": power(B, m) == multiply(S, R),
        "AR == RB": multiply(A, R) == multiply(R, B),
        "SA == BS": multiply(S, A) == multiply(B, S),
    }
    if S.cols == B.rows and A.cols == S.rows:
        out["SB == AS (alternate ordering)"] = multiply(S, B) == multiply(A, S)
    return out


def verify_se(A: NonnegMatrix, B: NonnegMatrix, w: SEWitness) -> bool:
    eqs = se_equations(A, B, w)
    return all(v for k, v in eqs.items() if not k.endswith("(alternate ordering)"))


def _isos(c: CSEWitness) -> dict:
    return {"phi_R": c.phi_R, "phi_S": c.phi_S, "psi_A": c.psi_A, "psi_B": c.psi_B}


def compatibility_sides(c: CSEWitness) -> tuple:
    """``(phi_R^(m), rhs_R, phi_S^(m), rhs_S)`` for the two compatibility equations."""
    m, R, S = c.m, c.R, c.S
    id_R, id_S = identity(spec(R)), identity(spec(S))
    lhs_R = phi_power(c.phi_R, m)
    rhs_R = compose(product(id_R, c.psi_B), product(invert(c.psi_A), id_R))
    lhs_S = phi_power(c.phi_S, m)
    rhs_S = compose(product(id_S, c.psi_A), product(invert(c.psi_B), id_S))
    return lhs_R, rhs_R, lhs_S, rhs_S


def cse_structure_ok(A: NonnegMatrix, B: NonnegMatrix, c: CSEWitness) -> bool:
    """The four maps have the prescribed shapes and are path isomorphisms."""
    specs = expected_specs(A, B, c.se)
    for name, f in _isos(c).items():
        dom, cod = specs[name]
        if f.domain != dom or f.codomain != cod or not verify_path_iso(f):
            return False
    return True


def verify_cse(A: NonnegMatrix, B: NonnegMatrix, c: CSEWitness) -> bool:
    if not verify_se(A, B, c.se):
        raise InvalidUnderlyingSE("the underlying shift equivalence does not hold")
    if not cse_structure_ok(A, B, c):
        return False
    lhs_R, rhs_R, lhs_S, rhs_S = compatibility_sides(c)
    return lhs_R == rhs_R and lhs_S == rhs_S


def derived_identity_sides(c: CSEWitness) -> tuple:
    """Both sides of the two identities on ``[R, B, S]`` and ``[S, A, R]``."""
    A, B, R, S = c.A, c.B, c.R, c.S
    id_ = lambda M: identity(spec(M))  # noqa: E731
    left_A = compose(product(c.psi_A, id_(A)), product(id_(R), c.phi_S))
    right_A = compose(product(id_(A), c.psi_A), product(invert(c.phi_R), id_(S)))
    left_B = compose(product(c.psi_B, id_(B)), product(id_(S), c.phi_R))
    right_B = compose(product(id_(B), c.psi_B), product(invert(c.phi_S), id_(R)))
    return left_A, right_A, left_B, right_B


def check_derived_identities(A: NonnegMatrix, B: NonnegMatrix, c: CSEWitness) -> bool:
    """The two identities every compatible witness satisfies automatically.

    Raises :class:`InvalidWitness` if ``c`` is not compatible to begin with.
    """
    try:
        ok = verify_cse(A, B, c)
    except InvalidUnderlyingSE as exc:
        raise InvalidWitness(str(exc)) from exc
    if not ok:
        raise InvalidWitness("witness fails the compatibility equations")
    left_A, right_A, left_B, right_B = derived_identity_sides(c)
    return left_A == right_A and left_B == right_B


def sse_step_to_cse(A: NonnegMatrix, B: NonnegMatrix, step: ElementaryStep) -> CSEWitness:
    """Lag-1 compatible witness for an elementary step, with canonical ``psi`` maps
    and ``phi`` maps forced by the compatibility equations."""
    R, S = step.R, step.S
    if R.rows != A.rows or S.rows != B.rows:
        raise NotElementary("R, S are not indexed compatibly with A, B")
    if multiply(R, S) != A or multiply(S, R) != B:
        raise NotElementary("A != RS or B != SR")
    psi_A = make_canonical(spec(R, S), spec(A))
    psi_B = make_canonical(spec(S, R), spec(B))
    id_R, id_S = identity(spec(R)), identity(spec(S))
    phi_R = compose(product(id_R, psi_B), product(invert(psi_A), id_R))
    phi_S = compose(product(id_S, psi_A), product(invert(psi_B), id_S))
    return CSEWitness(SEWitness(1, R, S), phi_R, phi_S, psi_A, psi_B)


def identity_step(A: NonnegMatrix) -> ElementaryStep:
    return ElementaryStep(A, NonnegMatrix.identity(A.rows))


def identity_cse(A: NonnegMatrix) -> CSEWitness:
    """The lag-1 witness ``R = A``, ``S = I`` from ``A`` to itself."""
    return sse_step_to_cse(A, A, identity_step(A))


def compose_cse(c1: CSEWitness, c2: CSEWitness) -> CSEWitness:
    """Compatible witness from ``A`` to ``C`` of lag ``m1 + m2`` with matrices
    ``R1 R2`` and ``S2 S1``.

    The maps are first assembled over factored path spaces (``[R1, R2]`` in
    place of ``R1 R2``) and then transported to the product matrices through
    the canonical blockwise identification of their edges with 2-paths.
    """
    A, B, C = c1.A, c1.B, c2.B
    if c2.A != B:
        raise MiddleMismatch("the middle matrices of the two witnesses differ")
    m1, m2 = c1.m, c2.m
    R1, S1, R2, S2 = c1.R, c1.S, c2.R, c2.S
    try:
        idm = lambda *Ms: identity(PathSpaceSpec(Ms))  # noqa: E731
        RR, SS = multiply(R1, R2), multiply(S2, S1)
        iota_R = make_canonical(spec(RR), spec(R1, R2))
        iota_S = make_canonical(spec(SS), spec(S2, S1))

        phi_RR_f = compose(product(idm(R1), c2.phi_R), product(c1.phi_R, idm(R2)))
        phi_SS_f = compose(product(idm(S2), c1.phi_S), product(c2.phi_S, idm(S1)))
        psi_A_f = compose_many(
            product(idm(*(A,) * m2), c1.psi_A),
            product(invert(phi_power(c1.phi_R, m2)), idm(S1)),
            product_many(idm(R1), c2.psi_A, idm(S1)),
        )
        psi_C_f = compose_many(
            product(idm(*(C,) * m1), c2.psi_B),
            product(invert(phi_power(c2.phi_S, m1)), idm(R2)),
            product_many(idm(S2), c1.psi_B, idm(R2)),
        )

        phi_RR = compose_many(product(invert(iota_R), idm(C)), phi_RR_f, product(idm(A), iota_R))
        phi_SS = compose_many(product(invert(iota_S), idm(A)), phi_SS_f, product(idm(C), iota_S))
        psi_A = compose(psi_A_f, product(iota_R, iota_S))
        psi_C = compose(psi_C_f, product(iota_S, iota_R))
    except (SpecMismatch, TypeCheckFailure, KeyError) as exc:
        raise TypeCheckFailure(f"composition did not type-check: {exc}") from exc
    return CSEWitness(SEWitness(m1 + m2, RR, SS), phi_RR, phi_SS, psi_A, psi_C)


def chain_to_cse(chain: SSEChain, target: NonnegMatrix) -> CSEWitness:
    """Fold a chain of elementary steps into one compatible witness of lag ``len(chain)``.

    An empty chain (``start == target``) yields :func:`identity_cse`.
    """
    if chain.end != target:
        raise BrokenChain("the chain does not end at the target matrix")
    if not chain.steps:
        return identity_cse(chain.start)
    current = chain.start
    result = None
    for step in chain.steps:
        nxt = step.target
        c = sse_step_to_cse(current, nxt, step)
        result = c if result is None else compose_cse(result, c)
        current = nxt
    return result


def strip(c: CSEWitness) -> SEWitness:
    return c.se


# --- JSON -----------------------------------------------------------------

def se_witness_to_json(w: SEWitness) -> dict:
    return {"m": w.m, "R": matrix_to_json(w.R), "S": matrix_to_json(w.S)}


def _lag(obj, field):
    m = obj.get("m")
    if isinstance(m, str) and m.isdigit():
        m = int(m)
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise SchemaError(field, "lag must be a positive integer")
    return m


def _require(obj, key, field):
    if not isinstance(obj, dict):
        raise SchemaError(field, "expected an object")
    if key not in obj:
        raise SchemaError(f"{field}.{key}", "missing")
    return obj[key]


def se_witness_from_json(obj, field="witness") -> SEWitness:
    _require(obj, "m", field)
    R = matrix_from_json(_require(obj, "R", field), f"{field}.R")
    S = matrix_from_json(_require(obj, "S", field), f"{field}.S")
    return SEWitness(_lag(obj, f"{field}.m"), R, S)


def step_to_json(step: ElementaryStep) -> dict:
    return {"R": matrix_to_json(step.R), "S": matrix_to_json(step.S)}


def step_from_json(obj, field="step") -> ElementaryStep:
    R = matrix_from_json(_require(obj, "R", field), f"{field}.R")
    S = matrix_from_json(_require(obj, "S", field), f"{field}.S")
    try:
        return ElementaryStep(R, S)
    except DimensionMismatch as exc:
        raise SchemaError(field, str(exc)) from exc


def chain_to_json(chain: SSEChain) -> dict:
    return {"start": matrix_to_json(chain.start),
            "steps": [step_to_json(s) for s in chain.steps]}


def chain_from_json(obj, field="chain") -> SSEChain:
    start = matrix_from_json(_require(obj, "start", field), f"{field}.start")
    steps = _require(obj, "steps", field)
    if not isinstance(steps, list):
        raise SchemaError(f"{field}.steps", "expected a list")
    parsed = [step_from_json(s, f"{field}.steps[{i}]") for i, s in enumerate(steps)]
    try:
        return SSEChain(start, tuple(parsed))
    except BrokenChain as exc:
        raise SchemaError(f"{field}.steps", str(exc)) from exc


def cse_to_json(c: CSEWitness) -> dict:
    out = {"A": matrix_to_json(c.A), "B": matrix_to_json(c.B)}
    out.update(se_witness_to_json(c.se))
    for name, f in _isos(c).items():
        out[name] = pathiso_to_json(f)
    return out


def cse_from_json(obj, field="witness") -> CSEWitness:
    se = se_witness_from_json(obj, field)
    isos = {name: pathiso_from_json(_require(obj, name, field), f"{field}.{name}")
            for name in ("phi_R", "phi_S", "psi_A", "psi_B")}
    return CSEWitness(se, **isos)
