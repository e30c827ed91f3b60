"""Path isomorphisms: source- and range-preserving bijections of path spaces.

A :class:`PathIso` is fully materialized: both directions are stored as
dictionaries keyed by paths. Equality is extensional.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import (BlockMismatch, NonComposableFactors, SchemaError, ShapeMismatch,
                     SpecMismatch, TypeCheckFailure)
from .paths import (PathSpaceSpec, block_of, blocks, path_from_json, path_index, path_space,
                    path_to_json, spec_from_json, spec_to_json)


@dataclass(frozen=True, eq=False)
class PathIso:
    domain: PathSpaceSpec
    codomain: PathSpaceSpec
    forward: dict
    backward: dict

    def __call__(self, p):
        return self.forward[p]

    def inverse(self, q):
        return self.backward[q]

    def __len__(self):
        return len(self.forward)

    def __eq__(self, other):
        if not isinstance(other, PathIso):
            return NotImplemented
        return (self.domain == other.domain and self.codomain == other.codomain
                and self.forward == other.forward)

    __hash__ = None

    def __repr__(self):
        return f"PathIso({len(self.domain)} -> {len(self.codomain)} factors, {len(self.forward)} paths)"

    @classmethod
    def from_pairs(cls, domain, codomain, pairs) -> "PathIso":
        """Build from explicit pairs without any validation (see :func:`verify_path_iso`)."""
        forward, backward = {}, {}
        for p, q in pairs:
            forward[p] = q
            backward[q] = p
        return cls(domain, codomain, forward, backward)

    def pairs(self) -> list:
        return [(p, self.forward[p]) for p in path_space(self.domain) if p in self.forward]


def from_function(domain: PathSpaceSpec, codomain: PathSpaceSpec, fn: Callable) -> PathIso:
    """Materialize ``fn`` over ``domain``; the result must be a bijection into ``codomain``."""
    target = path_index(codomain)
    forward, backward = {}, {}
    for p in path_space(domain):
        q = fn(p)
        if q not in target:
            raise TypeCheckFailure(f"image {q!r} of {p!r} is not a codomain path")
        if q in backward:
            raise TypeCheckFailure(f"map is not injective at {q!r}")
        forward[p] = q
        backward[q] = p
    if len(backward) != len(target):
        raise TypeCheckFailure("map is not surjective")
    return PathIso(domain, codomain, forward, backward)


def identity(s: PathSpaceSpec) -> PathIso:
    ps = path_space(s)
    table = dict(zip(ps, ps))
    return PathIso(s, s, table, dict(table))


def make_canonical(domain: PathSpaceSpec, codomain: PathSpaceSpec) -> PathIso:
    """Blockwise order-preserving bijection: the i-th domain path from v to w
    goes to the i-th codomain path from v to w."""
    if domain.rows != codomain.rows or domain.cols != codomain.cols:
        raise BlockMismatch("domain and codomain have different endpoint index sets")
    src, dst = blocks(domain), blocks(codomain)
    for key in set(src) | set(dst):
        if len(src.get(key, ())) != len(dst.get(key, ())):
            raise BlockMismatch(
                f"block {key!r}: {len(src.get(key, ()))} domain paths vs "
                f"{len(dst.get(key, ()))} codomain paths")
    forward, backward = {}, {}
    for key, ps in src.items():
        for p, q in zip(ps, dst[key]):
            forward[p] = q
            backward[q] = p
    return PathIso(domain, codomain, forward, backward)


def compose(g: PathIso, f: PathIso) -> PathIso:
    """``g o f``; ``f.codomain`` must be exactly ``g.domain``."""
    if f.codomain != g.domain:
        raise SpecMismatch("cannot compose: codomain of f is not the domain of g")
    gf, fb = g.forward, g.backward
    ff, fback = f.forward, f.backward
    forward = {p: gf[q] for p, q in ff.items()}
    backward = {r: fback[s] for r, s in fb.items()}
    return PathIso(f.domain, g.codomain, forward, backward)


def product(f: PathIso, g: PathIso) -> PathIso:
    """``f x g``: acts as ``f`` on the leading factors and ``g`` on the rest."""
    try:
        domain = f.domain + g.domain
        codomain = f.codomain + g.codomain
    except NonComposableFactors as exc:
        raise NonComposableFactors(f"product of non-composable isomorphisms: {exc}") from exc
    k = len(f.domain)
    ff, gf = f.forward, g.forward
    return from_function(domain, codomain, lambda p: ff[p[:k]] + gf[p[k:]])


def product_many(*isos: PathIso) -> PathIso:
    """Left-fold :func:`product` over the non-``None`` arguments."""
    isos = [f for f in isos if f is not None]
    result = isos[0]
    for f in isos[1:]:
        result = product(result, f)
    return result


def compose_many(*isos: PathIso) -> PathIso:
    """``isos[0] o isos[1] o ... o isos[-1]``."""
    result = isos[-1]
    for g in reversed(isos[:-1]):
        result = compose(g, result)
    return result


def invert(f: PathIso) -> PathIso:
    return PathIso(f.codomain, f.domain, f.backward, f.forward)


def phi_power(phi: PathIso, m: int) -> PathIso:
    """Staircase power of ``phi: [X, Y] -> [Y, Z]``, a map ``[X]*m + [Y] -> [Y] + [Z]*m``.

    Applies ``id_{X^k} x phi x id_{Z^{m-1-k}}`` for ``k = m-1, ..., 0``.
    """
    if m < 1:
        raise ValueError("phi_power needs m >= 1")
    if len(phi.domain) != 2 or len(phi.codomain) != 2:
        raise ShapeMismatch("phi must map a two-factor space to a two-factor space")
    X, Y = phi.domain.factors
    Y2, Z = phi.codomain.factors
    if Y != Y2:
        raise ShapeMismatch("phi must have the form [X, Y] -> [Y, Z]")
    if not X.is_square or not Z.is_square:
        raise ShapeMismatch("X and Z must be square")
    if m == 1:
        return phi
    table = phi.forward

    def staircase(p):
        state = list(p)
        for k in range(m - 1, -1, -1):
            y, z = table[(state[k], state[k + 1])]
            state[k], state[k + 1] = y, z
        return tuple(state)

    domain = PathSpaceSpec((X,) * m + (Y,))
    codomain = PathSpaceSpec((Y,) + (Z,) * m)
    return from_function(domain, codomain, staircase)


def verify_path_iso(f: PathIso) -> bool:
    """Bijectivity plus source/range preservation over the whole domain."""
    dom = path_index(f.domain)
    cod = path_index(f.codomain)
    if set(f.forward) != set(dom) or len(dom) != len(cod):
        return False
    seen = set()
    for p, q in f.forward.items():
        if q not in cod or q in seen:
            return False
        seen.add(q)
        if block_of(p) != block_of(q):
            return False
        if f.backward.get(q) != p:
            return False
    return len(f.backward) == len(f.forward)


def lex_key(f: PathIso) -> tuple:
    """Codomain positions of the images, in domain order; orders isos lexicographically."""
    cod = path_index(f.codomain)
    return tuple(cod[f.forward[p]] for p in path_space(f.domain))


# --- JSON -----------------------------------------------------------------

def pathiso_to_json(f: PathIso) -> dict:
    return {"domain": spec_to_json(f.domain),
            "codomain": spec_to_json(f.codomain),
            "pairs": [[path_to_json(p), path_to_json(q)] for p, q in f.pairs()]}


def pathiso_from_json(obj, field="pathiso") -> PathIso:
    if not isinstance(obj, dict):
        raise SchemaError(field, "expected an object with domain/codomain/pairs")
    for key in ("domain", "codomain", "pairs"):
        if key not in obj:
            raise SchemaError(f"{field}.{key}", "missing")
    domain = spec_from_json(obj["domain"], f"{field}.domain")
    codomain = spec_from_json(obj["codomain"], f"{field}.codomain")
    if not isinstance(obj["pairs"], list):
        raise SchemaError(f"{field}.pairs", "expected a list of [path, path] pairs")
    pairs = []
    for i, pair in enumerate(obj["pairs"]):
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(f"{field}.pairs[{i}]", "expected [path, path]")
        pairs.append((path_from_json(pair[0], f"{field}.pairs[{i}][0]"),
                      path_from_json(pair[1], f"{field}.pairs[{i}][1]")))
    return PathIso.from_pairs(domain, codomain, pairs)
