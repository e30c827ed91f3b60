"""Executable shift equivalence relations for nonnegative integer matrices."""

__version__ = "0.1.0"

from .matrix import NonnegMatrix, block_assemble, is_essential, multiply, power  # noqa: E402
from .paths import Edge, PathSpaceSpec, edge_set, path_space, spec  # noqa: E402
from .pathiso import (PathIso, compose, identity, invert, make_canonical, phi_power,  # noqa: E402
                      product, verify_path_iso)
from .equivalences import (CSEWitness, ElementaryStep, SEWitness, SSEChain,  # noqa: E402
                           chain_to_cse, check_derived_identities, compose_cse, identity_cse,
                           sse_step_to_cse, strip, verify_cse, verify_se)
from .invariants import (bowen_franks, char_poly_away_from_zero, dimension_pair_data,  # noqa: E402
                         se_obstruction_report)
from .search import (SearchBudget, SearchResult, search_compatible_iso,  # noqa: E402
                     search_elementary, search_se_witness, search_sse_chain)
from .ckrep import (build_representation, twist_representation,  # noqa: E402
                    verify_ck_relations, verify_rse_equations)

__all__ = [
    "NonnegMatrix", "block_assemble", "is_essential", "multiply", "power",
    "Edge", "PathSpaceSpec", "edge_set", "path_space", "spec",
    "PathIso", "compose", "identity", "invert", "make_canonical", "phi_power", "product",
    "verify_path_iso",
    "CSEWitness", "ElementaryStep", "SEWitness", "SSEChain", "chain_to_cse",
    "check_derived_identities", "compose_cse", "identity_cse", "sse_step_to_cse", "strip",
    "verify_cse", "verify_se",
    "bowen_franks", "char_poly_away_from_zero", "dimension_pair_data", "se_obstruction_report",
    "SearchBudget", "SearchResult", "search_compatible_iso", "search_elementary",
    "search_se_witness", "search_sse_chain",
    "build_representation", "twist_representation", "verify_ck_relations",
    "verify_rse_equations",
]
