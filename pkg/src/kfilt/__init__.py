"""Exact invariants of filtrations of graded rings.

The main entry points are re-exported here; see the submodules for the rest.
"""

__version__ = "0.1.0"

from .errors import KFiltError
from .poly import Poly
from .parser import parse_poly
from .ring import GradedRing, projective_space
from .linalg import Subspace
from .filtration import (
    ReesPresentation,
    TabulatedFiltration,
    approximate,
    is_equivariant,
    product_filtration,
    trivial_filtration,
    validate_rees,
)
from .torus import OneParamSubgroup, Torus
from .fitting import fit, fit_quasi
from .specialize import cross_check, generic_ops, rees_initial, specialize, specialize_tc
from .invariants import (
    df_and_norm,
    distance,
    invariants,
    pair,
    pair_k,
    perp_invariants,
    project_torus,
    weight_functions,
)
from .appendix import BigradedAlgebraTable, initial_algebra_census, run_example, verify_claim1, verify_claim2

__all__ = [
    "BigradedAlgebraTable",
    "GradedRing",
    "KFiltError",
    "OneParamSubgroup",
    "Poly",
    "ReesPresentation",
    "Subspace",
    "TabulatedFiltration",
    "Torus",
    "approximate",
    "cross_check",
    "df_and_norm",
    "distance",
    "fit",
    "fit_quasi",
    "generic_ops",
    "initial_algebra_census",
    "invariants",
    "is_equivariant",
    "pair",
    "pair_k",
    "parse_poly",
    "perp_invariants",
    "product_filtration",
    "project_torus",
    "projective_space",
    "rees_initial",
    "run_example",
    "specialize",
    "specialize_tc",
    "trivial_filtration",
    "validate_rees",
    "verify_claim1",
    "verify_claim2",
    "weight_functions",
]
