"""Kronecker-contraction engine for higher-order mean curvatures."""

from .contractions import (
    InvariantSample,
    elementary_symmetric,
    h2p1_at,
    h2p1_reference,
    intrinsic_from_relative,
    intrinsic_invariants,
    invariant_sample,
    k2p_at,
    k2p_reference,
    normalized_symmetric,
)
from .kronecker import KroneckerSymbol, kronecker_symbol, ordered_tuples, permutation_sign, shuffle_table
from .normal_integrals import (
    h2p1_via_normal_integral,
    k2p_via_normal_integral,
    pairings,
    sigma_sphere_integral,
    sphere_moment,
    sphere_monomial_moment,
    sphere_volume,
)
from .wedge import two_form_stack, wedge_batch, wedge_eval, wedge_eval_vectors

__all__ = [
    "InvariantSample",
    "KroneckerSymbol",
    "elementary_symmetric",
    "h2p1_at",
    "h2p1_reference",
    "h2p1_via_normal_integral",
    "intrinsic_from_relative",
    "intrinsic_invariants",
    "invariant_sample",
    "k2p_at",
    "k2p_reference",
    "k2p_via_normal_integral",
    "kronecker_symbol",
    "normalized_symmetric",
    "ordered_tuples",
    "pairings",
    "permutation_sign",
    "sigma_sphere_integral",
    "shuffle_table",
    "sphere_moment",
    "sphere_monomial_moment",
    "sphere_volume",
    "two_form_stack",
    "wedge_batch",
    "wedge_eval",
    "wedge_eval_vectors",
]
