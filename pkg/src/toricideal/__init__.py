"""Exact test ideals and multiplier ideals of monomial ideals on toric schemes.

The package computes, in exact rational arithmetic, the big Cohen-Macaulay
test ideal of pairs and triples, the multiplier ideal, and the
characteristic-p test ideal of a monomial ideal on an affine toric scheme,
through three mutually cross-checking routes: a closed polyhedral formula, a
toric log resolution, and a truncated local-cohomology annihilator oracle.
"""

from .cones import Cone, HilbertBasis, dual_cone, hilbert_basis
from .cohomology_oracle import (
    GradedKernel,
    TruncationBox,
    cohomology_monomials,
    kernel_monomials,
    oracle_pair_ideal,
    pairs_to_zero,
)
from .divisors import (
    NotQCartierError,
    PairWeight,
    QDivisor,
    canonical_divisor,
    div_monomial,
    effectivizing_shift,
    is_effective,
    is_q_cartier,
    pair_weight,
)
from .newton import MonomialIdeal, NewtonPolyhedron, newton_polyhedron
from .resolution import (
    Fan,
    ResolutionResult,
    multiplier_ideal_via_resolution,
    normal_fan,
    ord_along_ray,
    replay,
    resolve,
    star_subdivision,
)
from .test_ideals import (
    IdealAnswer,
    MembershipRegion,
    bcm_test_ideal_pair,
    bcm_test_ideal_triple,
    bcm_test_submodule_gamma,
    charp_test_ideal,
    membership,
    minimal_generators,
    multiplier_ideal_howald,
)

__version__ = "0.1.0"

__all__ = [
    "Cone",
    "HilbertBasis",
    "dual_cone",
    "hilbert_basis",
    "MonomialIdeal",
    "NewtonPolyhedron",
    "newton_polyhedron",
    "QDivisor",
    "PairWeight",
    "NotQCartierError",
    "canonical_divisor",
    "div_monomial",
    "is_q_cartier",
    "pair_weight",
    "is_effective",
    "effectivizing_shift",
    "MembershipRegion",
    "IdealAnswer",
    "minimal_generators",
    "bcm_test_ideal_pair",
    "bcm_test_submodule_gamma",
    "bcm_test_ideal_triple",
    "multiplier_ideal_howald",
    "charp_test_ideal",
    "membership",
    "Fan",
    "ResolutionResult",
    "star_subdivision",
    "resolve",
    "replay",
    "ord_along_ray",
    "normal_fan",
    "multiplier_ideal_via_resolution",
    "TruncationBox",
    "GradedKernel",
    "cohomology_monomials",
    "kernel_monomials",
    "pairs_to_zero",
    "oracle_pair_ideal",
    "__version__",
]
