"""Exact arithmetic-dynamics toolkit for triangular polynomial self-maps.

Submodules:

  qpoly        exact sparse multivariate polynomials over the rationals
  maps         triangular self-maps, symbolic iteration, exact orbits
  degrees      degree matrices, dynamical degrees, spectral-radius estimates
  heights      Weil heights, arithmetic-degree and canonical-height sequences
  padic        p-adic valuations and the stable-sector construction
  density      exact-rank Zariski-density proxy
  experiments  end-to-end pipelines with deterministic reports
"""

from .qpoly import (
    DimensionMismatchError,
    Polynomial,
    ResourceLimitError,
    parse_polynomial,
    rational,
)
from .maps import (
    NotDominantError,
    NotTriangularError,
    Orbit,
    ResourceCaps,
    TriangularMap,
    as_point,
    iterate_symbolic,
    orbit,
    orbits_disjoint_prefix,
    triangular_map,
    validate,
)
from .degrees import (
    DegreeMatrix,
    check_composition_bounds,
    degree_matrix,
    dynamical_degree_exact,
    dynamical_degree_sequence,
    product_dynamical_degree,
    product_map,
    spectral_radius_maxroot,
)
from .heights import (
    ProjectivePoint,
    alpha_bounds,
    embed_affine,
    height_sequence,
    product_height_additivity,
    weil_height,
)
from .padic import (
    SectorConfig,
    case_n2_growth,
    choose_C,
    dominant_monomial,
    find_unit_prime,
    in_U,
    sample_U,
    sector_config,
    u_minus_fu_witness,
    verify_dominant_value,
    verify_stability,
    vp,
)
from .density import density_check
from .experiments import ExperimentConfig, iterate_consistency, run_experiment

__version__ = "0.1.0"

__all__ = [
    "DegreeMatrix",
    "DimensionMismatchError",
    "ExperimentConfig",
    "NotDominantError",
    "NotTriangularError",
    "Orbit",
    "Polynomial",
    "ProjectivePoint",
    "ResourceCaps",
    "ResourceLimitError",
    "SectorConfig",
    "TriangularMap",
    "alpha_bounds",
    "as_point",
    "case_n2_growth",
    "check_composition_bounds",
    "choose_C",
    "degree_matrix",
    "density_check",
    "dominant_monomial",
    "dynamical_degree_exact",
    "dynamical_degree_sequence",
    "embed_affine",
    "find_unit_prime",
    "height_sequence",
    "in_U",
    "iterate_consistency",
    "iterate_symbolic",
    "orbit",
    "orbits_disjoint_prefix",
    "parse_polynomial",
    "product_dynamical_degree",
    "product_height_additivity",
    "product_map",
    "rational",
    "run_experiment",
    "sample_U",
    "sector_config",
    "spectral_radius_maxroot",
    "triangular_map",
    "u_minus_fu_witness",
    "validate",
    "verify_dominant_value",
    "verify_stability",
    "vp",
    "weil_height",
]
