"""Subproduct systems over N x N at a finite truncation degree.

Build and validate systems, complete staircase data maximally, realize
creation operators on the truncated Fock space, translate between systems
and homogeneous non-commutative polynomial ideals, and compute the variety
invariants that obstruct isomorphism of the associated operator algebras.
"""

from .commutation import (
    CellBoundError,
    CommutationRelation,
    RelationUnitarityError,
    big_w,
    exchange,
    flip_relation,
    fock_product,
    lift_m_n,
    lift_one_n,
    scalar_relation,
)
from .cpoly import CommutativePolynomial
from .fock import (
    FockOperator,
    TruncatedFock,
    cesaro_reconstruct,
    creation_operator,
    fourier_coefficient,
    fourier_total,
    generator_operators,
    identity_operator,
    op_norm_check,
    vacuum_character,
    zero_operator,
)
from .invariants import (
    InvariantPair,
    IsoSearchResult,
    IsoWitness,
    TruncatedPolynomial,
    TruncationOrderError,
    annihilates_to_order,
    beta_homomorphism,
    compute_invariants,
    iso_search,
    multi_equivalence_check,
    root_multiplicity_at_least,
    vacuum_image_constraint,
)
from .ncpoly import (
    HomogeneousComponent,
    ImproperIdealError,
    NCPolynomial,
    NonHomogeneousGeneratorError,
    UnsupportedGeneratorError,
    abelianize,
    commutation_generators,
    homogeneous_components,
    ideal_to_subproduct,
    is_homogeneous,
    phi_map,
    psi_map,
    subproduct_to_ideal,
)
from .subproduct import (
    PartialDataError,
    StaircaseError,
    StaircaseSet,
    SubproductSystem,
    ValidationReport,
    Violation,
    adjoin_over_n,
    dimension_profile,
    fiber_formula_check,
    from_fiber_bases,
    graded_degrees,
    maximal_completion,
    product_system,
    proper_splits,
    validate,
)
from .tensor_linalg import (
    TensorIndex,
    is_projection,
    is_unitary,
    kron,
    meet_projections,
    operator_norm,
    orthonormal_range_basis,
    projection_onto_span,
    rank_of_projection,
)
from .variety import (
    PolyballPoint,
    character_eval,
    in_c_set,
    is_good,
    polyball_membership,
    polyball_norm,
    qx_polynomial,
    variety_generators,
)

__version__ = "0.1.0"
