"""Exact evaluation of GKZ hypergeometric character sums over finite fields,
lattice-polytope weight combinatorics, and verification of Frobenius
rank/purity/weight-spectrum predictions."""

from .arith import (
    CycloNumber,
    FieldTower,
    FiniteField,
    additive_char,
    cyclo,
    discrete_log,
    embed_complex,
    make_field,
    mult_char,
    trace_and_norm,
)
from .frobenius import (
    InconsistentPowerSumsError,
    PowerSumSeries,
    PrecisionError,
    WeightReport,
    charpoly_from_power_sums,
    estimate_degree_hankel,
    nondegenerate_check,
    power_sums,
    verify_point,
    weight_spectrum,
)
from .lattice import (
    ExponentMatrix,
    Face,
    FaceLattice,
    GradedPoset,
    LatticePolytope,
    RationalCone,
    Sublattice,
    cone_of_face,
    extend_to_unimodular,
    hull,
    nonconfluence_vector,
    normalized_volume,
    poly_of_cone,
    positive_hull,
    quotient_cone,
    smith_normal_form,
    span_lattice,
)
from .resonance import (
    CharacterSpec,
    FactorizationResult,
    factor_through_face,
    kernel_generators,
    nonresonant,
)
from .sums import (
    BudgetExceededError,
    LaurentPolynomial,
    SumQuery,
    batch_all_characters,
    gauss_sum,
    get_tower,
    homogeneity_check,
    hyp_sum,
    katz_equivalence,
    kloosterman_sum,
    mixed_vs_twisted_identity,
    nonconfluent_factorization,
)
from .weights import (
    E_polynomial,
    GkzInstance,
    SpectrumPrediction,
    WeightPolynomial,
    alpha,
    beta,
    e_value,
    expected_spectrum,
    t_set,
)

__version__ = "0.1.0"
