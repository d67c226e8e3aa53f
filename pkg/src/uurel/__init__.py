"""Universal uncertainty relations: majorization bounds on joint measurement outcomes.

The central objects are the bound sequence ``Ω̃_k`` (a computable upper bound
on the largest total probability of any k joint outcomes) and the vector
``ω̃`` of its differences, which majorizes the joint outcome distribution of
every state.  Every Schur-concave measure of uncertainty then gives a scalar
uncertainty relation ``Φ(p ⊗ q) >= Φ(ω̃)``.
"""
from .errors import (
    BudgetExceeded,
    ConvergenceError,
    DimensionMismatch,
    InvariantError,
    NormalizationError,
    ParseError,
    UurError,
)
from .majorization import (
    DEFAULT_MEASURES,
    MIN_ENTROPY,
    NEG_LOG_MIN,
    RENYI2,
    SHANNON,
    UncertaintyMeasure,
    majorizes,
    min_entropy,
    neg_log_min_nonzero,
    random_doubly_stochastic,
    renyi_entropy,
    shannon_entropy,
    tensor_product,
)
from .multi import (
    MeasurementEnsemble,
    WeightedScheme,
    build_bound_vector_multi,
    example1_ensemble,
    omega_tilde_k_multi,
    omega_tilde_sequence_multi,
    verify_majorization_multi,
    weighted_bound,
)
from .oracle import (
    OptimizerConfig,
    max_product_pure,
    omega_k_oracle,
)
from .pair import (
    BoundSequence,
    UncertaintyVector,
    build_bound_vector,
    maassen_uffink_bound,
    omega1_exact,
    omega2_exact,
    omega_tilde_k,
    omega_tilde_sequence,
    overlap_stats,
    verify_majorization,
)
from .quantum import (
    DensityMatrix,
    HermitianOperator,
    OrthonormalBasis,
    Povm,
    StateVector,
    computational_basis,
    fourier_basis,
    haar_random_basis,
    measure,
    random_density,
    random_pure,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ConvergenceError",
    "DimensionMismatch",
    "InvariantError",
    "NormalizationError",
    "ParseError",
    "UurError",
    "DEFAULT_MEASURES",
    "MIN_ENTROPY",
    "NEG_LOG_MIN",
    "RENYI2",
    "SHANNON",
    "UncertaintyMeasure",
    "majorizes",
    "min_entropy",
    "neg_log_min_nonzero",
    "random_doubly_stochastic",
    "renyi_entropy",
    "shannon_entropy",
    "tensor_product",
    "MeasurementEnsemble",
    "WeightedScheme",
    "build_bound_vector_multi",
    "example1_ensemble",
    "omega_tilde_k_multi",
    "omega_tilde_sequence_multi",
    "verify_majorization_multi",
    "weighted_bound",
    "OptimizerConfig",
    "max_product_pure",
    "omega_k_oracle",
    "BoundSequence",
    "UncertaintyVector",
    "build_bound_vector",
    "maassen_uffink_bound",
    "omega1_exact",
    "omega2_exact",
    "omega_tilde_k",
    "omega_tilde_sequence",
    "overlap_stats",
    "verify_majorization",
    "DensityMatrix",
    "HermitianOperator",
    "OrthonormalBasis",
    "Povm",
    "StateVector",
    "computational_basis",
    "fourier_basis",
    "haar_random_basis",
    "measure",
    "random_density",
    "random_pure",
]
