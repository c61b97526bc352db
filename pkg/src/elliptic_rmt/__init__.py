"""Numerical experiments on random matrices with correlated off-diagonal pairs:
spectra and the elliptic limit law, least-singular-value tails, logarithmic
potentials, sphere-vector geometry, and concentration-of-measure bounds."""

from .concentration import (
    ConcentrationEstimate,
    DecouplingReport,
    DiscreteLaw,
    JointDiscreteLaw,
    QuadraticFormSpec,
    TensorizationReport,
    WeightedSumSpec,
    decoupling_check,
    estimate_concentration,
    petrov_bound,
    rademacher_law,
    sample_weighted_sum,
    small_ball_bound,
    tensorization_bound,
    tensorization_experiment,
)
from .elliptic import (
    EllipticLaw,
    contains,
    density,
    elliptic_report,
    ellipse_grid_chisquare,
    fraction_inside,
    imag_marginal_cdf,
    marginal_ks_distance,
    real_marginal_cdf,
)
from .ensemble import (
    CorrelatedPairDistribution,
    EnsembleSpec,
    MatrixSample,
    MomentReport,
    ShiftSpec,
    build_shift,
    empirical_moment_check,
    ensemble_from_toml_dict,
    ensemble_to_toml,
    sample_matrix,
    sample_pair,
)
from .errors import (
    DegenerateSubspaceError,
    EllipticRmtError,
    EnumerationLimitError,
    HypothesisViolatedError,
    InsufficientDataError,
    InternalInvariantError,
    InvalidSpecError,
    InvalidVectorError,
    NumericalFailureError,
    PoleError,
    ShiftNormViolationError,
    SingularMinorError,
    UnsupportedLawError,
)
from .geometry import (
    ClassParams,
    SpreadSet,
    VectorClass,
    classify,
    column_distance_profile,
    distance_formula,
    distance_to_span,
    distance_to_sparse,
    spread_set,
)
from .potential import (
    LogPotentialResult,
    NormTailReport,
    TailExperimentReport,
    large_sv_profile_check,
    log_potential_eigs,
    log_potential_pair,
    log_potential_svals,
    min_sv_tail_experiment,
    moment_diagnostics,
    norm_tail_experiment,
)
from .spectra import (
    EigenSpectrum,
    SingularSpectrum,
    eigenvalues,
    least_singular_value,
    operator_norm,
    read_eigenvalues_csv,
    shifted_singular_esd,
    singular_values,
    write_eigenvalues_csv,
    write_singular_values_csv,
)

__version__ = "0.1.0"
