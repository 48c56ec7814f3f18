"""magkit: magnitude of finite metric spaces and its geometric apparatus.

Weightings, similarity embeddings, circumradii, pseudoinverse centered
similarity matrices, incremental Schur-complement subspace updates, strong
positive definiteness certificates, and submodularity verification, with
every fast computation path cross-checked against an independent dense
linear algebra oracle.
"""

from . import errors
from .asymptotics import (
    SweepPoint,
    asymptotic_ratio,
    default_log_grid,
    magnitude_sweep,
    sweep_to_csv,
    two_point_approximation,
)
from .embedding import (
    EmbeddingData,
    centered_similarity,
    circumradius_equilibrium,
    circumradius_geometric,
    embedding_to_dict,
    magnitude_via_circumradius,
    similarity_embedding,
    verify_subspace_characterization,
)
from .identities import (
    CoefficientData,
    FiedlerBapatBlock,
    InterlacingReport,
    ResidualReport,
    coefficient_data,
    fiedler_bapat_block,
    identity_residuals,
    interlacing_check,
    magnitude_via_determinant,
    magnitude_via_trace,
    magnitude_weighting_via_c,
    pseudoinverse_centered,
    upper_pairs,
)
from .kernels import BACKEND as kernel_backend
from .magnitude import (
    Definiteness,
    SimilarityData,
    classify_definiteness,
    magnitude,
    similarity_data,
    similarity_matrix,
    weighting,
)
from .metric import (
    MetricSpace,
    SubsetSelector,
    from_distance_matrix,
    from_points_euclidean,
    load_space,
    restrict,
    scale,
    three_point_demo,
    two_point_space,
)
from .spd import (
    SetFunctionReport,
    SpdCertificate,
    check_inverse_submodularity,
    check_shifted_submodularity,
    spd_certificate,
    spd_scale_threshold,
    spd_semialgebraic_check,
)
from .subspace import (
    SubspaceResult,
    delete_chain,
    delete_point,
    delete_point_coefficients,
    recompute_subspace,
    schur_complement,
    subset_magnitude_table,
    subspace_magnitude_weighting,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "kernel_backend",
    "__version__",
    # metric
    "MetricSpace",
    "SubsetSelector",
    "from_distance_matrix",
    "from_points_euclidean",
    "load_space",
    "restrict",
    "scale",
    "three_point_demo",
    "two_point_space",
    # magnitude
    "Definiteness",
    "SimilarityData",
    "classify_definiteness",
    "magnitude",
    "similarity_data",
    "similarity_matrix",
    "weighting",
    # embedding
    "EmbeddingData",
    "centered_similarity",
    "circumradius_equilibrium",
    "circumradius_geometric",
    "embedding_to_dict",
    "magnitude_via_circumradius",
    "similarity_embedding",
    "verify_subspace_characterization",
    # identities
    "CoefficientData",
    "FiedlerBapatBlock",
    "InterlacingReport",
    "ResidualReport",
    "coefficient_data",
    "fiedler_bapat_block",
    "identity_residuals",
    "interlacing_check",
    "magnitude_via_determinant",
    "magnitude_via_trace",
    "magnitude_weighting_via_c",
    "pseudoinverse_centered",
    "upper_pairs",
    # subspace
    "SubspaceResult",
    "delete_chain",
    "delete_point",
    "delete_point_coefficients",
    "recompute_subspace",
    "schur_complement",
    "subset_magnitude_table",
    "subspace_magnitude_weighting",
    # spd
    "SetFunctionReport",
    "SpdCertificate",
    "check_inverse_submodularity",
    "check_shifted_submodularity",
    "spd_certificate",
    "spd_scale_threshold",
    "spd_semialgebraic_check",
    # asymptotics
    "SweepPoint",
    "asymptotic_ratio",
    "default_log_grid",
    "magnitude_sweep",
    "sweep_to_csv",
    "two_point_approximation",
]
