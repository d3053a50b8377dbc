"""Pairwise-comparison panel stitching, nowcasting, and structure analysis.

The pipeline: simulate (or ingest) quantized pairwise comparison data,
chain it onto one common scale with ratio medians, stitch a multivariate
panel, then either nowcast an external target from the panel with a
rolling-window model comparison or analyze the panel's structure through
distances, k-medoids clustering, and multidimensional scaling.
"""

from .aggregate import (
    ANCHOR_RULES,
    TOP_RATING,
    AggregatorConfig,
    ChainError,
    RatioMatrix,
    aggregate,
    ratio_matrix,
    stitch,
    sum_tensor,
)
from .core import (
    MAX_SCORE,
    AggregateIndex,
    ComparisonTensor,
    LatentVolumePanel,
    StitchedPanel,
    SummedComparisonMatrices,
    TimeAxis,
    Violation,
    month_label,
    month_ordinal,
    month_range,
    validate_tensor,
)
from .kernels import USING_NUMBA
from .nowcast import (
    KNOWN_KINDS,
    DesignMatrix,
    EvaluationReport,
    NowcastModelFit,
    OLSFit,
    PCAResult,
    RankDeficientError,
    TargetSeries,
    aic,
    build_design,
    fit_base,
    fit_full,
    fit_kind,
    forward_stepwise,
    lasso_fit,
    mape,
    ols_fit,
    pca_components,
    pca_regression,
    rolling_evaluate,
    start_offset,
)
from .simulate import (
    SimulationConfig,
    build_comparison_tensor,
    exact_summed_matrices,
    quantize_pair,
    ratio_bounds,
    select_comparators,
    simulate_latent,
)
from .stats import (
    CorrelationResult,
    SignTestResult,
    cross_correlation,
    fisher_p_value,
    partial_correlation,
    pearson,
    sign_binomial_test,
    spearman,
)
from .tsa import (
    ADFResult,
    ARFit,
    Clustering,
    DistanceMatrix,
    Embedding,
    adf_test,
    ar_fit,
    difference,
    euclidean_distance,
    euclidean_distances,
    k_medoids,
    log_floor,
    piccolo_distance,
    piccolo_distances,
    silhouette_widths,
    smacof_mds,
)

__version__ = "0.1.0"

__all__ = [
    "ANCHOR_RULES",
    "ADFResult",
    "ARFit",
    "AggregateIndex",
    "AggregatorConfig",
    "ChainError",
    "Clustering",
    "ComparisonTensor",
    "CorrelationResult",
    "DesignMatrix",
    "DistanceMatrix",
    "Embedding",
    "EvaluationReport",
    "KNOWN_KINDS",
    "LatentVolumePanel",
    "MAX_SCORE",
    "NowcastModelFit",
    "OLSFit",
    "PCAResult",
    "RankDeficientError",
    "RatioMatrix",
    "SignTestResult",
    "SimulationConfig",
    "StitchedPanel",
    "SummedComparisonMatrices",
    "TOP_RATING",
    "TargetSeries",
    "TimeAxis",
    "USING_NUMBA",
    "Violation",
    "adf_test",
    "aggregate",
    "aic",
    "ar_fit",
    "build_comparison_tensor",
    "build_design",
    "cross_correlation",
    "difference",
    "euclidean_distance",
    "euclidean_distances",
    "exact_summed_matrices",
    "fisher_p_value",
    "fit_base",
    "fit_full",
    "fit_kind",
    "forward_stepwise",
    "k_medoids",
    "lasso_fit",
    "log_floor",
    "mape",
    "month_label",
    "month_ordinal",
    "month_range",
    "ols_fit",
    "partial_correlation",
    "pca_components",
    "pca_regression",
    "pearson",
    "piccolo_distance",
    "piccolo_distances",
    "quantize_pair",
    "ratio_bounds",
    "ratio_matrix",
    "rolling_evaluate",
    "select_comparators",
    "sign_binomial_test",
    "silhouette_widths",
    "simulate_latent",
    "smacof_mds",
    "spearman",
    "start_offset",
    "stitch",
    "sum_tensor",
    "validate_tensor",
]
