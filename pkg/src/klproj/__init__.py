"""Divergence-retaining linear projections for Gaussian classes.

Reduce d-dimensional two-class (or K-class) Gaussian data to r dimensions
while keeping as much Kullback-Leibler divergence between the classes as
possible: closed-form constructions for the mean-dominant and
covariance-dominant regimes, a rule to choose between them, gradient
refinement, synthetic instance generators, and evaluation tools (sweeps,
pairwise preservation, plug-in classification, density grids).
"""

from .errors import (
    ChannelRankFailure,
    DimensionMismatch,
    EqualMeans,
    IdenticalDistributions,
    InsufficientSamples,
    KlprojError,
    NonFiniteInput,
    NonPositiveInput,
    NotPositiveDefinite,
    NumericalError,
    RankDeficient,
    RankDeficientMeans,
    UnequalMeans,
)
from .gaussian import (
    GaussianParams,
    KldBreakdown,
    LabeledDataset,
    chernoff_information,
    component_kld,
    estimate_params,
    g_score,
    kld,
    kld_projected,
    kld_split,
    log_density,
    pooled_covariance,
    project_params,
)
from .linalg import (
    GenEigen,
    SymEigen,
    generalized_eig,
    orthonormalize_rows,
    principal_angles,
    spd_inv_sqrt,
    sym_eig,
)
from .projections import (
    ProjectionResult,
    RegimeReport,
    equal_mean_order_check,
    fit_auto,
    lda_direction,
    lol_projection,
    mean_first_projection,
    multiclass_lda,
    regime_recommendation,
    select_regime,
    whitened_component_projection,
)
from .refine import (
    AscentOptions,
    AscentTrace,
    finite_difference_gradient,
    gradient_ascent,
    kld_gradient,
    random_initial_matrix,
)
from .synth import (
    ChannelSpec,
    SpdSpec,
    embed_channel,
    random_class_params,
    random_spd,
    rng_from_seed,
    sample,
)
from .evaluate import (
    DensityGrid,
    PluginClassifier,
    SweepTable,
    density_grid,
    pairwise_preservation,
    plugin_classifier_train,
    sweep_r,
)

__version__ = "0.1.0"

__all__ = [
    "AscentOptions",
    "AscentTrace",
    "ChannelRankFailure",
    "ChannelSpec",
    "DensityGrid",
    "DimensionMismatch",
    "EqualMeans",
    "GaussianParams",
    "GenEigen",
    "IdenticalDistributions",
    "InsufficientSamples",
    "KldBreakdown",
    "KlprojError",
    "LabeledDataset",
    "NonFiniteInput",
    "NonPositiveInput",
    "NotPositiveDefinite",
    "NumericalError",
    "PluginClassifier",
    "ProjectionResult",
    "RankDeficient",
    "RankDeficientMeans",
    "RegimeReport",
    "SpdSpec",
    "SweepTable",
    "SymEigen",
    "UnequalMeans",
    "chernoff_information",
    "component_kld",
    "density_grid",
    "embed_channel",
    "equal_mean_order_check",
    "estimate_params",
    "finite_difference_gradient",
    "fit_auto",
    "g_score",
    "generalized_eig",
    "gradient_ascent",
    "kld",
    "kld_gradient",
    "kld_projected",
    "kld_split",
    "lda_direction",
    "log_density",
    "lol_projection",
    "mean_first_projection",
    "multiclass_lda",
    "orthonormalize_rows",
    "pairwise_preservation",
    "plugin_classifier_train",
    "pooled_covariance",
    "principal_angles",
    "project_params",
    "random_class_params",
    "random_initial_matrix",
    "random_spd",
    "regime_recommendation",
    "rng_from_seed",
    "sample",
    "select_regime",
    "spd_inv_sqrt",
    "sweep_r",
    "sym_eig",
    "whitened_component_projection",
]
