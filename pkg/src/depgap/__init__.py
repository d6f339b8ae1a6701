"""Dependence measurement through the averaged local density gap (aLDG).

The estimator thresholds the normalized gap between a joint boxcar density
estimate and the product of its marginals at every observed point, then
averages the exceedances. The package bundles the threshold-selection
rules, the avgCSN predecessor, a set of competitor dependence measures,
permutation testing, synthetic-data generators, and a small experiment
harness, all seeded and deterministic.
"""

from .aldg import (
    AldgResult,
    RULE_KINDS,
    ThresholdRule,
    aldg,
    aldg_fixed_t,
    avgcsn,
    default_n_shuffles,
    influence_approx,
    mean_t,
    population_aldg_gaussian,
    threshold_asymptotic_norm,
    threshold_inflection_point,
    threshold_uniform_error,
)
from .errors import (
    DegenerateCurve,
    DepgapError,
    DimensionMismatch,
    ParseError,
    TooFewSamples,
    UnknownFamily,
    UnknownMeasure,
    ZeroLibrarySize,
    ZeroMarginalDensity,
    ZeroVariance,
)
from .experiments import EXPERIMENTS, ExperimentReport, render_svg, write_report
from .inference import PermTestResult, permutation_test, power_estimate
from .kde import (
    GaussianSpec,
    KdeConfig,
    PairedSample,
    default_bandwidth,
    default_config,
    joint_density,
    marginal_density,
    t_statistic_at_sample_points,
    t_statistic_empirical,
    t_statistic_population,
)
from .measures import (
    MEASURE_TAGS,
    MeasureKind,
    PairwiseResult,
    SIGNED_TAGS,
    measure,
    median_pairwise_width,
    pairwise_matrix,
)
from .synth import (
    ContaminationSpec,
    FUNCTIONAL_FAMILIES,
    GRID_FAMILIES,
    SynthSpec,
    contaminate,
    gauss_mix3,
    gaussian_pair,
    generate,
    nb_mix3,
    shuffle_y,
    unif_point_mass,
)

__version__ = "0.1.0"

__all__ = [
    "AldgResult",
    "ContaminationSpec",
    "DegenerateCurve",
    "DepgapError",
    "DimensionMismatch",
    "EXPERIMENTS",
    "ExperimentReport",
    "FUNCTIONAL_FAMILIES",
    "GRID_FAMILIES",
    "GaussianSpec",
    "KdeConfig",
    "MEASURE_TAGS",
    "MeasureKind",
    "PairedSample",
    "PairwiseResult",
    "ParseError",
    "PermTestResult",
    "RULE_KINDS",
    "SIGNED_TAGS",
    "SynthSpec",
    "ThresholdRule",
    "TooFewSamples",
    "UnknownFamily",
    "UnknownMeasure",
    "ZeroLibrarySize",
    "ZeroMarginalDensity",
    "ZeroVariance",
    "aldg",
    "aldg_fixed_t",
    "avgcsn",
    "contaminate",
    "default_bandwidth",
    "default_config",
    "default_n_shuffles",
    "gauss_mix3",
    "gaussian_pair",
    "generate",
    "influence_approx",
    "joint_density",
    "marginal_density",
    "mean_t",
    "measure",
    "median_pairwise_width",
    "nb_mix3",
    "pairwise_matrix",
    "permutation_test",
    "population_aldg_gaussian",
    "power_estimate",
    "render_svg",
    "shuffle_y",
    "t_statistic_at_sample_points",
    "t_statistic_empirical",
    "t_statistic_population",
    "threshold_asymptotic_norm",
    "threshold_inflection_point",
    "threshold_uniform_error",
    "unif_point_mass",
    "write_report",
]
