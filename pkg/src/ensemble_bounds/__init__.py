"""Confidence-distribution calculus for ensembles of calibrated binary classifiers."""

from .bounds import (
    EnsembleBounds,
    PlanResult,
    accuracy_bounds_acc,
    accuracy_bounds_acc_info,
    ensemble_info_bounds,
    ensemble_info_bounds_info_only,
    individual_info_bounds,
    info_bounds_acc,
    min_ensemble_size,
)
from .canonical import (
    ConditionalSplit,
    conditional_split,
    generalist,
    less_refined,
    less_specialized,
    max_info_gain,
    more_refined,
    more_specialized,
    specialist,
)
from .combine import (
    EnsembleDistribution,
    combine_all,
    combine_pair,
    ensemble_accuracy,
    ensemble_information,
)
from .dist import (
    ClassifierProfile,
    ConfidenceDistribution,
    ScoringFunction,
    accuracy,
    binary_entropy,
    information,
    inverse_binary_entropy_upper,
    make_distribution,
    merge_step,
    redistribute,
    score,
)
from .errors import *  # noqa: F403
from .simulate import (
    NoiseModel,
    SimReport,
    cwmv_vote,
    gaussian_confidence_distribution,
    lcwmv_vote,
    mc_estimate,
)

__version__ = "0.1.0"
