"""Rough-set clustering change detection for co-registered image pairs."""

from .baselines import (
    ClusterModel,
    fcm_detect,
    hcm_detect,
    run_fcm,
    run_hcm,
    threshold_diff_detect,
)
from .detector import (
    CandidateRule,
    ChangeMask,
    DetectionParams,
    DetectionReport,
    candidate_change_set,
    detect_changes,
    load_mask,
    otsu_threshold,
    save_mask,
)
from .errors import DimensionMismatchError, FormatError
from .evaluate import Metrics, SynthSpec, compare_masks, synth_pair
from .imaging import (
    SCALAR_MAX,
    SCALAR_RANGE,
    RasterImage,
    ScalarField,
    abs_difference,
    load_image,
    quantize,
    save_image,
    transform_to_scalar,
)
from .roughsets import (
    InformationSystem,
    Partition,
    RoughApproximation,
    approximate,
    induce_partition,
    pawlak_accuracy,
    rough_membership,
    rough_memberships,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "CandidateRule",
    "ChangeMask",
    "ClusterModel",
    "DetectionParams",
    "DetectionReport",
    "DimensionMismatchError",
    "FormatError",
    "InformationSystem",
    "Metrics",
    "Partition",
    "RasterImage",
    "RoughApproximation",
    "SCALAR_MAX",
    "SCALAR_RANGE",
    "ScalarField",
    "SynthSpec",
    "abs_difference",
    "approximate",
    "candidate_change_set",
    "compare_masks",
    "detect_changes",
    "fcm_detect",
    "hcm_detect",
    "induce_partition",
    "load_image",
    "load_mask",
    "otsu_threshold",
    "pawlak_accuracy",
    "quantize",
    "rough_membership",
    "rough_memberships",
    "run_fcm",
    "run_hcm",
    "save_image",
    "save_mask",
    "synth_pair",
    "threshold_diff_detect",
    "transform_to_scalar",
]
