"""Privacy-preserving intrusion-detection pipeline for flow-record CSVs.

Stages: correlation-threshold feature selection, least-squares data
distortion, privacy measurement, and a five-classifier evaluation harness.
"""

__version__ = "0.1.0"

from .dataset import (
    EncodingMap,
    FeatureMatrix,
    LabelVector,
    RawRecordTable,
    load_csv,
    prepare,
    stratified_sample,
    stratified_split,
)
from .distortion import DistortedMatrix, DistortionModel, distort, fit_lsm, transform
from .feature_selection import (
    CorrelationMatrix,
    SelectionReport,
    apply_selection,
    correlation_matrix,
    pearson,
    rank_features,
    select_by_threshold,
)
from .privacy_metrics import (
    PrivacyReport,
    RankTable,
    feature_rank_change,
    privacy_report,
    rank_elements,
    rank_maintenance,
    rank_position,
    value_difference,
)

__all__ = [
    "EncodingMap",
    "FeatureMatrix",
    "LabelVector",
    "RawRecordTable",
    "load_csv",
    "prepare",
    "stratified_sample",
    "stratified_split",
    "CorrelationMatrix",
    "SelectionReport",
    "pearson",
    "correlation_matrix",
    "rank_features",
    "select_by_threshold",
    "apply_selection",
    "DistortedMatrix",
    "DistortionModel",
    "fit_lsm",
    "transform",
    "distort",
    "PrivacyReport",
    "RankTable",
    "value_difference",
    "rank_elements",
    "rank_position",
    "rank_maintenance",
    "feature_rank_change",
    "privacy_report",
]
