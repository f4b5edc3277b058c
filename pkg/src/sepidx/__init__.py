"""sepidx: separation-index scoring, ranking and rejection of candidate
feature extractors."""

from .core import (
    CandidateScore,
    LabeledFeatureSet,
    RankingReport,
    StabilityReport,
    validate_feature_set,
)
from .engine import (
    NearestNeighborAssignment,
    naive_separation_index,
    nearest_neighbors,
    separation_index,
    separation_index_with_labels,
    set_threads,
)
from .ranking import CandidateInput, rank_candidates, score_candidate
from .reporting import CorrelationSummary, correlation_report, emit_json, spearman
from .stability import stability_study, subsample

__version__ = "0.1.0"

__all__ = [
    "CandidateInput",
    "CandidateScore",
    "CorrelationSummary",
    "LabeledFeatureSet",
    "NearestNeighborAssignment",
    "RankingReport",
    "StabilityReport",
    "correlation_report",
    "emit_json",
    "naive_separation_index",
    "nearest_neighbors",
    "rank_candidates",
    "score_candidate",
    "separation_index",
    "separation_index_with_labels",
    "set_threads",
    "spearman",
    "stability_study",
    "subsample",
    "validate_feature_set",
]
