"""Shared domain types and their validation.

Everything here is immutable after validation and safe to share across
threads; no computation beyond invariant checking lives in this module.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    DimensionMismatch,
    NonFiniteValue,
    TooFewPoints,
)

FEATURE_DTYPE = np.float32
LABEL_DTYPE = np.uint32


@dataclass(frozen=True)
class LabeledFeatureSet:
    """Q feature vectors of dimension D with integer class labels.

    points: (Q, D) row-major float32 matrix.
    labels: (Q,) non-negative integer class codes; codes need not be
        contiguous, and singleton classes are legal.
    name: free-form provenance identifier.
    meta: free-form provenance dict (e.g. narrowing notes from readers);
        not part of any invariant.
    """

    points: np.ndarray
    labels: np.ndarray
    name: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def q(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


def validate_feature_set(fs: LabeledFeatureSet) -> LabeledFeatureSet:
    """Check every LabeledFeatureSet invariant, canonicalizing array dtypes.

    Returns the set unchanged when it is already canonical (idempotent).
    Raises TooFewPoints, DimensionMismatch or NonFiniteValue otherwise.
    """
    points = np.asarray(fs.points)
    if points.ndim != 2:
        raise DimensionMismatch(
            f"points must be a 2-d matrix, got ndim={points.ndim}")
    if points.shape[0] < 2:
        raise TooFewPoints(
            f"need at least 2 points (a nearest neighbor must exist), got {points.shape[0]}")
    if points.shape[1] < 1:
        raise DimensionMismatch("need at least 1 feature dimension")

    labels = np.asarray(fs.labels)
    if labels.ndim != 1 or labels.shape[0] != points.shape[0]:
        raise DimensionMismatch(
            f"labels length {labels.shape[0] if labels.ndim == 1 else labels.shape} "
            f"does not match Q={points.shape[0]}")
    if not np.issubdtype(labels.dtype, np.integer):
        if not np.all(np.isfinite(labels.astype(np.float64, copy=False))):
            raise NonFiniteValue(int(np.argmax(~np.isfinite(labels.astype(np.float64)))), -1)
        rounded = np.rint(labels)
        if not np.array_equal(rounded, labels):
            raise DimensionMismatch("labels must be integers")
        labels = rounded.astype(np.int64)
    if np.any(labels < 0):
        raise DimensionMismatch(
            f"labels must be non-negative, found {labels[labels < 0][0]}")

    with np.errstate(invalid="ignore"):
        bad = ~np.isfinite(points.astype(np.float64, copy=False))
    if bad.any():
        row, col = np.unravel_index(int(np.argmax(bad)), points.shape)
        raise NonFiniteValue(int(row), int(col))

    cpoints = np.ascontiguousarray(points, dtype=FEATURE_DTYPE)
    clabels = np.ascontiguousarray(labels, dtype=LABEL_DTYPE)
    if cpoints is fs.points and clabels is fs.labels:
        return fs
    return replace(fs, points=cpoints, labels=clabels)


@dataclass(frozen=True)
class CandidateScore:
    """One candidate's separation index at its final feature layer.

    match_count and q are None only in fixture mode, where a published SI
    value is replayed without the underlying embedding.
    """

    candidate_name: str
    si_value: float
    match_count: int | None = None
    q: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.si_value <= 1.0:
            raise ValueError(f"si_value {self.si_value} outside [0, 1]")
        if (self.match_count is None) != (self.q is None):
            raise ValueError("match_count and q must be set together")
        if self.match_count is not None:
            if not 0 <= self.match_count <= self.q:
                raise ValueError(
                    f"match_count {self.match_count} outside [0, {self.q}]")
            if self.si_value != self.match_count / self.q:
                raise ValueError(
                    f"si_value {self.si_value} != {self.match_count}/{self.q}")

    @property
    def is_fixture(self) -> bool:
        return self.match_count is None


@dataclass(frozen=True)
class RankingReport:
    """Baseline SI, accepted candidates (descending) and rejected ones."""

    baseline_si: float
    accepted: tuple[CandidateScore, ...]
    rejected: tuple[CandidateScore, ...]
    total_candidates: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.total_candidates != len(self.accepted) + len(self.rejected):
            raise ValueError("total_candidates != accepted + rejected")
        for sc in self.accepted:
            if sc.si_value < self.baseline_si:
                raise ValueError(f"accepted {sc.candidate_name} below baseline")
        for sc in self.rejected:
            if sc.si_value >= self.baseline_si:
                raise ValueError(f"rejected {sc.candidate_name} not below baseline")
        for lst in (self.accepted, self.rejected):
            for a, b in zip(lst, lst[1:]):
                if (a.si_value, ) < (b.si_value, ):
                    raise ValueError("scores not in non-increasing order")
                if a.si_value == b.si_value and a.candidate_name > b.candidate_name:
                    raise ValueError("equal scores not in name order")


@dataclass(frozen=True)
class StabilityReport:
    """Per-candidate SI across subsample fractions and trials."""

    fractions: tuple[float, ...]
    trials: int
    seed: int
    candidate_names: tuple[str, ...]
    full_si: tuple[float, ...]
    # scores[c][f][t]: candidate c, fraction f, trial t
    scores: tuple[tuple[tuple[float, ...], ...], ...]
    # rank_agreement[f]: Spearman between full-data SIs and trial-mean SIs,
    # None when undefined (constant input)
    rank_agreement: tuple[float | None, ...]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for per_cand in self.scores:
            for per_frac in per_cand:
                for s in per_frac:
                    if not 0.0 <= s <= 1.0:
                        raise ValueError(f"score {s} outside [0, 1]")
