"""Baseline scoring, descending sort and below-baseline rejection.

A candidate is either an embedding of the target dataset (scored through
the engine) or a precomputed SI value ("fixture mode", used to replay
published tables without the original datasets or networks).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import engine
from .core import CandidateScore, LabeledFeatureSet, RankingReport, validate_feature_set
from .errors import (
    DuplicateCandidateName,
    EmptyCandidateList,
    LabelSequenceMismatch,
    SepidxError,
)

TOOL_VERSION = "0.1.0"


@dataclass(frozen=True)
class CandidateInput:
    """One candidate extractor: an embedding or a precomputed SI value.

    Exactly one of embedding / precomputed_si must be set.
    reported_accuracy is carried for correlation reporting only; it never
    influences ranking.
    """

    candidate_name: str
    embedding: LabeledFeatureSet | None = None
    precomputed_si: float | None = None
    reported_accuracy: float | None = None

    def __post_init__(self):
        if (self.embedding is None) == (self.precomputed_si is None):
            raise SepidxError(
                f"candidate {self.candidate_name!r}: exactly one of embedding "
                "and precomputed_si must be given")
        if self.precomputed_si is not None and not 0.0 <= self.precomputed_si <= 1.0:
            raise SepidxError(
                f"candidate {self.candidate_name!r}: precomputed_si "
                f"{self.precomputed_si} outside [0, 1]")


def score_candidate(candidate: CandidateInput) -> CandidateScore:
    """SI of one candidate; fixture mode wraps the published value as-is."""
    if candidate.embedding is not None:
        score = engine.separation_index(candidate.embedding)
        return CandidateScore(
            candidate_name=candidate.candidate_name,
            si_value=score.si_value,
            match_count=score.match_count,
            q=score.q,
        )
    return CandidateScore(
        candidate_name=candidate.candidate_name,
        si_value=candidate.precomputed_si,
    )


def _sort_scores(scores: list[CandidateScore]) -> list[CandidateScore]:
    # descending SI, ties broken by ascending candidate name
    return sorted(scores, key=lambda s: (-s.si_value, s.candidate_name))


def rank_candidates(
    baseline: LabeledFeatureSet | float,
    candidates: list[CandidateInput],
    metadata: dict | None = None,
) -> RankingReport:
    """Score every candidate, sort descending and reject below the baseline.

    Equality with the baseline SI counts as accepted.  Raises
    EmptyCandidateList, DuplicateCandidateName or LabelSequenceMismatch.
    """
    if not candidates:
        raise EmptyCandidateList("no candidates given")
    names = [c.candidate_name for c in candidates]
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise DuplicateCandidateName(f"duplicate candidate names: {dupes}")

    if isinstance(baseline, LabeledFeatureSet):
        baseline = validate_feature_set(baseline)
        baseline_labels = baseline.labels
        baseline_si = engine.separation_index(baseline).si_value
    else:
        baseline_si = float(baseline)
        if not 0.0 <= baseline_si <= 1.0:
            raise SepidxError(f"baseline SI {baseline_si} outside [0, 1]")
        # without a baseline embedding, still require candidates to agree
        # on the label sequence (one fixed target dataset)
        baseline_labels = next(
            (validate_feature_set(c.embedding).labels
             for c in candidates if c.embedding is not None), None)

    for c in candidates:
        if c.embedding is None:
            continue
        emb = validate_feature_set(c.embedding)
        if baseline_labels is not None and not np.array_equal(emb.labels, baseline_labels):
            raise LabelSequenceMismatch(
                f"candidate {c.candidate_name!r}: label sequence differs from baseline")

    scores = [score_candidate(c) for c in candidates]
    accepted = _sort_scores([s for s in scores if s.si_value >= baseline_si])
    rejected = _sort_scores([s for s in scores if s.si_value < baseline_si])

    meta = {"tool": "sepidx", "version": TOOL_VERSION}
    fixture = sorted(s.candidate_name for s in scores if s.is_fixture)
    if fixture:
        meta["fixture_candidates"] = fixture
    if metadata:
        meta.update(metadata)

    return RankingReport(
        baseline_si=baseline_si,
        accepted=tuple(accepted),
        rejected=tuple(rejected),
        total_candidates=len(candidates),
        metadata=meta,
    )
