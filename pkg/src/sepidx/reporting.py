"""Rank correlation between SI and downstream accuracy, plus canonical JSON.

Spearman is the headline statistic (the claim under test is about ordering);
Pearson is emitted alongside.  JSON output is canonical: sorted keys, fixed
17-significant-digit reals, UTF-8, LF -- equal reports give equal bytes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .core import CandidateScore, RankingReport, StabilityReport
from .errors import DegenerateInput, InsufficientOverlap, LengthMismatch, SepidxError

SCHEMA = "sepidx-report/1"


def _check_pair(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1 or x.shape[0] != y.shape[0]:
        raise LengthMismatch(f"length mismatch: {x.shape} vs {y.shape}")
    if x.shape[0] < 2:
        raise LengthMismatch("need at least 2 paired values")
    if np.all(x == x[0]):
        raise DegenerateInput("all x values equal; correlation not defined")
    if np.all(y == y[0]):
        raise DegenerateInput("all y values equal; correlation not defined")
    return x, y


def pearson(x, y) -> float:
    x, y = _check_pair(x, y)
    xc = x - x.mean()
    yc = y - y.mean()
    return float(np.dot(xc, yc) / np.sqrt(np.dot(xc, xc) * np.dot(yc, yc)))


def spearman(x, y) -> float:
    """Spearman rank correlation with fractional (average) ranks for ties.

    Computed as the Pearson correlation of the two rank vectors.  Raises
    DegenerateInput when either argument is constant.
    """
    x, y = _check_pair(x, y)
    return pearson(rankdata(x, method="average"), rankdata(y, method="average"))


@dataclass(frozen=True)
class CorrelationSummary:
    """Paired (si, accuracy) points with rank-correlation statistics.

    spearman_value / pearson_value are None when the correlation is not
    defined (constant input); violations lists candidate-name pairs ordered
    oppositely by SI and accuracy.
    """

    points: tuple[tuple[str, float, float], ...]  # (name, si, accuracy)
    spearman_value: float | None
    pearson_value: float | None
    violations: tuple[tuple[str, str], ...]
    metadata: dict = field(default_factory=dict)

    @property
    def not_defined(self) -> bool:
        return self.spearman_value is None


def correlation_report(
    report: RankingReport, accuracies: dict[str, float],
    metadata: dict | None = None,
) -> CorrelationSummary:
    """Correlate a ranking report's SI values with externally supplied
    accuracies over the intersection of candidate names."""
    scores = list(report.accepted) + list(report.rejected)
    pairs = [(s.candidate_name, s.si_value, float(accuracies[s.candidate_name]))
             for s in scores if s.candidate_name in accuracies]
    if len(pairs) < 2:
        raise InsufficientOverlap(
            f"need >= 2 candidates with accuracies, got {len(pairs)}")
    si = [p[1] for p in pairs]
    acc = [p[2] for p in pairs]
    try:
        sp = spearman(si, acc)
        pe = pearson(si, acc)
    except DegenerateInput:
        sp = None
        pe = None
    violations = []
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            dsi = si[i] - si[j]
            dacc = acc[i] - acc[j]
            if dsi * dacc < 0:
                violations.append((pairs[i][0], pairs[j][0]))
    return CorrelationSummary(
        points=tuple(pairs),
        spearman_value=sp,
        pearson_value=pe,
        violations=tuple(violations),
        metadata=dict(metadata or {}),
    )


# --- canonical JSON ---

def _fmt(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if v != v or v in (float("inf"), float("-inf")):
            raise SepidxError("non-finite number in report")
        return format(v, ".17g")
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        items = sorted(value.items())
        inner = ",".join(f"{json.dumps(str(k), ensure_ascii=False)}:{_fmt(v)}"
                         for k, v in items)
        return "{" + inner + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_fmt(v) for v in value) + "]"
    raise SepidxError(f"unserializable value of type {type(value).__name__}")


def canonical_json_bytes(obj) -> bytes:
    """Canonical JSON: sorted keys, compact, .17g reals, UTF-8, trailing LF."""
    return (_fmt(obj) + "\n").encode("utf-8")


def _score_obj(s: CandidateScore) -> dict:
    return {
        "candidate_name": s.candidate_name,
        "si_value": s.si_value,
        "match_count": s.match_count,
        "q": s.q,
    }


def ranking_report_obj(report: RankingReport) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "ranking",
        "baseline_si": report.baseline_si,
        "accepted": [_score_obj(s) for s in report.accepted],
        "rejected": [_score_obj(s) for s in report.rejected],
        "total_candidates": report.total_candidates,
        "metadata": report.metadata,
    }


def stability_report_obj(report: StabilityReport) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "stability",
        "fractions": list(report.fractions),
        "trials": report.trials,
        "seed": report.seed,
        "candidate_names": list(report.candidate_names),
        "full_si": list(report.full_si),
        "scores": [[list(t) for t in per_cand] for per_cand in report.scores],
        "rank_agreement": list(report.rank_agreement),
        "metadata": report.metadata,
    }


def correlation_summary_obj(summary: CorrelationSummary) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "correlation",
        "points": [{"candidate_name": n, "si_value": s, "accuracy": a}
                   for n, s, a in summary.points],
        "spearman": summary.spearman_value,
        "pearson": summary.pearson_value,
        "not_defined": summary.not_defined,
        "violations": [list(v) for v in summary.violations],
        "metadata": summary.metadata,
    }


def emit_json(report: RankingReport | StabilityReport | CorrelationSummary) -> bytes:
    if isinstance(report, RankingReport):
        return canonical_json_bytes(ranking_report_obj(report))
    if isinstance(report, StabilityReport):
        return canonical_json_bytes(stability_report_obj(report))
    if isinstance(report, CorrelationSummary):
        return canonical_json_bytes(correlation_summary_obj(report))
    raise SepidxError(f"cannot serialize {type(report).__name__}")


def _load(data: bytes | str, kind: str) -> dict:
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as e:
        raise SepidxError(f"invalid JSON: {e}") from e
    if not isinstance(obj, dict) or obj.get("schema") != SCHEMA:
        raise SepidxError(f"not a {SCHEMA} document")
    if obj.get("kind") != kind:
        raise SepidxError(f"expected kind {kind!r}, got {obj.get('kind')!r}")
    return obj


def parse_ranking_report(data: bytes | str) -> RankingReport:
    obj = _load(data, "ranking")
    try:
        def score(d):
            return CandidateScore(
                candidate_name=d["candidate_name"], si_value=d["si_value"],
                match_count=d["match_count"], q=d["q"])
        return RankingReport(
            baseline_si=obj["baseline_si"],
            accepted=tuple(score(d) for d in obj["accepted"]),
            rejected=tuple(score(d) for d in obj["rejected"]),
            total_candidates=obj["total_candidates"],
            metadata=obj["metadata"],
        )
    except (KeyError, TypeError, ValueError) as e:
        raise SepidxError(f"malformed ranking report: {e}") from e


def parse_stability_report(data: bytes | str) -> StabilityReport:
    obj = _load(data, "stability")
    try:
        return StabilityReport(
            fractions=tuple(obj["fractions"]),
            trials=obj["trials"],
            seed=obj["seed"],
            candidate_names=tuple(obj["candidate_names"]),
            full_si=tuple(obj["full_si"]),
            scores=tuple(tuple(tuple(t) for t in per_cand)
                         for per_cand in obj["scores"]),
            rank_agreement=tuple(obj["rank_agreement"]),
            metadata=obj["metadata"],
        )
    except (KeyError, TypeError, ValueError) as e:
        raise SepidxError(f"malformed stability report: {e}") from e


def parse_correlation_summary(data: bytes | str) -> CorrelationSummary:
    obj = _load(data, "correlation")
    try:
        return CorrelationSummary(
            points=tuple((p["candidate_name"], p["si_value"], p["accuracy"])
                         for p in obj["points"]),
            spearman_value=obj["spearman"],
            pearson_value=obj["pearson"],
            violations=tuple((v[0], v[1]) for v in obj["violations"]),
            metadata=obj["metadata"],
        )
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise SepidxError(f"malformed correlation summary: {e}") from e
