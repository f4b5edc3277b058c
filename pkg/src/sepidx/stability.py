"""Dataset-reduction sensitivity: SI on random subsamples, rank agreement.

Subsampling is paired: for a given (seed, fraction, trial) every candidate
is scored on the identical row indices, mirroring a target dataset that is
drawn once and fed to all networks.  The index draw is a pure function of
(seed, fraction, trial) via a counter-based Philox stream, so results are
independent of call order, thread count and machine.
"""
from __future__ import annotations

import math
import struct

import numpy as np

from . import engine, reporting
from .core import LabeledFeatureSet, StabilityReport, validate_feature_set
from .errors import (
    DegenerateInput,
    FixtureModeUnsupported,
    LabelSequenceMismatch,
    SubsampleTooSmall,
)
from .ranking import CandidateInput, TOOL_VERSION


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return x ^ (x >> 31)


def _stream(seed: int, fraction: float, trial: int) -> np.random.Generator:
    frac_bits = struct.unpack("<Q", struct.pack("<d", float(fraction)))[0]
    key2 = _splitmix64(frac_bits ^ _splitmix64(trial))
    return np.random.Generator(np.random.Philox(key=[seed & 0xFFFFFFFFFFFFFFFF, key2]))


def subsample_indices(q: int, fraction: float, seed: int, trial: int = 0) -> np.ndarray:
    """Row indices of a uniform sample without replacement, ascending order."""
    if not 0.0 < fraction <= 1.0:
        raise SubsampleTooSmall(f"fraction {fraction} outside (0, 1]")
    m = math.floor(fraction * q)
    if m < 2:
        raise SubsampleTooSmall(
            f"fraction {fraction} of Q={q} leaves {m} points; need >= 2")
    if m == q:
        return np.arange(q)
    rng = _stream(seed, fraction, trial)
    return np.sort(rng.permutation(q)[:m])


def stratified_subsample_indices(
    labels: np.ndarray, fraction: float, seed: int, trial: int = 0
) -> np.ndarray:
    """Per-class sample: floor(fraction * class size) rows from each class."""
    if not 0.0 < fraction <= 1.0:
        raise SubsampleTooSmall(f"fraction {fraction} outside (0, 1]")
    q = labels.shape[0]
    if fraction == 1.0:
        return np.arange(q)
    rng = _stream(seed, fraction, trial)
    picks = []
    for cls in np.unique(labels):  # np.unique is sorted: deterministic order
        rows = np.flatnonzero(labels == cls)
        m = math.floor(fraction * rows.shape[0])
        perm = rng.permutation(rows.shape[0])[:m]
        picks.append(rows[perm])
    idx = np.sort(np.concatenate(picks)) if picks else np.empty(0, np.int64)
    if idx.shape[0] < 2:
        raise SubsampleTooSmall(
            f"stratified fraction {fraction} leaves {idx.shape[0]} points; need >= 2")
    return idx


def subsample(
    fs: LabeledFeatureSet, fraction: float, seed: int, trial: int = 0
) -> LabeledFeatureSet:
    """Uniform random subsample of floor(fraction * Q) rows.

    Deterministic in (seed, fraction, trial); rows keep their original
    ascending order. fraction == 1.0 returns the set unchanged.
    """
    fs = validate_feature_set(fs)
    idx = subsample_indices(fs.q, fraction, seed, trial)
    if idx.shape[0] == fs.q:
        return fs
    return LabeledFeatureSet(
        points=np.ascontiguousarray(fs.points[idx]),
        labels=fs.labels[idx],
        name=fs.name,
        meta=dict(fs.meta, subsample={"fraction": fraction, "seed": seed, "trial": trial}),
    )


def stability_study(
    baseline: LabeledFeatureSet | float,
    candidates: list[CandidateInput],
    fractions: list[float],
    trials: int = 1,
    seed: int = 0,
    stratified: bool = False,
) -> StabilityReport:
    """SI per candidate across (fraction, trial) paired subsamples.

    rank_agreement[f] is the Spearman correlation between the full-data SIs
    and the per-candidate mean SI over trials at fraction f (None when the
    correlation is undefined).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not fractions:
        raise ValueError("need at least one fraction")
    fixture = [c.candidate_name for c in candidates if c.embedding is None]
    if fixture:
        raise FixtureModeUnsupported(
            f"subsampling needs embeddings; fixture-mode candidates: {fixture}")

    embeddings = [validate_feature_set(c.embedding) for c in candidates]
    ref_labels = embeddings[0].labels if embeddings else None
    if isinstance(baseline, LabeledFeatureSet):
        ref_labels = validate_feature_set(baseline).labels
    for c, emb in zip(candidates, embeddings):
        if ref_labels is not None and not np.array_equal(emb.labels, ref_labels):
            raise LabelSequenceMismatch(
                f"candidate {c.candidate_name!r}: label sequence differs")

    q = embeddings[0].q
    full_si = [engine.separation_index(emb).si_value for emb in embeddings]

    scores = [[[0.0] * trials for _ in fractions] for _ in candidates]
    for fi, fraction in enumerate(fractions):
        for t in range(trials):
            if stratified:
                idx = stratified_subsample_indices(ref_labels, fraction, seed, t)
            else:
                idx = subsample_indices(q, fraction, seed, t)
            for ci, emb in enumerate(embeddings):
                sub = LabeledFeatureSet(
                    points=np.ascontiguousarray(emb.points[idx]),
                    labels=emb.labels[idx],
                    name=emb.name,
                )
                scores[ci][fi][t] = engine.separation_index(sub).si_value

    agreement: list[float | None] = []
    for fi in range(len(fractions)):
        means = [sum(scores[ci][fi]) / trials for ci in range(len(candidates))]
        if len(candidates) < 2:
            agreement.append(None)
            continue
        try:
            agreement.append(reporting.spearman(full_si, means))
        except DegenerateInput:
            agreement.append(None)

    return StabilityReport(
        fractions=tuple(float(f) for f in fractions),
        trials=trials,
        seed=seed,
        candidate_names=tuple(c.candidate_name for c in candidates),
        full_si=tuple(full_si),
        scores=tuple(tuple(tuple(t) for t in per_cand) for per_cand in scores),
        rank_agreement=tuple(agreement),
        metadata={"tool": "sepidx", "version": TOOL_VERSION,
                  "stratified": stratified},
    )
