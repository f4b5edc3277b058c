"""Separation index: exact nearest-neighbor label agreement.

The fast path lives in _kernels (numba or numpy backend); this module owns
the public operations plus the naive reference oracle used for equivalence
testing.  All distances are squared Euclidean: the square root never changes
an argmin and stays out of the hot loop.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import backend_name, get_threads, nearest_neighbor_kernel, set_threads  # noqa: F401
from .core import CandidateScore, LabeledFeatureSet, validate_feature_set
from .errors import LengthMismatch


@dataclass(frozen=True)
class NearestNeighborAssignment:
    """Per-point index of the nearest other point and its squared distance.

    neighbor_index[q] is the smallest index among all points attaining the
    minimum distance to point q (deterministic tie rule).
    """

    neighbor_index: np.ndarray  # (Q,) int64, values in [0, Q) and != position
    neighbor_sq_distance: np.ndarray  # (Q,) float64, non-negative


def nearest_neighbors(fs: LabeledFeatureSet) -> NearestNeighborAssignment:
    """Exact nearest neighbor (excluding self) for every point.

    Result is identical for any thread count and across runs.
    """
    fs = validate_feature_set(fs)
    idx, dist = nearest_neighbor_kernel(fs.points)
    return NearestNeighborAssignment(neighbor_index=idx, neighbor_sq_distance=dist)


def separation_index_with_labels(
    fs: LabeledFeatureSet, nn: NearestNeighborAssignment
) -> CandidateScore:
    """Score a feature set against a precomputed neighbor assignment."""
    fs = validate_feature_set(fs)
    if nn.neighbor_index.shape[0] != fs.q:
        raise LengthMismatch(
            f"neighbor assignment length {nn.neighbor_index.shape[0]} != Q={fs.q}")
    match_count = int(np.sum(fs.labels == fs.labels[nn.neighbor_index]))
    return CandidateScore(
        candidate_name=fs.name,
        si_value=match_count / fs.q,
        match_count=match_count,
        q=fs.q,
    )


def separation_index(fs: LabeledFeatureSet) -> CandidateScore:
    """Fraction of points whose nearest neighbor shares their label."""
    fs = validate_feature_set(fs)
    return separation_index_with_labels(fs, nearest_neighbors(fs))


def naive_nearest_neighbors(fs: LabeledFeatureSet) -> NearestNeighborAssignment:
    """Reference oracle: full distance matrix, no blocking, no parallelism.

    Accumulates the squared distance per dimension sequentially in float64,
    the same operation order as the fast kernels, so equivalence is exact.
    Memory is O(Q^2); intended for verification, not production sizes.
    """
    fs = validate_feature_set(fs)
    X = fs.points.astype(np.float64)
    q = fs.q
    acc = np.zeros((q, q), np.float64)
    for k in range(fs.d):
        diff = X[:, k, None] - X[None, :, k]
        acc += diff * diff
    np.fill_diagonal(acc, np.inf)
    idx = np.argmin(acc, axis=1)
    return NearestNeighborAssignment(
        neighbor_index=idx,
        neighbor_sq_distance=acc[np.arange(q), idx],
    )


def naive_separation_index(fs: LabeledFeatureSet) -> CandidateScore:
    """Ground-truth SI via the naive oracle."""
    fs = validate_feature_set(fs)
    return separation_index_with_labels(fs, naive_nearest_neighbors(fs))
