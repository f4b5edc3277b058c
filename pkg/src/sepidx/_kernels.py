"""Exact nearest-neighbor kernels: numba JIT fast path + pure-numpy fallback.

Backend selection: the numba path is used when numba imports cleanly and the
environment variable SEPIDX_NO_NUMBA is unset/empty; otherwise the numpy
fallback runs.  Both backends perform, for every (query, candidate) pair,
the identical float64 operation sequence -- diff, square, add -- sequentially
over dimensions in storage order, so their results are bit-identical to each
other and to the naive reference in engine.py.

Determinism: the parallel kernel partitions query rows into fixed blocks;
each query's scan over candidates is sequential within its block, so output
is independent of thread count and scheduling.

Tie rule: candidates are scanned in increasing index with strict-improvement
comparison, so the smallest index among equidistant nearest candidates wins.
"""
from __future__ import annotations

import os

import numpy as np

# Lane count: independent per-pair accumulator chains interleaved for ILP.
_TILE = 8
# Early-exit granularity (dimensions between prune checks).
_CHUNK = 64
# Query rows per parallel work item.
_QBLOCK = 64


def _use_numba() -> bool:
    if os.environ.get("SEPIDX_NO_NUMBA", ""):
        return False
    return _NUMBA_OK


_NUMBA_OK = False
if not os.environ.get("SEPIDX_NO_NUMBA", ""):
    # Reserve headroom so callers may request up to 8 threads even on
    # smaller machines; must happen before the first numba import.
    os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")
    ncpu = os.cpu_count() or 1
    os.environ.setdefault("NUMBA_NUM_THREADS", str(max(8, ncpu)))
    try:
        import numba
        from numba import njit, prange
        _NUMBA_OK = True
    except ImportError:  # pragma: no cover - exercised via SEPIDX_NO_NUMBA
        _NUMBA_OK = False


def set_threads(n: int) -> int:
    """Set the number of worker threads for the numba path; no-op on numpy.

    Returns the thread count actually in effect.
    """
    if n < 1:
        raise ValueError("thread count must be >= 1")
    if _use_numba():
        cap = numba.config.NUMBA_NUM_THREADS
        eff = min(n, cap)
        numba.set_num_threads(eff)
        return eff
    return 1


def get_threads() -> int:
    if _use_numba():
        return numba.get_num_threads()
    return 1


def backend_name() -> str:
    return "numba" if _use_numba() else "numpy"


if _NUMBA_OK:

    @njit(parallel=True, cache=True)
    def _nn_numba(X, tiles):  # X: (q, d) float64; tiles: (q//_TILE, d, _TILE)
        q, d = X.shape
        out_idx = np.empty(q, np.int64)
        out_dist = np.empty(q, np.float64)
        qfull = q - (q % _TILE)
        nblk = (q + _QBLOCK - 1) // _QBLOCK
        for b in prange(nblk):
            i0 = b * _QBLOCK
            i1 = min(i0 + _QBLOCK, q)
            nb = i1 - i0
            best = np.full(nb, np.inf)
            bidx = np.full(nb, -1, np.int64)
            for h0 in range(0, qfull, _TILE):
                # Candidate tile transposed so the 8 lanes read one
                # contiguous cache line per dimension.
                tile = tiles[h0 // _TILE]
                for ii in range(i0, i1):
                    bi = ii - i0
                    bb = best[bi]
                    a0 = 0.0; a1 = 0.0; a2 = 0.0; a3 = 0.0
                    a4 = 0.0; a5 = 0.0; a6 = 0.0; a7 = 0.0
                    self_in_tile = h0 <= ii < h0 + _TILE
                    k = 0
                    while k < d:
                        kend = min(k + _CHUNK, d)
                        for kk in range(k, kend):
                            x = X[ii, kk]
                            d0 = x - tile[kk, 0]; a0 += d0 * d0
                            d1 = x - tile[kk, 1]; a1 += d1 * d1
                            d2 = x - tile[kk, 2]; a2 += d2 * d2
                            d3 = x - tile[kk, 3]; a3 += d3 * d3
                            d4 = x - tile[kk, 4]; a4 += d4 * d4
                            d5 = x - tile[kk, 5]; a5 += d5 * d5
                            d6 = x - tile[kk, 6]; a6 += d6 * d6
                            d7 = x - tile[kk, 7]; a7 += d7 * d7
                        k = kend
                        # All lanes provably worse: the rest of this tile
                        # cannot improve the current best (sums only grow).
                        # Never prune the tile holding the query itself --
                        # its own lane sits at 0 but must be skipped below.
                        if (not self_in_tile and k < d
                                and a0 > bb and a1 > bb and a2 > bb and a3 > bb
                                and a4 > bb and a5 > bb and a6 > bb and a7 > bb):
                            k = d
                            a0 = np.inf; a1 = np.inf; a2 = np.inf; a3 = np.inf
                            a4 = np.inf; a5 = np.inf; a6 = np.inf; a7 = np.inf
                    if h0 + 0 != ii and a0 < bb:
                        bb = a0; bidx[bi] = h0 + 0
                    if h0 + 1 != ii and a1 < bb:
                        bb = a1; bidx[bi] = h0 + 1
                    if h0 + 2 != ii and a2 < bb:
                        bb = a2; bidx[bi] = h0 + 2
                    if h0 + 3 != ii and a3 < bb:
                        bb = a3; bidx[bi] = h0 + 3
                    if h0 + 4 != ii and a4 < bb:
                        bb = a4; bidx[bi] = h0 + 4
                    if h0 + 5 != ii and a5 < bb:
                        bb = a5; bidx[bi] = h0 + 5
                    if h0 + 6 != ii and a6 < bb:
                        bb = a6; bidx[bi] = h0 + 6
                    if h0 + 7 != ii and a7 < bb:
                        bb = a7; bidx[bi] = h0 + 7
                    best[bi] = bb
            # Remainder candidates (q not a multiple of the lane count).
            for ii in range(i0, i1):
                bi = ii - i0
                bb = best[bi]
                for h in range(qfull, q):
                    if h == ii:
                        continue
                    acc = 0.0
                    for kk in range(d):
                        diff = X[ii, kk] - X[h, kk]
                        acc += diff * diff
                        if acc > bb:
                            break
                    if acc < bb:
                        bb = acc
                        bidx[bi] = h
                best[bi] = bb
            for ii in range(i0, i1):
                out_idx[ii] = bidx[ii - i0]
                out_dist[ii] = best[ii - i0]
        return out_idx, out_dist


def _nn_numpy(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pure-numpy fallback: per-dimension sequential float64 accumulation
    over query blocks; same per-pair operation order as the numba path."""
    q, d = X.shape
    out_idx = np.empty(q, np.int64)
    out_dist = np.empty(q, np.float64)
    blk = max(1, min(q, (1 << 25) // max(q, 1)))  # cap scratch at ~256 MB
    for i0 in range(0, q, blk):
        i1 = min(i0 + blk, q)
        acc = np.zeros((i1 - i0, q), np.float64)
        for k in range(d):
            diff = X[i0:i1, k, None] - X[None, :, k]
            acc += diff * diff
        rows = np.arange(i1 - i0)
        acc[rows, np.arange(i0, i1)] = np.inf  # exclude self
        idx = np.argmin(acc, axis=1)  # first occurrence = smallest index
        out_idx[i0:i1] = idx
        out_dist[i0:i1] = acc[rows, idx]
    return out_idx, out_dist


def nearest_neighbor_kernel(points_f32: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Exact 1-NN (self excluded) over float32 row-major points.

    Returns (neighbor_index int64, neighbor_sq_distance float64); distances
    are accumulated in float64 from exactly widened float32 inputs.
    """
    X = np.ascontiguousarray(points_f32, dtype=np.float64)
    if _use_numba():
        qfull = X.shape[0] - (X.shape[0] % _TILE)
        # (ntiles, d, _TILE) transposed tiles, built once up front
        tiles = np.ascontiguousarray(
            X[:qfull].reshape(qfull // _TILE, _TILE, X.shape[1]).transpose(0, 2, 1))
        if tiles.size == 0:
            tiles = np.empty((0, X.shape[1], _TILE), np.float64)
        return _nn_numba(X, tiles)
    return _nn_numpy(X)
