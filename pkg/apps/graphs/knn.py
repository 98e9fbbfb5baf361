"""
Exact k-nearest-neighbour search.

Two candidate generators (blocked brute force and a KD-tree) feed one shared
finalisation step that recomputes squared distances coordinate-wise and
sorts by (distance, index). Both paths therefore return identical lists
whenever their candidate sets contain the true neighbours, which they do by
construction: each gathers every point within the k-th distance.
"""
from dataclasses import dataclass

import numpy as np
from django.conf import settings
from joblib import Parallel, delayed
from sklearn.neighbors import KDTree

from custom_tools.logger import custom_logger, record_event

from .exceptions import GraphConstructionError

# Above this dimension a KD-tree degenerates to a linear scan.
TREE_MAX_DIM = 16
_BLOCK_ENTRIES = 4_000_000
_RADIUS_SLACK = 1e-9


@dataclass(frozen=True)
class NeighborLists:
    """`indices[i]` are i's k neighbours by ascending distance; `sq_distances` match."""
    indices: np.ndarray
    sq_distances: np.ndarray

    @property
    def n(self) -> int:
        return int(self.indices.shape[0])

    @property
    def k(self) -> int:
        return int(self.indices.shape[1])


def _finalize(data: np.ndarray, i: int, candidates: np.ndarray, k: int):
    candidates = candidates[candidates != i]
    diff = data[candidates] - data[i]
    sq = np.einsum("ij,ij->i", diff, diff)
    order = np.lexsort((candidates, sq))[:k]
    return candidates[order], sq[order]


def _brute_block(data: np.ndarray, norms: np.ndarray, rows: np.ndarray, k: int):
    # Expanded form only selects candidates; exact distances come from _finalize.
    approx = norms[rows, None] + norms[None, :] - 2.0 * (data[rows] @ data.T)
    approx[np.arange(rows.size), rows] = np.inf
    np.maximum(approx, 0.0, out=approx)
    kth = np.partition(approx, k - 1, axis=1)[:, k - 1]
    scale = norms.max() + 1.0
    out_idx = np.empty((rows.size, k), dtype=np.int64)
    out_sq = np.empty((rows.size, k), dtype=np.float64)
    for local, i in enumerate(rows):
        threshold = kth[local] + _RADIUS_SLACK * scale
        candidates = np.flatnonzero(approx[local] <= threshold)
        out_idx[local], out_sq[local] = _finalize(data, i, candidates, k)
    return out_idx, out_sq


def _tree_block(data: np.ndarray, tree: KDTree, rows: np.ndarray, k: int):
    dist, _ = tree.query(data[rows], k=k + 1)
    radii = dist[:, -1] * (1.0 + _RADIUS_SLACK) + _RADIUS_SLACK
    neighbourhoods = tree.query_radius(data[rows], r=radii)
    out_idx = np.empty((rows.size, k), dtype=np.int64)
    out_sq = np.empty((rows.size, k), dtype=np.float64)
    for local, i in enumerate(rows):
        out_idx[local], out_sq[local] = _finalize(data, i, np.asarray(neighbourhoods[local], dtype=np.int64), k)
    return out_idx, out_sq


def knn_exact(data, k: int, method: str = "auto", n_jobs: int = None) -> NeighborLists:
    """
    Euclidean k nearest neighbours of every point, self excluded.

    Ties are broken by the lower point index. `method` is "brute", "tree"
    or "auto" (tree for low-dimensional data). k >= n is clamped to n - 1.
    """
    data = np.ascontiguousarray(data, dtype=np.float64)
    n = data.shape[0]
    if n < 2:
        raise GraphConstructionError(f"need at least 2 points for a neighbour graph, got {n}")
    if k < 1:
        raise GraphConstructionError(f"k must be at least 1, got {k}")
    if k >= n:
        custom_logger(f"k={k} >= n={n}; clamping k to {n - 1}", "WARNING")
        record_event("knn_clamp", requested_k=k, k=n - 1, n=n)
        k = n - 1

    if method == "auto":
        method = "tree" if data.shape[1] <= TREE_MAX_DIM else "brute"
    if method not in ("brute", "tree"):
        raise GraphConstructionError(f"unknown kNN method '{method}'")

    n_jobs = settings.WNLL_N_JOBS if n_jobs is None else n_jobs
    block = max(1, min(n, _BLOCK_ENTRIES // n))
    blocks = [np.arange(start, min(start + block, n)) for start in range(0, n, block)]

    if method == "tree":
        tree = KDTree(data)
        jobs = (delayed(_tree_block)(data, tree, rows, k) for rows in blocks)
    else:
        norms = np.einsum("ij,ij->i", data, data)
        jobs = (delayed(_brute_block)(data, norms, rows, k) for rows in blocks)

    parts = Parallel(n_jobs=n_jobs, prefer="threads")(jobs)
    indices = np.vstack([p[0] for p in parts])
    sq_distances = np.vstack([p[1] for p in parts])
    indices.setflags(write=False)
    sq_distances.setflags(write=False)
    custom_logger(f"kNN ({method}) over {n} points, k={k}", "DEBUG")
    return NeighborLists(indices=indices, sq_distances=sq_distances)
