"""Per-point scales and Gaussian edge weights on a kNN graph."""
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from custom_tools.logger import custom_logger, record_event

from .exceptions import GraphConstructionError
from .knn import NeighborLists, knn_exact

_TINY = np.finfo(np.float64).tiny


@dataclass(frozen=True)
class SparseWeightGraph:
    """
    Directed kNN graph. `weights[i, j] = exp(-|x_i - x_j|^2 / sigma_i^2)` for
    every j in i's neighbour list; `sq_distances` has the same sparsity.
    """
    weights: sparse.csr_matrix
    sq_distances: sparse.csr_matrix
    sigma: np.ndarray
    k: int
    r: int

    @property
    def n(self) -> int:
        return int(self.weights.shape[0])


def estimate_sigma(neighbors: NeighborLists, r: int) -> np.ndarray:
    """
    sigma_i = distance to the r-th nearest neighbour.

    A zero distance (duplicates) falls back to the smallest positive
    neighbour distance of that point, and to 1 if there is none.
    """
    if not 1 <= r <= neighbors.k:
        raise GraphConstructionError(f"sigma rank r={r} must lie in [1, k={neighbors.k}]")

    sigma = np.sqrt(neighbors.sq_distances[:, r - 1])
    degenerate = np.flatnonzero(sigma == 0.0)
    for i in degenerate:
        positive = neighbors.sq_distances[i][neighbors.sq_distances[i] > 0.0]
        sigma[i] = np.sqrt(positive.min()) if positive.size else 1.0
    if degenerate.size:
        custom_logger(f"{degenerate.size} points had a zero r-th neighbour distance; sigma fallback applied", "WARNING")
        record_event("sigma_fallback", count=int(degenerate.size))
    sigma.setflags(write=False)
    return sigma


def assemble_weights(neighbors: NeighborLists, sigma: np.ndarray, r: int = 0) -> SparseWeightGraph:
    """Gaussian weights normalised by the query point's scale only."""
    sigma = np.asarray(sigma, dtype=np.float64)
    if sigma.shape != (neighbors.n,) or not np.all(sigma > 0.0) or not np.all(np.isfinite(sigma)):
        raise GraphConstructionError("sigma must hold one finite positive scale per point")

    n, k = neighbors.n, neighbors.k
    ratio = neighbors.sq_distances / (sigma[:, None] ** 2)
    # Far-out edges would underflow to 0; keep them strictly positive.
    values = np.maximum(np.exp(-ratio), _TINY)
    indptr = np.arange(0, n * k + 1, k, dtype=np.int64)
    columns = neighbors.indices.ravel()

    weights = sparse.csr_matrix((values.ravel(), columns, indptr), shape=(n, n))
    weights.sort_indices()
    sq_distances = sparse.csr_matrix((neighbors.sq_distances.ravel().copy(), columns, indptr), shape=(n, n))
    sq_distances.sort_indices()
    return SparseWeightGraph(weights=weights, sq_distances=sq_distances, sigma=sigma, k=k, r=r)


def symmetrized_weight(graph, i: int, j: int) -> float:
    """w(i, j) + w(j, i), absent edges counting as 0."""
    weights = getattr(graph, "weights", graph)
    return float(weights[i, j] + weights[j, i])


def symmetrized_matrix(graph) -> sparse.csr_matrix:
    """S = w + w^T as CSR; the matrix both interpolation systems are built on."""
    weights = getattr(graph, "weights", graph)
    return (weights + weights.T).tocsr()


def build_graph(data, k: int, r: int, method: str = "auto", n_jobs: int = None) -> SparseWeightGraph:
    """kNN search, sigma from the r-th neighbour, weight assembly."""
    neighbors = knn_exact(data, k, method=method, n_jobs=n_jobs)
    if r > neighbors.k:
        custom_logger(f"sigma rank {r} exceeds k={neighbors.k}; using r={neighbors.k}", "WARNING")
        r = neighbors.k
    sigma = estimate_sigma(neighbors, r)
    return assemble_weights(neighbors, sigma, r=r)
