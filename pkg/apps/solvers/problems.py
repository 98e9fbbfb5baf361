from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import sparse

from .exceptions import InterpolationProblemError


def one_hot(labels, n_classes: int) -> np.ndarray:
    labels = np.asarray(getattr(labels, "indices", labels), dtype=np.int64)
    encoded = np.zeros((labels.size, n_classes), dtype=np.float64)
    encoded[np.arange(labels.size), labels] = 1.0
    return encoded


def weight_matrix(graph) -> sparse.csr_matrix:
    """Accept a SparseWeightGraph or any square non-negative sparse matrix."""
    weights = getattr(graph, "weights", graph)
    return sparse.csr_matrix(weights, dtype=np.float64)


@dataclass(frozen=True)
class InterpolationProblem:
    """
    Labels g on the template X^te of a weighted graph.

    `mu` defaults to |X| / |X^te| - 1 (the weighted nonlocal Laplacian); pass
    0 for plain harmonic extension.
    """
    graph: object
    template_ids: np.ndarray
    template_labels: np.ndarray
    mu: Optional[float] = None

    def __post_init__(self):
        weights = weight_matrix(self.graph)
        n = weights.shape[0]
        if weights.shape != (n, n):
            raise InterpolationProblemError("weight matrix must be square")
        if weights.nnz and (weights.data.min() < 0 or not np.all(np.isfinite(weights.data))):
            raise InterpolationProblemError("weights must be finite and non-negative")

        ids = np.asarray(self.template_ids, dtype=np.int64)
        if ids.ndim != 1 or ids.size == 0:
            raise InterpolationProblemError("template must be a non-empty index set")
        if ids.min() < 0 or ids.max() >= n:
            raise InterpolationProblemError(f"template index outside [0, {n})")
        if np.unique(ids).size != ids.size:
            raise InterpolationProblemError("template indices must be distinct")

        g = np.asarray(self.template_labels, dtype=np.float64)
        if g.ndim != 2 or g.shape[0] != ids.size:
            raise InterpolationProblemError("template_labels must be |X^te| x C")
        if not np.all(np.isfinite(g)) or not np.allclose(g.sum(axis=1), 1.0, atol=1e-12, rtol=0.0):
            raise InterpolationProblemError("each template label row must be finite and sum to 1")

        mu = n / ids.size - 1.0 if self.mu is None else float(self.mu)
        if mu < 0:
            raise InterpolationProblemError(f"mu must be non-negative, got {mu}")

        object.__setattr__(self, "template_ids", ids)
        object.__setattr__(self, "template_labels", g)
        object.__setattr__(self, "mu", mu)

    @property
    def weights(self) -> sparse.csr_matrix:
        return weight_matrix(self.graph)

    @property
    def n(self) -> int:
        return int(self.weights.shape[0])

    @property
    def n_classes(self) -> int:
        return int(self.template_labels.shape[1])


@dataclass(frozen=True)
class LinearSystem:
    """A X = B over the unlabeled points; `unlabeled_ids[local]` is the global index."""
    matrix: sparse.csr_matrix
    rhs: np.ndarray
    unlabeled_ids: np.ndarray
    uniform_ids: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))


@dataclass(frozen=True)
class SolverStats:
    iterations: int
    residual: float
    columns: int


@dataclass(frozen=True)
class HarmonicSolution:
    """n x C interpolated scores; template rows equal g exactly."""
    scores: np.ndarray
    stats: SolverStats
    mu: float

    @property
    def n_classes(self) -> int:
        return int(self.scores.shape[1])
