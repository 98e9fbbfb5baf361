"""Synthetic point clouds for tests and desk-scale runs."""
from typing import Tuple

import numpy as np
from sklearn.datasets import make_blobs, make_moons

from .types import LabelVector, as_data_matrix


def two_moons(n: int = 400, noise: float = 0.1, seed: int = 0) -> Tuple[np.ndarray, LabelVector]:
    """Two interleaved half circles in the plane, n // 2 points per class."""
    features, labels = make_moons(n_samples=n, noise=noise, random_state=seed)
    return as_data_matrix(features, source="two-moons"), LabelVector(labels, 2)


def gaussian_blobs(n: int = 200, n_classes: int = 2, dim: int = 2, spread: float = 0.5,
                   separation: float = 10.0, seed: int = 0) -> Tuple[np.ndarray, LabelVector]:
    """Isotropic blobs whose centres sit `separation` apart along the axes."""
    centers = np.zeros((n_classes, dim))
    for c in range(n_classes):
        centers[c, c % dim] = separation * (c // dim + 1)
    features, labels = make_blobs(n_samples=n, centers=centers, cluster_std=spread, random_state=seed)
    return as_data_matrix(features, source="blobs"), LabelVector(labels, n_classes)


def take_first(features, labels: LabelVector, n: int) -> Tuple[np.ndarray, LabelVector]:
    """The first n points, in file order (how the desk-scale MNIST subsets are drawn)."""
    n = min(int(n), features.shape[0])
    return as_data_matrix(features[:n]), labels.subset(np.arange(n))
