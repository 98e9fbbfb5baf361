from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .exceptions import DatasetError


def as_data_matrix(values, *, source: str = "data") -> np.ndarray:
    """
    Validate and freeze an n x d float64 point cloud.

    Rejects empty shapes and non-finite entries. The returned array is
    read-only so it can be shared between threads.
    """
    matrix = np.array(values, dtype=np.float64, order='C', copy=True)
    if matrix.ndim != 2 or matrix.shape[0] < 1 or matrix.shape[1] < 1:
        raise DatasetError(f"{source}: expected an n x d matrix with n, d >= 1, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        bad = int(np.argwhere(~np.isfinite(matrix))[0][0])
        raise DatasetError(f"{source}: non-finite value in row {bad}")
    matrix.setflags(write=False)
    return matrix


@dataclass(frozen=True)
class LabelVector:
    """
    Class indices in [0, n_classes) plus the names they were decoded from.

    `class_names[c]` is the original label of class index c (empty for IDX
    files, where the label byte is the class index).
    """
    indices: np.ndarray
    n_classes: int
    class_names: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        indices = np.asarray(self.indices, dtype=np.int64)
        if indices.ndim != 1:
            raise DatasetError("labels must be a 1-d vector")
        if self.n_classes < 1:
            raise DatasetError("n_classes must be positive")
        if indices.size and (indices.min() < 0 or indices.max() >= self.n_classes):
            raise DatasetError(f"label index outside [0, {self.n_classes})")
        indices = indices.copy()
        indices.setflags(write=False)
        object.__setattr__(self, 'indices', indices)

    def __len__(self):
        return int(self.indices.shape[0])

    def subset(self, ids) -> 'LabelVector':
        return LabelVector(self.indices[np.asarray(ids, dtype=np.int64)], self.n_classes, self.class_names)


@dataclass(frozen=True)
class DatasetSplit:
    """Template (labeled boundary) ids and the remainder, both sorted ascending."""
    template: np.ndarray
    remainder: np.ndarray
    seed: int

    @property
    def sizes(self) -> Tuple[int, int]:
        return int(self.template.size), int(self.remainder.size)
