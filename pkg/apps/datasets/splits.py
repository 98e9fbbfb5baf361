"""Template/remainder splits and stratified partitions of labeled index sets."""
import math
from typing import List

import numpy as np

from custom_tools.logger import custom_logger

from .exceptions import SplitError
from .types import DatasetSplit


def _as_indices(labels) -> np.ndarray:
    return np.asarray(getattr(labels, "indices", labels), dtype=np.int64)


def _allocate(counts: np.ndarray, total: int) -> np.ndarray:
    """
    Largest-remainder allocation of `total` slots over classes, at least one
    slot per present class and never more than the class holds.
    """
    n = counts.sum()
    exact = counts * (total / n)
    take = np.minimum(np.maximum(np.floor(exact).astype(np.int64), 1), counts)
    # The one-per-class floor can overshoot; give back from the largest shares.
    while take.sum() > total and (take > 1).any():
        candidates = np.flatnonzero(take > 1)
        take[candidates[np.argmax(take[candidates])]] -= 1
    remaining = total - int(take.sum())
    if remaining > 0:
        # Ties in the fractional part go to the lower class index.
        order = sorted(range(counts.size), key=lambda c: (-(exact[c] - math.floor(exact[c])), c))
        for c in order:
            if remaining == 0:
                break
            if take[c] < counts[c]:
                take[c] += 1
                remaining -= 1
    return take


def split_template(labels, fraction: float, seed: int, stratified: bool = True) -> DatasetSplit:
    """
    Reserve round(fraction * n) points as the labeled template.

    Stratified mode draws per class (classes visited in ascending order) and
    guarantees every class present in `labels` contributes at least one
    template point.
    """
    indices = _as_indices(labels)
    n = indices.size
    if not 0.0 < fraction < 1.0:
        raise SplitError(f"fraction must lie in (0, 1), got {fraction}")
    if n == 0:
        raise SplitError("cannot split an empty label vector")

    rng = np.random.default_rng(seed)
    total = min(max(int(round(fraction * n)), 1), n)

    if not stratified:
        template = np.sort(rng.permutation(n)[:total])
    else:
        classes, counts = np.unique(indices, return_counts=True)
        if fraction * n < classes.size:
            raise SplitError(
                f"fraction {fraction} of {n} points cannot hold one template point for each of {classes.size} classes"
            )
        take = _allocate(counts, total)
        chosen = []
        for cls, count in zip(classes, take):
            members = np.flatnonzero(indices == cls)
            chosen.append(members[rng.permutation(members.size)[:count]])
        template = np.sort(np.concatenate(chosen))

    mask = np.ones(n, dtype=bool)
    mask[template] = False
    split = DatasetSplit(template=template, remainder=np.flatnonzero(mask), seed=seed)
    custom_logger(f"Template split (seed={seed}, stratified={stratified}): {split.sizes[0]}/{split.sizes[1]}", "DEBUG")
    return split


def stratified_partition(labels, n_batches: int, rng: np.random.Generator) -> List[np.ndarray]:
    """
    Partition all points into `n_batches` groups so that every class present
    appears in every group. Members of each class are shuffled and dealt
    round-robin; each batch is returned sorted ascending.
    """
    indices = _as_indices(labels)
    if n_batches < 1:
        raise SplitError("n_batches must be at least 1")
    if n_batches == 1:
        return [np.arange(indices.size)]

    batches = [[] for _ in range(n_batches)]
    offset = 0
    for cls in np.unique(indices):
        members = np.flatnonzero(indices == cls)
        if members.size < n_batches:
            raise SplitError(
                f"class {cls} has {members.size} points; cannot stratify it over {n_batches} batches"
            )
        members = members[rng.permutation(members.size)]
        for position, point in enumerate(members):
            batches[(position + offset) % n_batches].append(point)
        # Rotate the start so batch sizes stay balanced across classes.
        offset = (offset + members.size) % n_batches
    return [np.sort(np.asarray(batch, dtype=np.int64)) for batch in batches]
