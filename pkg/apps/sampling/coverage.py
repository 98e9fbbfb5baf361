"""
How many uniform draws until every one of N classes has been seen.

The count is a sum of independent geometric variables with success
probabilities N/N, (N-1)/N, ..., 1/N, so its mean is N * H_N. The
simulator does not use that decomposition: it draws class indices directly.
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from django.conf import settings
from joblib import Parallel, delayed

from custom_tools.logger import custom_logger, record_event
from custom_tools.seeding import named_stream

from .exceptions import SamplingError

# Trials per chunk; each chunk owns a derived stream so results do not depend on n_jobs.
TRIAL_CHUNK = 10_000


@dataclass(frozen=True)
class CoverageEstimate:
    n_classes: int
    expected_total: float
    per_class: float
    asymptotic: float


@dataclass(frozen=True)
class CoverageSimulation:
    n_classes: int
    trials: int
    mean: float
    stderr: float


def harmonic_number(n: int) -> float:
    """H_n summed from the smallest term up."""
    total = 0.0
    for i in range(n, 0, -1):
        total += 1.0 / i
    return total


def expected_samples(n_classes: int) -> CoverageEstimate:
    if n_classes < 1:
        raise SamplingError(f"class count must be at least 1, got {n_classes}")
    per_class = harmonic_number(n_classes)
    return CoverageEstimate(
        n_classes=n_classes,
        expected_total=n_classes * per_class,
        per_class=per_class,
        asymptotic=n_classes * math.log(n_classes),
    )


def recommend_template_size(n_classes: int, safety_factor: float = 1.0) -> int:
    """ceil(safety_factor * N * H_N): template size that covers all classes on average."""
    if safety_factor < 1.0:
        raise SamplingError(f"safety_factor must be >= 1, got {safety_factor}")
    return int(math.ceil(safety_factor * expected_samples(n_classes).expected_total))


def _uniform_chunk(n_classes: int, size: int, seed: int, chunk: int) -> np.ndarray:
    """Draw uniform class indices for every trial in the chunk until each has seen all classes."""
    rng = named_stream(seed, "simulation", chunk)
    seen = np.zeros((size, n_classes), dtype=bool)
    n_seen = np.zeros(size, dtype=np.int64)
    counts = np.zeros(size, dtype=np.int64)
    active = np.arange(size)
    draws = 0
    while active.size:
        draws += 1
        classes = rng.integers(0, n_classes, size=active.size)
        fresh = ~seen[active, classes]
        seen[active[fresh], classes[fresh]] = True
        n_seen[active[fresh]] += 1
        finished = n_seen[active] == n_classes
        counts[active[finished]] = draws
        active = active[~finished]
    return counts


def _weighted_chunk(probabilities: np.ndarray, size: int, seed: int, chunk: int) -> np.ndarray:
    rng = named_stream(seed, "simulation", chunk)
    n_classes = probabilities.size
    block = max(16, 4 * n_classes)
    counts = np.empty(size, dtype=np.int64)
    for trial in range(size):
        first_seen = np.full(n_classes, -1, dtype=np.int64)
        offset = 0
        while (first_seen < 0).any():
            draws = rng.choice(n_classes, size=block, p=probabilities)
            classes, positions = np.unique(draws, return_index=True)
            fresh = first_seen[classes] < 0
            first_seen[classes[fresh]] = offset + positions[fresh]
            offset += block
        counts[trial] = first_seen.max() + 1
    return counts


def simulate_coverage(n_classes: int, trials: int, seed: int,
                      probabilities: Optional[Sequence[float]] = None, n_jobs: int = None) -> CoverageSimulation:
    """
    Monte-Carlo mean (and standard error) of the draws needed to see all classes.

    With `probabilities` the classes are drawn non-uniformly; that setting is
    outside what the closed form covers.
    """
    if n_classes < 1:
        raise SamplingError(f"class count must be at least 1, got {n_classes}")
    if trials < 1:
        raise SamplingError(f"trials must be at least 1, got {trials}")

    if probabilities is not None:
        probabilities = np.asarray(probabilities, dtype=np.float64)
        if probabilities.shape != (n_classes,) or (probabilities <= 0).any() \
                or not math.isclose(probabilities.sum(), 1.0, abs_tol=1e-9):
            raise SamplingError("probabilities must be N positive values summing to 1")
        probabilities = probabilities / probabilities.sum()
        custom_logger("Simulating non-uniform class draws; the N*H_N closed form does not apply", "WARNING")
        worker = _weighted_chunk
        first_arg = probabilities
    else:
        worker = _uniform_chunk
        first_arg = n_classes

    n_jobs = settings.WNLL_N_JOBS if n_jobs is None else n_jobs
    sizes = [min(TRIAL_CHUNK, trials - start) for start in range(0, trials, TRIAL_CHUNK)]
    parts = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(worker)(first_arg, size, seed, chunk) for chunk, size in enumerate(sizes)
    )
    counts = np.concatenate(parts).astype(np.float64)
    mean = float(counts.mean())
    stderr = float(counts.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0

    record_event("coverage_simulation", n_classes=n_classes, trials=trials, seed=seed, mean=mean, stderr=stderr,
                 weighted=probabilities is not None)
    return CoverageSimulation(n_classes=n_classes, trials=trials, mean=mean, stderr=stderr)
