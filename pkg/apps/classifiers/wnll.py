"""
WNLL as a classifier: the labeled points are the template, the queries are
interpolated over one kNN graph built on both.

A query whose coordinates equal a template point exactly is boundary data:
it takes that point's label (the lowest template index on multiple matches)
and does not enter the graph.
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from django.conf import settings
from joblib import Parallel, delayed

from apps.datasets.splits import stratified_partition
from apps.graphs.weights import build_graph
from apps.sampling.coverage import recommend_template_size
from apps.solvers.interpolation import wnll_interpolate
from apps.solvers.problems import InterpolationProblem, one_hot
from custom_tools.logger import custom_logger, record_event
from custom_tools.seeding import named_stream

from .exceptions import ClassifierError


@dataclass(frozen=True)
class VoteTally:
    """counts[i, c]: template batches that predicted class c for query i."""
    counts: np.ndarray
    n_batches: int

    @property
    def votes_per_point(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def winners(self) -> np.ndarray:
        return np.argmax(self.counts, axis=1)


def _label_indices(labels, n_classes: Optional[int]) -> Tuple[np.ndarray, int]:
    indices = np.asarray(getattr(labels, "indices", labels), dtype=np.int64)
    if n_classes is None:
        n_classes = getattr(labels, "n_classes", None) or int(indices.max()) + 1
    return indices, int(n_classes)


def _coincident(template_X: np.ndarray, query_X: np.ndarray) -> np.ndarray:
    """For every query, the lowest template index with identical coordinates, or -1."""
    lookup = {}
    # Adding 0.0 folds -0.0 into 0.0 before comparing raw bytes.
    for index, row in enumerate(template_X + 0.0):
        lookup.setdefault(row.tobytes(), index)
    return np.array([lookup.get(row.tobytes(), -1) for row in query_X + 0.0], dtype=np.int64)


def interpolate_queries(template_X, template_y, query_X, n_classes: int, k: int = None, r: int = None,
                        mu: float = None, method: str = "auto", tol: float = None, max_iter: int = None,
                        uncovered: str = "error", n_jobs: int = None) -> np.ndarray:
    """
    Class scores (m x C) for the query rows, template rows acting as labeled
    boundary. `mu` defaults to the weighted nonlocal Laplacian value for the
    combined graph.
    """
    template_X = np.asarray(template_X, dtype=np.float64)
    query_X = np.asarray(query_X, dtype=np.float64)
    template_y = np.asarray(template_y, dtype=np.int64)
    k = settings.WNLL_KNN_K if k is None else k
    r = settings.WNLL_SIGMA_RANK if r is None else r
    if template_X.shape[1] != query_X.shape[1]:
        raise ClassifierError(f"template dimension {template_X.shape[1]} != query dimension {query_X.shape[1]}")

    scores = np.zeros((query_X.shape[0], n_classes))
    matches = _coincident(template_X, query_X)
    matched = matches >= 0
    scores[matched] = one_hot(template_y[matches[matched]], n_classes)

    free = np.flatnonzero(~matched)
    if free.size == 0:
        return scores

    n_template = template_X.shape[0]
    graph = build_graph(np.vstack([template_X, query_X[free]]), k, r, method=method, n_jobs=n_jobs)
    problem = InterpolationProblem(graph=graph, template_ids=np.arange(n_template),
                                   template_labels=one_hot(template_y, n_classes), mu=mu)
    solution = wnll_interpolate(problem, tol=tol, max_iter=max_iter, uncovered=uncovered)
    scores[free] = solution.scores[n_template:]
    return scores


def wnll_classify(train_X, train_y, test_X, k: int = None, r: int = None, mu: float = None,
                  n_classes: int = None, method: str = "auto", uncovered: str = "error",
                  n_jobs: int = None, return_scores: bool = False):
    """
    Label the test rows by interpolating from the whole training set.
    With `return_scores` the m x C score matrix comes back as well.
    """
    indices, n_classes = _label_indices(train_y, n_classes)
    missing = np.setdiff1d(np.arange(n_classes), indices)
    if missing.size:
        raise ClassifierError(f"training labels do not cover classes {missing.tolist()}")
    scores = interpolate_queries(train_X, indices, test_X, n_classes, k=k, r=r, mu=mu, method=method,
                                 uncovered=uncovered, n_jobs=n_jobs)
    predictions = np.argmax(scores, axis=1)
    return (predictions, scores) if return_scores else predictions


def _vote_batch(train_X, indices, test_X, batch, n_classes, k, r, mu, method, uncovered) -> np.ndarray:
    scores = interpolate_queries(train_X[batch], indices[batch], test_X, n_classes, k=k, r=r, mu=mu,
                                 method=method, uncovered=uncovered, n_jobs=1)
    return np.argmax(scores, axis=1)


def batched_vote(train_X, train_y, test_X, template_batch_size: int, seed: int, k: int = None, r: int = None,
                 mu: float = None, n_classes: int = None, method: str = "auto", uncovered: str = "error",
                 n_jobs: int = None) -> Tuple[np.ndarray, VoteTally]:
    """
    Split the template into ceil(n_train / template_batch_size) stratified
    batches, interpolate the test set from each, and take the per-point
    majority (lowest class on ties). Batch solves run in parallel; the tally
    is merged in batch order.
    """
    train_X = np.asarray(train_X, dtype=np.float64)
    test_X = np.asarray(test_X, dtype=np.float64)
    indices, n_classes = _label_indices(train_y, n_classes)
    if template_batch_size < n_classes:
        raise ClassifierError(f"template batches of {template_batch_size} cannot cover {n_classes} classes")
    missing = np.setdiff1d(np.arange(n_classes), indices)
    if missing.size:
        raise ClassifierError(f"training labels do not cover classes {missing.tolist()}")

    n_batches = max(1, math.ceil(indices.size / template_batch_size))
    try:
        batches = stratified_partition(indices, n_batches, named_stream(seed, "batching"))
    except ValueError as exc:
        raise ClassifierError(f"cannot stratify the template into {n_batches} batches: {exc}") from exc

    smallest = min(batch.size for batch in batches)
    recommended = recommend_template_size(n_classes)
    if smallest < recommended:
        custom_logger(f"Template batches of {smallest} points are below the recommended {recommended} "
                      f"for {n_classes} classes", "WARNING")

    n_jobs = settings.WNLL_N_JOBS if n_jobs is None else n_jobs
    predictions = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_vote_batch)(train_X, indices, test_X, batch, n_classes, k, r, mu, method, uncovered) for batch in batches
    )

    counts = np.zeros((test_X.shape[0], n_classes), dtype=np.int64)
    rows = np.arange(test_X.shape[0])
    for predicted in predictions:
        counts[rows, predicted] += 1
    tally = VoteTally(counts=counts, n_batches=len(batches))
    record_event("batched_vote", batches=len(batches), smallest_batch=smallest, n_test=int(test_X.shape[0]))
    return tally.winners(), tally


def accuracy(predicted, truth) -> float:
    predicted = np.asarray(getattr(predicted, "indices", predicted))
    truth = np.asarray(getattr(truth, "indices", truth))
    if predicted.shape != truth.shape:
        raise ClassifierError(f"prediction length {predicted.size} != truth length {truth.size}")
    if truth.size == 0:
        raise ClassifierError("accuracy of an empty prediction is undefined")
    return float(np.count_nonzero(predicted == truth) / truth.size)
