"""Multinomial logistic regression trained by mini-batch gradient descent."""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from django.conf import settings
from scipy.special import log_softmax, softmax

from apps.toynet.exceptions import TrainingDivergedError
from custom_tools.logger import custom_logger, record_event
from custom_tools.seeding import named_stream

from .exceptions import ClassifierError


@dataclass(frozen=True)
class SoftmaxModel:
    weights: np.ndarray   # (d, C)
    bias: np.ndarray      # (C,)
    epochs: int
    lr: float
    seed: int
    loss_history: Tuple[float, ...] = ()

    @property
    def n_classes(self) -> int:
        return int(self.bias.size)


def _labels_and_classes(labels, n_classes: Optional[int]):
    indices = np.asarray(getattr(labels, "indices", labels), dtype=np.int64)
    if n_classes is None:
        n_classes = getattr(labels, "n_classes", None) or int(indices.max()) + 1
    return indices, int(n_classes)


def _loss(data, labels, weights, bias) -> float:
    log_probs = log_softmax(data @ weights + bias, axis=1)
    return float(-log_probs[np.arange(labels.size), labels].mean())


def train_softmax(data, labels, epochs: int = None, lr: float = None, seed: int = 0,
                  batch_size: int = None, n_classes: int = None) -> SoftmaxModel:
    """
    Fit weights and bias from zero by mini-batch gradient descent on the mean
    cross-entropy. `batch_size=0` means full batch. Batch order comes from
    the "batching" stream of `seed`.
    """
    data = np.asarray(data, dtype=np.float64)
    indices, n_classes = _labels_and_classes(labels, n_classes)
    epochs = settings.WNLL_SOFTMAX_EPOCHS if epochs is None else epochs
    lr = settings.WNLL_SOFTMAX_LR if lr is None else lr
    batch_size = settings.WNLL_SOFTMAX_BATCH if batch_size is None else batch_size

    if data.ndim != 2 or data.shape[0] != indices.size:
        raise ClassifierError(f"{data.shape[0]} points but {indices.size} labels")
    if n_classes < 2 or np.unique(indices).size < 2:
        raise ClassifierError("softmax regression needs at least two classes in the training labels")

    n, d = data.shape
    if batch_size <= 0 or batch_size >= n:
        batch_size = n
    rng = named_stream(seed, "batching")
    weights = np.zeros((d, n_classes))
    bias = np.zeros(n_classes)
    history = []

    for epoch in range(epochs):
        order = rng.permutation(n) if batch_size < n else np.arange(n)
        for start in range(0, n, batch_size):
            rows = order[start:start + batch_size]
            delta = softmax(data[rows] @ weights + bias, axis=1)
            delta[np.arange(rows.size), indices[rows]] -= 1.0
            delta /= rows.size
            with np.errstate(over="ignore", invalid="ignore"):
                weights -= lr * (data[rows].T @ delta)
                bias -= lr * delta.sum(axis=0)

        with np.errstate(over="ignore", invalid="ignore"):
            loss = _loss(data, indices, weights, bias)
        if not (np.isfinite(loss) and np.isfinite(weights).all()):
            record_event("diverged", stage="softmax", epoch=epoch)
            raise TrainingDivergedError(epoch, "softmax")
        history.append(loss)
        record_event("epoch", stage="softmax", epoch=epoch, loss=loss, lr=lr)

    custom_logger(f"Softmax regression: {epochs} epochs, final loss {history[-1] if history else float('nan'):.4f}", "DEBUG")
    return SoftmaxModel(weights=weights, bias=bias, epochs=epochs, lr=lr, seed=seed, loss_history=tuple(history))


def predict_softmax(model: SoftmaxModel, data) -> np.ndarray:
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2 or data.shape[1] != model.weights.shape[0]:
        raise ClassifierError(f"data of shape {data.shape} does not match model dimension {model.weights.shape[0]}")
    return np.argmax(data @ model.weights + model.bias, axis=1)
