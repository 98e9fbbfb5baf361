"""
The two stages of alternating training.

Linear stage: SGD on cross-entropy of the linear head, all blocks updated.
WNLL stage: the buffer features of a mini-batch are interpolated from the
template; the resulting loss drives a W_B-only update whose gradient is the
linear branch's feature gradient, optionally rescaled by L_wnll / L_linear.
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from apps.classifiers.wnll import accuracy, interpolate_queries
from apps.datasets.splits import stratified_partition
from apps.solvers.exceptions import UncoveredComponentError
from apps.toynet.config import TrainConfig
from apps.toynet.exceptions import TrainingDivergedError
from apps.toynet.network import (ForwardTrace, buffer_backward, cross_entropy, embed, forward, head_backward,
                                 loss_and_gradients, predict, probability_cross_entropy)
from apps.toynet.optim import NesterovSGD
from apps.toynet.params import BUFFER, NetworkParams
from custom_tools.logger import custom_logger, record_event
from custom_tools.seeding import named_stream

from .evaluation import evaluate_wnll
from .exceptions import StageError
from .reports import LINEAR, WNLL, StageReport

PROXY_EPSILON = 1e-8
PROBABILITY_FLOOR = 1e-12


@dataclass(frozen=True)
class WnllBatch:
    scores: np.ndarray
    loss: float
    trace: ForwardTrace


def _labels(values) -> np.ndarray:
    return np.asarray(getattr(values, "indices", values), dtype=np.int64)


def _batches(order: np.ndarray, size: int):
    return [order[start:start + size] for start in range(0, order.size, size)]


def _curves(params, config, eval_data, template, track_wnll: bool):
    """(linear accuracy, WNLL accuracy) on the evaluation set, None where skipped."""
    if eval_data is None:
        return None, None
    test_X, test_y = eval_data
    linear_acc = accuracy(predict(params, test_X), test_y)
    wnll_acc = None
    if track_wnll and template is not None:
        _, wnll_acc = evaluate_wnll(params, test_X, test_y, template[0], template[1], config,
                                    template_batch=config.batch_wnll)
    return linear_acc, wnll_acc


def train_linear_stage(params: NetworkParams, train_X, train_y, config: TrainConfig, pass_index: int,
                       eval_data=None, template=None) -> Tuple[NetworkParams, StageReport]:
    """
    `config.linear_epochs` epochs of Nesterov SGD over every block. `params`
    is updated in place and returned. With `eval_data` both accuracy curves
    are recorded per epoch (the WNLL one against `template` when tracked).
    """
    train_X = np.asarray(train_X, dtype=np.float64)
    labels = _labels(train_y)
    optimizer = NesterovSGD(lr=config.lr_at(0, pass_index), momentum=config.momentum,
                            weight_decay=config.weight_decay)
    rng = named_stream(config.seed, "batching", pass_index, 0)
    report = StageReport(stage=LINEAR, pass_index=pass_index)

    for epoch in range(config.linear_epochs):
        optimizer.lr = config.lr_at(epoch, pass_index)
        last_good = params.copy()
        total, seen = 0.0, 0
        for rows in _batches(rng.permutation(labels.size), config.batch_linear):
            loss, grads = loss_and_gradients(optimizer.lookahead(params), train_X[rows], labels[rows])
            optimizer.step(params, grads)
            total += loss * rows.size
            seen += rows.size
        epoch_loss = total / seen
        if not math.isfinite(epoch_loss):
            record_event("diverged", stage=LINEAR, pass_index=pass_index, epoch=epoch)
            raise TrainingDivergedError(epoch, LINEAR, last_good=last_good)

        linear_acc, wnll_acc = _curves(params, config, eval_data, template, config.track_wnll)
        report.record_epoch(epoch_loss, optimizer.lr, linear_acc, wnll_acc, tracked=eval_data is not None)
        record_event("epoch", stage=LINEAR, pass_index=pass_index, epoch=epoch, loss=epoch_loss, lr=optimizer.lr,
                     linear_accuracy=linear_acc, wnll_accuracy=wnll_acc)

    report.steps = optimizer.steps
    return params, report


def wnll_forward(params: NetworkParams, batch_X, batch_y, template_X, template_y, config: TrainConfig) -> WnllBatch:
    """
    Interpolate the batch's buffer features from the template's and score the
    result with cross-entropy (probabilities clamped to [1e-12, 1]).
    Raises UncoveredComponentError when the feature graph leaves batch points
    without a path to the template.
    """
    trace = forward(params, batch_X)
    template_features = embed(params, template_X)
    scores = interpolate_queries(template_features, _labels(template_y), trace.buffer_out, params.n_classes,
                                 k=config.knn_k, r=config.sigma_rank)
    return WnllBatch(scores=scores, loss=probability_cross_entropy(scores, batch_y, PROBABILITY_FLOOR), trace=trace)


def wnll_proxy_gradients(params: NetworkParams, trace: ForwardTrace, batch_y, wnll_loss: float,
                         proxy_scaling: bool = True) -> Tuple[NetworkParams, float, float]:
    """
    Buffer-only gradient standing in for dL_wnll/dW_B.

    The linear head's dL/dX_hat on the same batch is (optionally) scaled by
    L_wnll / max(L_linear, 1e-8) and pushed through the buffer layer. Returns
    (gradients with zero DNN and head blocks, L_linear, scale).
    """
    linear_loss = cross_entropy(trace.logits, batch_y)
    scale = wnll_loss / max(linear_loss, PROXY_EPSILON) if proxy_scaling else 1.0
    _, d_buffer_out = head_backward(params, trace, batch_y)
    buffer_grad, _ = buffer_backward(params, trace, scale * d_buffer_out)
    grads = params.zeros_like()
    grads.buffer = buffer_grad
    return grads, linear_loss, scale


def _template_batches(template_y: np.ndarray, config: TrainConfig, pass_index: int):
    count = max(1, math.ceil(template_y.size / config.batch_wnll))
    if count == 1:
        return [np.arange(template_y.size)]
    return stratified_partition(template_y, count, named_stream(config.seed, "batching", pass_index, 2))


def train_wnll_stage(params: NetworkParams, train_X, train_y, split, config: TrainConfig, pass_index: int,
                     eval_data=None) -> Tuple[NetworkParams, StageReport]:
    """
    `config.wnll_epochs` epochs over the non-template points in batches of
    `batch_wnll`, updating W_B only. A template larger than `batch_wnll` is
    cut into stratified batches that the training batches cycle through.
    Batches with uncovered feature components are skipped and logged.
    """
    train_X = np.asarray(train_X, dtype=np.float64)
    labels = _labels(train_y)
    config.validate_for(params.n_classes)
    template_X, template_y = train_X[split.template], labels[split.template]
    report = StageReport(stage=WNLL, pass_index=pass_index)
    if config.wnll_epochs == 0:
        return params, report
    if split.remainder.size == 0:
        raise StageError("every training point is in the template; nothing left for the WNLL stage")

    template_batches = _template_batches(template_y, config, pass_index)
    optimizer = NesterovSGD(lr=config.wnll_lr_at(pass_index), momentum=config.momentum,
                            weight_decay=config.weight_decay)
    rng = named_stream(config.seed, "batching", pass_index, 1)
    cursor = 0

    for epoch in range(config.wnll_epochs):
        last_good = params.copy()
        total, seen, skipped = 0.0, 0, 0
        batches = _batches(split.remainder[rng.permutation(split.remainder.size)], config.batch_wnll)
        for rows in batches:
            anchor = template_batches[cursor % len(template_batches)]
            cursor += 1
            lookahead = optimizer.lookahead(params)
            try:
                result = wnll_forward(lookahead, train_X[rows], labels[rows], template_X[anchor],
                                      template_y[anchor], config)
            except UncoveredComponentError as exc:
                skipped += 1
                custom_logger(f"Skipping WNLL batch (pass {pass_index}, epoch {epoch}): {exc}", "WARNING")
                record_event("batch_skipped", stage=WNLL, pass_index=pass_index, epoch=epoch,
                             components=len(exc.components))
                continue
            grads, linear_loss, scale = wnll_proxy_gradients(lookahead, result.trace, labels[rows], result.loss,
                                                             config.proxy_scaling)
            optimizer.step(params, grads, mask=(BUFFER,))
            total += result.loss * rows.size
            seen += rows.size
            record_event("wnll_batch", pass_index=pass_index, epoch=epoch, wnll_loss=result.loss,
                         linear_loss=linear_loss, scale=scale)

        report.skipped_batches += skipped
        if seen == 0:
            raise StageError(f"all {len(batches)} WNLL batches skipped in pass {pass_index}, epoch {epoch}")
        epoch_loss = total / seen
        if not math.isfinite(epoch_loss):
            record_event("diverged", stage=WNLL, pass_index=pass_index, epoch=epoch)
            raise TrainingDivergedError(epoch, WNLL, last_good=last_good)

        linear_acc, wnll_acc = _curves(params, config, eval_data, (template_X, template_y), True)
        report.record_epoch(epoch_loss, optimizer.lr, linear_acc, wnll_acc, tracked=eval_data is not None)
        record_event("epoch", stage=WNLL, pass_index=pass_index, epoch=epoch, loss=epoch_loss, lr=optimizer.lr,
                     linear_accuracy=linear_acc, wnll_accuracy=wnll_acc, skipped=skipped)

    report.steps = optimizer.steps
    return params, report
