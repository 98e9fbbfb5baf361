"""
Forward pass, loss and backpropagation for the toy network.

Layers compute `z = x @ W + b`; weights are stored (fan_in, fan_out).
The DNN block and the buffer use ReLU, the head is affine.
"""
from dataclasses import dataclass
from typing import List

import numpy as np
from scipy.special import log_softmax, softmax

from .exceptions import NetworkSpecError
from .params import Layer, NetworkParams


@dataclass(frozen=True)
class ForwardTrace:
    inputs: np.ndarray
    dnn_pre: List[np.ndarray]
    dnn_post: List[np.ndarray]
    features: np.ndarray      # DNN output
    buffer_pre: np.ndarray
    buffer_out: np.ndarray    # buffer output, the space WNLL interpolates in
    logits: np.ndarray


def relu(values: np.ndarray) -> np.ndarray:
    return np.maximum(values, 0.0)


def _affine(x: np.ndarray, layer: Layer) -> np.ndarray:
    return x @ layer.weight + layer.bias


def embed(params: NetworkParams, batch) -> np.ndarray:
    """Buffer-layer features for a batch; the linear head is not evaluated."""
    return forward(params, batch).buffer_out


def forward(params: NetworkParams, batch) -> ForwardTrace:
    x = np.asarray(batch, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != params.layer_spec[0]:
        raise NetworkSpecError(f"batch of shape {x.shape} does not fit input width {params.layer_spec[0]}")

    pre, post = [], [x]
    for layer in params.dnn:
        z = _affine(x, layer)
        x = relu(z)
        pre.append(z)
        post.append(x)

    buffer_pre = _affine(x, params.buffer)
    buffer_out = relu(buffer_pre)
    logits = _affine(buffer_out, params.head)
    return ForwardTrace(inputs=post[0], dnn_pre=pre, dnn_post=post, features=x,
                        buffer_pre=buffer_pre, buffer_out=buffer_out, logits=logits)


def cross_entropy(logits, labels) -> float:
    """Mean negative log-likelihood of `labels` under softmax(logits)."""
    logits = np.asarray(logits, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    log_probs = log_softmax(logits, axis=1)
    return float(-log_probs[np.arange(labels.size), labels].mean())


def probability_cross_entropy(probabilities, labels, floor: float = 1e-12) -> float:
    """Cross-entropy of already-normalised scores, clamped to [floor, 1] before the log."""
    probabilities = np.clip(np.asarray(probabilities, dtype=np.float64), floor, 1.0)
    labels = np.asarray(labels, dtype=np.int64)
    return float(-np.log(probabilities[np.arange(labels.size), labels]).mean())


def logit_gradient(logits, labels) -> np.ndarray:
    """dL/dlogits of the mean cross-entropy: (softmax - onehot) / batch."""
    labels = np.asarray(labels, dtype=np.int64)
    delta = softmax(np.asarray(logits, dtype=np.float64), axis=1)
    delta[np.arange(labels.size), labels] -= 1.0
    return delta / labels.size


def head_backward(params: NetworkParams, trace: ForwardTrace, labels):
    """Returns (head gradient, dL/d buffer_out)."""
    delta = logit_gradient(trace.logits, labels)
    grad = Layer(trace.buffer_out.T @ delta, delta.sum(axis=0))
    return grad, delta @ params.head.weight.T


def buffer_backward(params: NetworkParams, trace: ForwardTrace, d_buffer_out: np.ndarray):
    """Returns (buffer gradient, dL/d features)."""
    dz = d_buffer_out * (trace.buffer_pre > 0)
    grad = Layer(trace.features.T @ dz, dz.sum(axis=0))
    return grad, dz @ params.buffer.weight.T


def dnn_backward(params: NetworkParams, trace: ForwardTrace, d_features: np.ndarray) -> List[Layer]:
    grads = [None] * len(params.dnn)
    upstream = d_features
    for index in reversed(range(len(params.dnn))):
        dz = upstream * (trace.dnn_pre[index] > 0)
        grads[index] = Layer(trace.dnn_post[index].T @ dz, dz.sum(axis=0))
        upstream = dz @ params.dnn[index].weight.T
    return grads


def backward(params: NetworkParams, trace: ForwardTrace, labels) -> NetworkParams:
    """Exact gradients of cross_entropy(trace.logits, labels), shaped like `params`."""
    head, d_buffer_out = head_backward(params, trace, labels)
    buffer, d_features = buffer_backward(params, trace, d_buffer_out)
    dnn = dnn_backward(params, trace, d_features)
    return NetworkParams(dnn=dnn, buffer=buffer, head=head, layer_spec=params.layer_spec)


def loss_and_gradients(params: NetworkParams, batch, labels):
    trace = forward(params, batch)
    return cross_entropy(trace.logits, labels), backward(params, trace, labels)


def predict(params: NetworkParams, batch) -> np.ndarray:
    """Linear-head prediction: argmax of the logits, lowest class on ties."""
    return np.argmax(forward(params, batch).logits, axis=1)
