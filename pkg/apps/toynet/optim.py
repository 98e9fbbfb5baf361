"""
SGD with Nesterov momentum and L2 weight decay.

The update is written in lookahead form:

    v <- momentum * v - lr * (g + weight_decay * theta)
    theta <- theta + v

with `g` evaluated at `theta + momentum * v` (see `NesterovSGD.lookahead`).
Blocks outside `mask` are never touched, parameters and velocity alike.
"""
from typing import Optional, Sequence

from .params import BLOCKS, NetworkParams


def sgd_step(params: NetworkParams, grads: NetworkParams, lr: float, momentum: float = 0.0,
             weight_decay: float = 0.0, mask: Sequence[str] = BLOCKS,
             velocity: Optional[NetworkParams] = None) -> NetworkParams:
    """Update `params` (and `velocity`, if given) in place and return `params`."""
    if velocity is None:
        velocity = params.zeros_like()
    for block in BLOCKS:
        if block not in mask:
            continue
        for layer, grad, vel in zip(params.block(block), grads.block(block), velocity.block(block)):
            for theta, g, v in ((layer.weight, grad.weight, vel.weight), (layer.bias, grad.bias, vel.bias)):
                v *= momentum
                v -= lr * (g + weight_decay * theta)
                theta += v
    return params


class NesterovSGD:
    def __init__(self, lr: float, momentum: float = 0.9, weight_decay: float = 0.0):
        self.lr = lr
        self.momentum = momentum
        self.weight_decay = weight_decay
        self.velocity: Optional[NetworkParams] = None
        self.steps = 0

    def _ensure_velocity(self, params: NetworkParams) -> NetworkParams:
        if self.velocity is None:
            self.velocity = params.zeros_like()
        return self.velocity

    def lookahead(self, params: NetworkParams) -> NetworkParams:
        """Copy of `params` shifted by momentum * velocity; gradients are taken here."""
        shifted = params.copy()
        if self.velocity is None or self.momentum == 0.0:
            return shifted
        for (_, theta), (_, v) in zip(shifted.arrays(), self.velocity.arrays()):
            theta += self.momentum * v
        return shifted

    def step(self, params: NetworkParams, grads: NetworkParams, mask: Sequence[str] = BLOCKS) -> NetworkParams:
        sgd_step(params, grads, self.lr, self.momentum, self.weight_decay, mask, self._ensure_velocity(params))
        self.steps += 1
        return params

    def reset(self) -> None:
        self.velocity = None
