import numpy as np

from custom_tools.logger import custom_logger

from .network import backward, cross_entropy, forward
from .params import BLOCKS, NetworkParams


def grad_check(params: NetworkParams, batch, labels, eps: float = 1e-5, blocks=BLOCKS,
               gradients: NetworkParams = None, floor: float = 1e-4) -> float:
    """
    Worst relative error between analytic and central-difference gradients.

    Relative error is |analytic - numeric| / max(|numeric|, floor). Pass
    `gradients` to check something other than `backward`'s output.
    """
    if gradients is None:
        gradients = backward(params, forward(params, batch), labels)
    probe = params.copy()

    def loss() -> float:
        return cross_entropy(forward(probe, batch).logits, labels)

    worst = 0.0
    for (_, theta), (_, analytic) in zip(probe.arrays(blocks), gradients.arrays(blocks)):
        flat, flat_grad = theta.reshape(-1), analytic.reshape(-1)
        for position in range(flat.size):
            original = flat[position]
            flat[position] = original + eps
            upper = loss()
            flat[position] = original - eps
            lower = loss()
            flat[position] = original
            numeric = (upper - lower) / (2.0 * eps)
            error = abs(flat_grad[position] - numeric) / max(abs(numeric), floor)
            worst = max(worst, error)

    custom_logger(f"Gradient check over {params.parameter_count} parameters: max relative error {worst:.3e}", "DEBUG")
    return worst
