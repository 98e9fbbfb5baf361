from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from .exceptions import NetworkSpecError

# Block names: the DNN feature extractor (Theta), buffer layer (W_B), linear head (W_L).
DNN = "dnn"
BUFFER = "buffer"
HEAD = "head"
BLOCKS = (DNN, BUFFER, HEAD)


@dataclass
class Layer:
    weight: np.ndarray
    bias: np.ndarray

    def copy(self) -> "Layer":
        return Layer(self.weight.copy(), self.bias.copy())

    def zeros_like(self) -> "Layer":
        return Layer(np.zeros_like(self.weight), np.zeros_like(self.bias))


@dataclass
class NetworkParams:
    """
    Weights of input -> DNN (ReLU layers) -> buffer (dense + ReLU) -> linear head.

    `layer_spec` is (input, *dnn_widths, buffer_width, n_classes). Gradients
    and momentum buffers reuse this container.
    """
    dnn: List[Layer]
    buffer: Layer
    head: Layer
    layer_spec: Tuple[int, ...]

    def block(self, name: str) -> List[Layer]:
        if name == DNN:
            return self.dnn
        if name == BUFFER:
            return [self.buffer]
        if name == HEAD:
            return [self.head]
        raise KeyError(name)

    def arrays(self, blocks: Sequence[str] = BLOCKS) -> Iterator[Tuple[str, np.ndarray]]:
        """(block, array) pairs in a fixed order: per layer, weight then bias."""
        for name in BLOCKS:
            if name in blocks:
                for layer in self.block(name):
                    yield name, layer.weight
                    yield name, layer.bias

    def copy(self) -> "NetworkParams":
        return NetworkParams([l.copy() for l in self.dnn], self.buffer.copy(), self.head.copy(), self.layer_spec)

    def zeros_like(self) -> "NetworkParams":
        return NetworkParams([l.zeros_like() for l in self.dnn], self.buffer.zeros_like(),
                             self.head.zeros_like(), self.layer_spec)

    @property
    def parameter_count(self) -> int:
        return int(sum(a.size for _, a in self.arrays()))

    @property
    def n_classes(self) -> int:
        return int(self.layer_spec[-1])

    def equals(self, other: "NetworkParams", blocks: Sequence[str] = BLOCKS) -> bool:
        """Bitwise equality of the selected blocks."""
        return all(np.array_equal(a, b) for (_, a), (_, b) in zip(self.arrays(blocks), other.arrays(blocks)))


def validate_spec(layer_spec) -> Tuple[int, ...]:
    spec = tuple(int(width) for width in layer_spec)
    if len(spec) < 4:
        raise NetworkSpecError(f"layer spec {spec} needs input, at least one hidden width, buffer width and class count")
    if any(width < 1 for width in spec):
        raise NetworkSpecError(f"layer spec {spec} has a non-positive width")
    if spec[-1] < 2:
        raise NetworkSpecError("the head needs at least two outputs")
    return spec


def _he_layer(rng: np.random.Generator, fan_in: int, fan_out: int) -> Layer:
    return Layer(rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_in, fan_out)), np.zeros(fan_out))


def init_network(layer_spec, seed: int) -> NetworkParams:
    """He-normal weights, zero biases; identical for identical (spec, seed)."""
    spec = validate_spec(layer_spec)
    rng = np.random.default_rng(seed)
    layers = [_he_layer(rng, spec[i], spec[i + 1]) for i in range(len(spec) - 1)]
    return NetworkParams(dnn=layers[:-2], buffer=layers[-2], head=layers[-1], layer_spec=spec)
