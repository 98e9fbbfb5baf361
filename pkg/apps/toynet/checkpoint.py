"""
Binary checkpoints: `TNET | version u32 | n u32 | spec u32 x n | f64 blocks`.

Blocks follow `NetworkParams.arrays()` order (per layer weight then bias,
DNN layers first, then buffer, then head), little-endian.
"""
import struct
from pathlib import Path

import numpy as np

from custom_tools.logger import custom_logger

from .exceptions import CheckpointError, NetworkSpecError
from .params import Layer, NetworkParams, validate_spec

MAGIC = b"TNET"
VERSION = 1
_HEAD = struct.Struct("<4sII")


def save_checkpoint(params: NetworkParams, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    spec = params.layer_spec
    with open(path, "wb") as stream:
        stream.write(_HEAD.pack(MAGIC, VERSION, len(spec)))
        stream.write(struct.pack(f"<{len(spec)}I", *spec))
        for _, array in params.arrays():
            stream.write(np.ascontiguousarray(array, dtype="<f8").tobytes())
    custom_logger(f"Checkpoint written to {path}", "DEBUG")
    return path


def load_checkpoint(path) -> NetworkParams:
    path = Path(path)
    if not path.exists():
        raise CheckpointError(f"{path}: checkpoint not found")
    raw = path.read_bytes()
    if len(raw) < _HEAD.size:
        raise CheckpointError(f"{path}: truncated header")
    magic, version, length = _HEAD.unpack_from(raw, 0)
    if magic != MAGIC:
        raise CheckpointError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise CheckpointError(f"{path}: unsupported checkpoint version {version}")

    offset = _HEAD.size
    if len(raw) < offset + 4 * length:
        raise CheckpointError(f"{path}: truncated layer spec")
    try:
        spec = validate_spec(struct.unpack_from(f"<{length}I", raw, offset))
    except NetworkSpecError as exc:
        raise CheckpointError(f"{path}: {exc}") from None
    offset += 4 * length

    layers = []
    for fan_in, fan_out in zip(spec[:-1], spec[1:]):
        arrays = []
        for shape in ((fan_in, fan_out), (fan_out,)):
            count = int(np.prod(shape))
            if len(raw) < offset + 8 * count:
                raise CheckpointError(f"{path}: truncated parameter block at byte {offset}")
            arrays.append(np.frombuffer(raw, dtype="<f8", count=count, offset=offset).reshape(shape).astype(np.float64))
            offset += 8 * count
        layers.append(Layer(*arrays))
    if offset != len(raw):
        raise CheckpointError(f"{path}: {len(raw) - offset} trailing bytes")
    return NetworkParams(dnn=layers[:-2], buffer=layers[-2], head=layers[-1], layer_spec=spec)
