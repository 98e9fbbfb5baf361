"""
Named random streams derived from one run seed.

Each subsystem asks for its own stream (`"split"`, `"init"`, `"batching"`,
`"simulation"`, ...) so adding draws in one place never reshuffles another.
"""
import zlib

import numpy as np


def stream_key(name: str) -> int:
    return zlib.crc32(name.encode('utf-8'))


def named_stream(seed: int, name: str, *extra: int) -> np.random.Generator:
    """Generator for `(seed, name, *extra)`; identical inputs give identical draws."""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(stream_key(name), *(int(e) for e in extra)))
    return np.random.default_rng(sequence)


def named_seed(seed: int, name: str, *extra: int) -> int:
    """A plain integer seed for APIs that take one (sklearn generators, split_template)."""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(stream_key(name), *(int(e) for e in extra)))
    return int(sequence.generate_state(1, dtype=np.uint32)[0])
