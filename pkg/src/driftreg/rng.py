"""Pinned random streams.

Every draw comes from numpy's PCG64 seeded through ``SeedSequence(seed,
spawn_key=key)``, so each (seed, purpose, frame index) has its own
independent stream. Gaussian deviates use the Box-Muller transform on
``Generator.random()`` doubles (53-bit, ``(next_uint64 >> 11) * 2**-53``);
this keeps seeded fixtures independent of numpy's ziggurat implementation.
"""
from __future__ import annotations

import struct

import numpy as np

MASK64 = (1 << 64) - 1

# stream purposes
MOTION = 0
NOISE = 1
SCENE = 2


def stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=tuple(key))))


def box_muller(gen: np.random.Generator, shape) -> np.ndarray:
    """Standard normal deviates, two per pair of uniforms, in row-major order."""
    n = int(np.prod(shape))
    pairs = (n + 1) // 2
    u = gen.random(2 * pairs)
    u1 = 1.0 - u[0::2]  # (0, 1], keeps log finite
    u2 = u[1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    theta = 2.0 * np.pi * u2
    z = np.empty(2 * pairs)
    z[0::2] = r * np.cos(theta)
    z[1::2] = r * np.sin(theta)
    return z[:n].reshape(shape)


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def _word(part) -> int:
    if isinstance(part, bool):
        return int(part)
    if isinstance(part, int):
        return part & MASK64
    if isinstance(part, float):
        return struct.unpack("<Q", struct.pack("<d", part))[0]
    if isinstance(part, str):
        h = 0
        for b in part.encode("utf-8"):
            h = splitmix64(h ^ b)
        return h
    raise TypeError(f"cannot mix {type(part).__name__} into a seed")


def mix_seed(base: int, *parts) -> int:
    """Fold ``parts`` (ints, floats by bit pattern, strings) into a 64-bit seed."""
    h = splitmix64(int(base) & MASK64)
    for p in parts:
        h = splitmix64(h ^ _word(p))
    return h
