"""Deterministic RNG derivation.

Every stochastic component gets its generator from a root seed plus a stable
string/int path, so reruns are bit-reproducible and sub-streams never collide.
"""
from __future__ import annotations

import random
import zlib

import numpy as np


def _key(parts: tuple) -> tuple[int, ...]:
    out = []
    for part in parts:
        if isinstance(part, str):
            out.append(zlib.crc32(part.encode("utf-8")))
        else:
            out.append(int(part) & 0xFFFFFFFF)
    return tuple(out)


def derive_rng(seed: int, *parts) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=_key(parts))))


def derive_pyrandom(seed: int, *parts) -> random.Random:
    state = np.random.SeedSequence(seed, spawn_key=_key(parts)).generate_state(2)
    return random.Random(int(state[0]) << 32 | int(state[1]))
