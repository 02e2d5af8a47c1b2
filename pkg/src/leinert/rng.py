"""Deterministic random streams.

Every stochastic piece of the package (string samplers, Haar unitaries) draws
from numpy's Philox generator, which is counter-based: a stream is fully
determined by its 64-bit key, independent of how many values other streams
have consumed.  Substreams are addressed by a root seed plus a tuple of
integers; the key is derived by a splitmix64 chain, which decorrelates
neighbouring addresses well enough that (seed, i) and (seed, i+1) share no
visible structure.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One splitmix64 step (Steele/Lea/Flood finalizer constants)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_key(seed: int, *stream: int) -> int:
    """Fold a stream address into a single 64-bit Philox key."""
    key = splitmix64(seed & _MASK64)
    for part in stream:
        # mix, then absorb; plain xor would make (a, b) and (b, a) collide
        key = splitmix64(key ^ (part & _MASK64))
    return key


def philox(seed: int, *stream: int) -> np.random.Generator:
    """Generator for the substream addressed by (seed, *stream)."""
    return np.random.Generator(np.random.Philox(key=derive_key(seed, *stream)))


def standard_complex_normal(gen: np.random.Generator, shape) -> np.ndarray:
    """I.i.d. standard complex Gaussians, E|z|^2 = 1, via Box-Muller.

    Spelled out rather than delegating to gen.normal so the construction is
    pinned: u1, u2 uniform on [0, 1), r = sqrt(-2 log(1 - u1)),
    z = r (cos(2 pi u2) + i sin(2 pi u2)) / sqrt(2).
    """
    u1 = gen.random(shape)
    u2 = gen.random(shape)
    r = np.sqrt(-2.0 * np.log1p(-u1))
    angle = 2.0 * np.pi * u2
    return (r * np.cos(angle) + 1j * r * np.sin(angle)) / np.sqrt(2.0)
