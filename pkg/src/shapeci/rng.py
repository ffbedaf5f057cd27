"""SplitMix64 counter-based streams.

The ``i``-th output (``i = 0, 1, ...``) of the stream seeded with ``s`` is
``mix(s + (i + 1) * GAMMA mod 2**64)``, which is exactly the sequential
SplitMix64 generator. Because each output depends only on ``(s, i)``, whole
blocks of draws are produced with vectorized ``uint64`` arithmetic and any
replicate can be regenerated independently of the others.
"""

from __future__ import annotations

import numpy as np

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
MASK64 = (1 << 64) - 1


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def splitmix64(seeds, count: int) -> np.ndarray:
    """Raw outputs, shape ``(len(seeds), count)``, for each seed's stream."""
    s = np.asarray([int(v) & MASK64 for v in np.atleast_1d(seeds)], dtype=np.uint64)
    i = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return _mix(s[:, None] + i[None, :] * GAMMA)


def scramble(seed: int) -> int:
    """One SplitMix64 finalizer pass over ``seed``."""
    with np.errstate(over="ignore"):
        return int(_mix(np.asarray([int(seed) & MASK64], dtype=np.uint64))[0])


def substream_seed(base: int, index: int) -> int:
    """Seed of replicate ``index``: ``scramble(base) ^ index``.

    Scrambling the base first keeps replicate streams of nearby base seeds
    (e.g. ``s`` and ``s ^ 2``) from coinciding.
    """
    return scramble(base) ^ (int(index) & MASK64)


def rademacher(base_seed: int, n_draws: int, n_obs: int) -> np.ndarray:
    """Sign matrix of shape ``(n_draws, n_obs)``.

    Row ``m`` comes from the stream seeded with ``substream_seed(base_seed, m)``
    and uses the top bit of each output: 1 -> +1, 0 -> -1.
    """
    root = scramble(base_seed)
    seeds = [root ^ m for m in range(n_draws)]
    bits = splitmix64(seeds, n_obs) >> np.uint64(63)
    return bits.astype(np.float64) * 2.0 - 1.0


def uniforms(seed: int, count: int) -> np.ndarray:
    """Doubles in ``[0, 1)`` from the top 53 bits of one stream."""
    raw = splitmix64([seed], count)[0]
    return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def standard_normals(seed: int, count: int) -> np.ndarray:
    """Box-Muller normals; pair ``j`` uses uniforms ``2j`` and ``2j + 1``."""
    pairs = (count + 1) // 2
    u = uniforms(seed, 2 * pairs).reshape(pairs, 2)
    radius = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
    angle = 2.0 * np.pi * u[:, 1]
    z = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)]).reshape(-1)
    return z[:count]
