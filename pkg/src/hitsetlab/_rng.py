"""Counter-based deterministic randomness built on the splitmix64 finalizer.

Every random word the library consumes is a pure function of a 64-bit seed
and a 64-bit counter, so results do not depend on generation order, chunk
sizes, or process count.  The constants are the standard splitmix64 ones;
they are module-level so results can be reproduced outside this package.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX_MUL_1 = 0xBF58476D1CE4E5B9
_MIX_MUL_2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """splitmix64 finalizer applied to one 64-bit word."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX_MUL_1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_MUL_2) & MASK64
    return z ^ (z >> 31)


def stream_word(seed: int, counter: int) -> int:
    """Word number `counter` (0-based) of the stream keyed by `seed`."""
    return mix64((seed + ((counter + 1) & MASK64) * GOLDEN_GAMMA) & MASK64)


def split_seed(base: int, *path: int) -> int:
    """Derive an independent seed from `base` and an integer index path.

    Composable: split_seed(b, i, t) == split_seed(split_seed(b, i), t).
    Used to key per-trial instance streams, shuffle streams, and reshuffle
    copies without any risk of stream overlap.
    """
    s = base & MASK64
    for v in path:
        s = stream_word(s, v)
    return s


def _stream_words_np(seed: int, counters: np.ndarray) -> np.ndarray:
    # vectorized stream_word; relies on uint64 wraparound
    z = (np.uint64(seed & MASK64) + (counters + np.uint64(1)) * np.uint64(GOLDEN_GAMMA))
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX_MUL_1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX_MUL_2)
    return z ^ (z >> np.uint64(31))


def bernoulli_bits(seed: int, start_counter: int, count: int, p: float) -> np.ndarray:
    """uint8 array of `count` Bernoulli(p) bits at consecutive counters.

    Bit k is 1 iff stream_word(seed, start_counter + k) < floor(p * 2**64),
    so the scalar and vectorized paths agree exactly.
    """
    if p >= 1.0:
        return np.ones(count, dtype=np.uint8)
    if p <= 0.0:
        return np.zeros(count, dtype=np.uint8)
    threshold = int(p * 2.0 ** 64)  # exact: scaling a float by 2**64 only shifts the exponent
    if threshold <= 0:
        return np.zeros(count, dtype=np.uint8)
    counters = np.arange(start_counter, start_counter + count, dtype=np.uint64)
    words = _stream_words_np(seed, counters)
    return (words < np.uint64(threshold)).astype(np.uint8)


class WordStream:
    """Sequential view over one keyed stream, for shuffles and rejection sampling."""

    def __init__(self, seed: int):
        self._seed = seed & MASK64
        self._i = 0

    def next_word(self) -> int:
        w = stream_word(self._seed, self._i)
        self._i += 1
        return w

    def randbelow(self, bound: int) -> int:
        """Uniform integer in [0, bound) by masked rejection; unbiased."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        mask = (1 << (bound - 1).bit_length()) - 1
        while True:
            r = self.next_word() & mask
            if r < bound:
                return r


def shuffled(items, seed: int) -> list:
    """Fisher-Yates shuffle driven by the keyed stream; returns a new list."""
    out = list(items)
    stream = WordStream(seed)
    for i in range(len(out) - 1, 0, -1):
        j = stream.randbelow(i + 1)
        out[i], out[j] = out[j], out[i]
    return out
