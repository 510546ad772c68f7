"""Deterministic seeded random numbers.

The whole package draws randomness from one documented generator so that
every result (initial weights, dropout masks, shuffles, sampled tokens) is
reproducible from integer seeds alone, independent of the platform RNG.

The generator is a counter-based splitmix64 stream: output ``i`` (1-based)
of a stream with seed ``s`` is ``mix64(s + i * GOLDEN)`` where ``mix64`` is
the public-domain splitmix64 finalizer

    z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
    z ^= z >> 27;  z *= 0x94D049BB133111EB
    z ^= z >> 31

and ``GOLDEN = 0x9E3779B97F4A7C15``, all arithmetic mod 2**64.  This is
exactly the sequential splitmix64 recurrence written in counter form, which
lets bulk draws vectorize over numpy while staying bit-identical to the
scalar definition.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_U64_GOLDEN = np.uint64(GOLDEN)
_U64_MIX1 = np.uint64(_MIX1)
_U64_MIX2 = np.uint64(_MIX2)


def mix64(z: int) -> int:
    """splitmix64 finalizer on a plain Python int (mod 2**64)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *parts: int) -> int:
    """Fold integer tags into a seed, giving an independent substream.

    Order-sensitive: derive_seed(s, a, b) != derive_seed(s, b, a) in general.
    With no parts the seed is returned unchanged.
    """
    h = seed & MASK64
    for part in parts:
        h = mix64((h + GOLDEN) ^ mix64(part & MASK64))
    return h


def _mix64_array(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _U64_MIX1
        z = (z ^ (z >> np.uint64(27))) * _U64_MIX2
        return z ^ (z >> np.uint64(31))


class Rng:
    """A seeded splitmix64 stream with numpy-vectorized bulk draws."""

    def __init__(self, seed: int):
        self._seed = np.uint64(seed & MASK64)
        self._count = 0

    @property
    def seed(self) -> int:
        return int(self._seed)

    @property
    def draws(self) -> int:
        """Number of 64-bit words consumed so far (the stream cursor)."""
        return self._count

    def spawn(self, *tags: int) -> "Rng":
        """Independent stream derived from this stream's seed and tags."""
        return Rng(derive_seed(int(self._seed), *tags))

    def raw(self, n: int) -> np.ndarray:
        """Next n outputs of the stream as uint64."""
        if n < 0:
            raise ValueError("n must be non-negative")
        idx = np.arange(self._count + 1, self._count + n + 1, dtype=np.uint64)
        self._count += n
        with np.errstate(over="ignore"):
            return _mix64_array(self._seed + idx * _U64_GOLDEN)

    def uniform(self, n: int | None = None) -> np.ndarray | float:
        """Floats in [0, 1) with 53-bit resolution."""
        bits = self.raw(1 if n is None else n) >> np.uint64(11)
        out = bits.astype(np.float64) * 2.0**-53
        return float(out[0]) if n is None else out

    def normal(
        self, n: int | None = None, mean: float = 0.0, std: float = 1.0
    ) -> np.ndarray | float:
        """Gaussian draws via the Box-Muller transform."""
        m = 1 if n is None else n
        pairs = (m + 1) // 2
        # u1 in (0, 1] so log(u1) is finite; u2 in [0, 1).
        u1 = ((self.raw(pairs) >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * 2.0**-53
        u2 = (self.raw(pairs) >> np.uint64(11)).astype(np.float64) * 2.0**-53
        r = np.sqrt(-2.0 * np.log(u1))
        theta = (2.0 * np.pi) * u2
        z = np.concatenate([r * np.cos(theta), r * np.sin(theta)])[:m]
        out = mean + std * z
        return float(out[0]) if n is None else out

    def permutation(self, n: int) -> np.ndarray:
        """A random permutation of range(n)."""
        # argsort of 64-bit keys; stable sort pins the (negligible) tie case.
        return np.argsort(self.raw(n), kind="stable")

    def categorical(self, probs: np.ndarray) -> int:
        """Draw an index from a probability vector by inverse CDF."""
        cdf = np.cumsum(probs)
        u = self.uniform() * cdf[-1]
        return int(min(np.searchsorted(cdf, u, side="right"), len(probs) - 1))
