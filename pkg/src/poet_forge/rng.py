"""Counter-based deterministic random streams.

Corpus output must be byte-identical across machines and Python versions,
which rules out `random.Random`: CPython only guarantees stability of the
raw `random()` sequence, not of `shuffle`/`randrange`/`choice`. This module
implements SplitMix64 (Steele, Lea & Flood 2014), a tiny counter-based
generator with a published reference: draw i of a stream is
``mix64(key + (i + 1) * GAMMA)``, so streams are pure functions of their
key, cheap to create, and never need jump-ahead logic.

Every example in a corpus gets its own stream, keyed by
(master_seed, domain tag, global example index). The global index is
``shard_index + local_index * shard_count``, which makes the union of the
shards of a sharded run identical to the matching single-shard run.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a 64-bit bijective avalanche mix."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_key(*parts: int) -> int:
    """Fold integer key parts into one 64-bit stream key."""
    key = 0
    for part in parts:
        key = mix64(key + _GAMMA + (part & _MASK64))
    return key


class Rng:
    """One SplitMix64 output stream.

    The stream is fully determined by the key parts given to the
    constructor; all derived draws (``below``, ``choice``, ``shuffle``,
    ``sample``) are defined in terms of ``next_u64`` with rejection
    sampling and Fisher-Yates, so they are portable by construction.
    """

    __slots__ = ("_key", "_counter")

    def __init__(self, *key_parts: int) -> None:
        self._key = derive_key(*key_parts)
        self._counter = 0

    def next_u64(self) -> int:
        self._counter += 1
        return mix64(self._key + self._counter * _GAMMA)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection."""
        if n <= 0:
            raise ValueError(f"below() needs n >= 1, got {n}")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def chance(self, fraction: float) -> bool:
        """True with probability `fraction` (one draw)."""
        return self.next_u64() < int(fraction * (1 << 64))

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, n: int, k: int) -> list[int]:
        """k distinct integers from range(n), via partial Fisher-Yates."""
        if not 0 <= k <= n:
            raise ValueError(f"sample() needs 0 <= k <= n, got k={k} n={n}")
        virtual: dict[int, int] = {}
        out = []
        for i in range(k):
            j = i + self.below(n - i)
            vi = virtual.get(i, i)
            vj = virtual.get(j, j)
            virtual[i] = vj
            virtual[j] = vi
            out.append(vj)
        return out
