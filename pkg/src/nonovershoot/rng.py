"""Counter-based random number streams.

Every replica of every experiment owns a 64-bit stream key derived from
``(seed, domain tag, replica index)`` by hashing; the j-th uniform of a stream
is a pure function ``u01(key, j)``.  Consequences:

* replicas are reproducible individually, in any execution order, on any
  number of threads;
* the numba kernels, the vectorized numpy fallback and the scalar Python
  reference all draw bit-identical uniforms.

The generator is the SplitMix64 finalizer applied twice with key whitening,
i.e. a keyed hash of the counter.  Uniforms are mapped to (0, 1) strictly so
``log(u)`` is always finite.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLD = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_KEYC = 0xDA942042E4DD58B5

_U64_GOLD = np.uint64(GOLD)
_U64_MIX1 = np.uint64(_MIX1)
_U64_MIX2 = np.uint64(_MIX2)
_U64_KEYC = np.uint64(_KEYC)
_INV53 = float(2.0**-53)

# domain tags keeping experiment streams disjoint
TAG_WALK = 1
TAG_CRUDE = 2
TAG_SUBORDINATOR = 3
TAG_LOGBREVE = 4
TAG_LADDER = 5
TAG_MODEL = 6
TAG_SUBSTREAM = 7


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a Python int (mod 2^64)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_key(seed: int, tag: int, index: int) -> int:
    """Stream key for replica `index` of experiment domain `tag`."""
    k = mix64((seed & MASK64) ^ ((tag * _KEYC) & MASK64))
    return mix64(k ^ ((index * GOLD) & MASK64))


def u01(key: int, ctr: int) -> float:
    """The ctr-th uniform of stream `key`, strictly inside (0, 1)."""
    z = (key + ctr * GOLD) & MASK64
    h = mix64(mix64(z) ^ ((key * _KEYC) & MASK64))
    return ((h >> 11) + 0.5) * _INV53


def _mix64_arr(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _U64_MIX1
    z = (z ^ (z >> np.uint64(27))) * _U64_MIX2
    return z ^ (z >> np.uint64(31))


def u01_block(key: int, start: int, n: int) -> np.ndarray:
    """Uniforms at counters start..start+n-1 of one stream (vectorized)."""
    ctr = np.arange(start, start + n, dtype=np.uint64)
    return u01_at(key, ctr)


def u01_at(key: int, ctrs: np.ndarray) -> np.ndarray:
    """Uniforms of one stream at an arbitrary array of counters."""
    k = np.uint64(key & MASK64)
    kw = np.uint64(((key & MASK64) * _KEYC) & MASK64)
    z = ctrs.astype(np.uint64) * _U64_GOLD + k
    h = _mix64_arr(_mix64_arr(z) ^ kw)
    return ((h >> np.uint64(11)).astype(np.float64) + 0.5) * _INV53


def u01_keys(keys: np.ndarray, ctrs: np.ndarray) -> np.ndarray:
    """Element-wise uniforms: stream keys[i] at counter ctrs[i]."""
    k = keys.astype(np.uint64)
    z = ctrs.astype(np.uint64) * _U64_GOLD + k
    h = _mix64_arr(_mix64_arr(z) ^ (k * _U64_KEYC))
    return ((h >> np.uint64(11)).astype(np.float64) + 0.5) * _INV53


def replica_keys(seed: int, tag: int, n: int, start_index: int = 0) -> np.ndarray:
    """Keys for replicas start_index..start_index+n-1 (vectorized derive_key)."""
    idx = np.arange(start_index, start_index + n, dtype=np.uint64)
    s = np.uint64(seed & MASK64) ^ np.uint64((tag * _KEYC) & MASK64)
    k = _mix64_arr(np.full(n, s, dtype=np.uint64))
    return _mix64_arr(k ^ (idx * _U64_GOLD))


class Stream:
    """A sequential view of one counter-based stream.

    Mutable cursor over an immutable underlying stream; cheap to fork with
    :meth:`substream`.  Accepted anywhere the API takes an ``rng``.
    """

    __slots__ = ("key", "ctr")

    def __init__(self, key: int, ctr: int = 0):
        self.key = key & MASK64
        self.ctr = ctr

    @classmethod
    def from_seed(cls, seed: int, tag: int = TAG_MODEL, index: int = 0) -> "Stream":
        return cls(derive_key(seed, tag, index))

    def uniform(self) -> float:
        u = u01(self.key, self.ctr)
        self.ctr += 1
        return u

    def uniforms(self, n: int) -> np.ndarray:
        block = u01_block(self.key, self.ctr, n)
        self.ctr += n
        return block

    def substream(self, index: int) -> "Stream":
        return Stream(derive_key(self.key, TAG_SUBSTREAM, index))


def as_stream(rng) -> Stream:
    """Coerce an int seed or a Stream to a Stream."""
    if isinstance(rng, Stream):
        return rng
    if isinstance(rng, (int, np.integer)):
        return Stream.from_seed(int(rng))
    raise TypeError(f"expected Stream or int seed, got {type(rng).__name__}")
