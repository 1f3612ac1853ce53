"""Fixed integer hashing for reproducible randomness.

Everything that needs a random-looking but platform-independent value is
derived from 64-bit splitmix-style mixing, never from a global RNG. The
scalar helpers here work on Python ints; vectorized lattice hashing lives
in :mod:`seqcore.noise`.
"""

import hashlib
import json

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One splitmix64 finalizer round on a 64-bit integer."""
    x = (x + _GOLDEN) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return (x ^ (x >> 31)) & _MASK


def hash_u64(*parts: int) -> int:
    """Mix any number of integers into one 64-bit value."""
    h = 0x5851F42D4C957F2D
    for p in parts:
        h = splitmix64((h ^ (p & _MASK)) & _MASK)
    return h


def hash_unit(*parts: int) -> float:
    """Hash to a float strictly inside (0, 1)."""
    h = hash_u64(*parts)
    return ((h >> 11) + 0.5) * 2.0 ** -53


def derive_seed(seed: int, *parts: int) -> int:
    """Derive an independent substream seed from a base seed and labels."""
    return hash_u64(seed, *parts)


def stable_digest(obj) -> str:
    """Hex sha256 of an object's canonical JSON form (sorted keys)."""
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def file_digest(path) -> str:
    """Hex sha256 of a file's bytes."""
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()
