"""Counter-based random draws keyed by (seed, trial, domain, counter).

Every draw is a pure function of its key, so trials can run in any order or
in parallel and a prime's value never depends on which other primes were
drawn.  The mixer is the SplitMix64 finalizer, applied to the counter and
again after folding in the stream key.
"""

import numpy as np

from .errors import InvalidArgument

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1

RESIDUE_SIGNS = 0
IDEAL_SIGNS = 1
TAU_ANGLES = 2


def mix64(z):
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _u64(v, name):
    v = int(v)
    if not 0 <= v <= _MASK64:
        raise InvalidArgument(f"{name} must lie in [0, 2**64), got {v}")
    return np.uint64(v)


def stream_key(seed, trial, domain):
    """64-bit key for one (seed, trial, domain) stream."""
    with np.errstate(over="ignore"):
        k = mix64(np.array([_u64(seed, "seed")]) + _GAMMA)
        k = mix64(k ^ (np.array([_u64(trial, "trial")]) * _GAMMA + _GAMMA))
        k = mix64(k ^ (np.uint64(domain) + np.uint64(1)) * _M1)
    return k[0]


def draw(key, counters):
    """Uniform 64-bit words for the given counters of a stream."""
    c = np.asarray(counters, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(mix64((c + np.uint64(1)) * _GAMMA) ^ key)


def to_signs(words):
    """Top bit of each word as +1 / -1 (int8)."""
    return (1 - 2 * (words >> np.uint64(63)).astype(np.int8)).astype(np.int8)


def to_uniform(words):
    """Open-interval uniforms (k + 1/2) / 2**53 from the top 53 bits."""
    return ((words >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
