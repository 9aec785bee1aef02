"""Counter-based random numbers (Philox4x32-10).

Each standard-normal increment is a pure function of (seed, path, step): the
counter block is (step_lo, step_hi, path_lo, path_hi) and the key is the
64-bit seed split into two 32-bit words.  The same mapping is implemented in
the compiled kernel, so streams are identical for any path partitioning, and
reusing a seed reuses the increments exactly (common random numbers).

A normal is formed from the first two output words by the Box-Muller map
z = sqrt(-2 ln u1) * cos(2 pi u2) with u1 = (w0+1)*2^-32 in (0,1] and
u2 = w1*2^-32 in [0,1).
"""

from __future__ import annotations

import numpy as np

__all__ = ["philox4x32", "normal_increments"]

_M0 = np.uint32(0xD2511F53)
_M1 = np.uint32(0xCD9E8D57)
_W0 = np.uint32(0x9E3779B9)
_W1 = np.uint32(0xBB67AE85)
_LO = np.uint64(0xFFFFFFFF)
_TWO_NEG32 = 2.0 ** -32


def _mulhilo(a, b):
    prod = a.astype(np.uint64) * np.uint64(b)
    return (prod >> np.uint64(32)).astype(np.uint32), (prod & _LO).astype(np.uint32)


def philox4x32(c0, c1, c2, c3, k0, k1, rounds: int = 10):
    """Philox4x32 block cipher; counter words and key words as uint32 arrays."""
    c0 = np.asarray(c0, np.uint32)
    c1 = np.asarray(c1, np.uint32)
    c2 = np.asarray(c2, np.uint32)
    c3 = np.asarray(c3, np.uint32)
    c0, c1, c2, c3 = np.broadcast_arrays(c0, c1, c2, c3)
    k0 = np.uint32(k0)
    k1 = np.uint32(k1)
    for rnd in range(rounds):
        if rnd > 0:
            k0 = np.uint32((int(k0) + int(_W0)) & 0xFFFFFFFF)
            k1 = np.uint32((int(k1) + int(_W1)) & 0xFFFFFFFF)
        hi0, lo0 = _mulhilo(c0, _M0)
        hi1, lo1 = _mulhilo(c2, _M1)
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return c0, c1, c2, c3


def normal_increments(seed: int, paths, step: int) -> np.ndarray:
    """Standard normals for (seed, path ids, time step), vectorized over paths."""
    paths = np.asarray(paths, np.uint64)
    step = int(step)
    w0, w1, _, _ = philox4x32(
        np.uint32(step & 0xFFFFFFFF),
        np.uint32((step >> 32) & 0xFFFFFFFF),
        (paths & _LO).astype(np.uint32),
        (paths >> np.uint64(32)).astype(np.uint32),
        np.uint32(seed & 0xFFFFFFFF),
        np.uint32((seed >> 32) & 0xFFFFFFFF),
    )
    u1 = (w0.astype(np.float64) + 1.0) * _TWO_NEG32
    u2 = w1.astype(np.float64) * _TWO_NEG32
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
