"""Numpy implementation of the Monte Carlo kernel.

Mirrors ``_mckernel.pyx`` operation for operation so both backends draw the
same samples.  Every random word is a pure function of
``(seed, trial, qubit, stream, j)`` (SplitMix64 used as a counter-based
generator), which makes results independent of chunking and worker count.
"""
import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
M1 = np.uint64(0xBF58476D1CE4E5B9)
M2 = np.uint64(0x94D049BB133111EB)
TWO_PI = 6.283185307179586
TWO_M53 = 1.0 / 9007199254740992.0

MODE_JOINT = 0
MODE_INDEPENDENT = 1
DIST_GAUSSIAN = 0
DIST_TWO_POINT = 1

CHUNK = 1 << 16

_S11, _S27, _S30, _S31 = (np.uint64(s) for s in (11, 27, 30, 31))
_ONE = np.uint64(1)


def mix64(z):
    z = z ^ (z >> _S30)
    z = z * M1
    z = z ^ (z >> _S27)
    z = z * M2
    return z ^ (z >> _S31)


def _seed_key(seed):
    return mix64(np.array([seed], dtype=np.uint64))[0]


def _unit(w):
    return ((w >> _S11).astype(np.float64) + 0.5) * TWO_M53


def _flips(keys, qubits, stream, dist, a, b, spx, spp):
    """x- and p-flip indicators, shape ``keys.shape + (qubits,)``."""
    c = (np.arange(qubits, dtype=np.uint64) * np.uint64(3) + np.uint64(stream)) * np.uint64(2)
    k = keys[:, None]
    u1 = _unit(mix64(k + (c + _ONE) * GOLDEN))
    u2 = _unit(mix64(k + (c + np.uint64(2)) * GOLDEN))
    if dist == DIST_TWO_POINT:
        return u1 < a, u2 < b
    rad = np.sqrt(-2.0 * np.log(u1))
    ang = TWO_PI * u2
    xi_x = a * (rad * np.cos(ang))
    xi_p = b * (rad * np.sin(ang))
    mx = np.ceil(xi_x / spx - 0.5).astype(np.int64)
    mp = np.ceil(xi_p / spp - 0.5).astype(np.int64)
    return (mx & 1) == 1, (mp & 1) == 1


def _trial_keys(seed, start, stop):
    t = np.arange(start, stop, dtype=np.uint64)
    return mix64(_seed_key(seed) + (t + _ONE) * GOLDEN)


def count_failures(seed, start, stop, n, k, mode, dist, a, b, spx, spp):
    """Number of logical failures among trials ``start..stop-1``."""
    fails = 0
    for lo in range(start, stop, CHUNK):
        keys = _trial_keys(seed, lo, min(lo + CHUNK, stop))
        if mode == MODE_JOINT:
            fx, fp = _flips(keys, n, 0, dist, a, b, spx, spp)
            bad = (fx.sum(axis=1) > k) | (fp.sum(axis=1) % 2 == 1)
        else:
            fx, fp = _flips(keys, n, 1, dist, a, b, spx, spp)
            cx = (fx & ~fp).sum(axis=1)
            fx, fp = _flips(keys, n, 2, dist, a, b, spx, spp)
            cz = (fp & ~fx).sum(axis=1)
            bad = (cx > k) | (cz % 2 == 1)
        fails += int(bad.sum())
    return fails


def count_outcomes(seed, start, stop, dist, a, b, spx, spp):
    """Counts of single-qubit outcomes ``(I, X, Z, Y)``."""
    counts = np.zeros(4, dtype=np.int64)
    for lo in range(start, stop, CHUNK):
        keys = _trial_keys(seed, lo, min(lo + CHUNK, stop))
        fx, fp = _flips(keys, 1, 0, dist, a, b, spx, spp)
        idx = fx[:, 0].astype(np.int64) + 2 * fp[:, 0].astype(np.int64)
        counts += np.bincount(idx, minlength=4)
    return tuple(int(c) for c in counts)
