# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo kernel; see ``_mckernel_py`` for the reference."""
from libc.math cimport ceil, cos, log, sin, sqrt
from libc.stdint cimport int64_t, uint64_t

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double TWO_PI = 6.283185307179586
cdef double TWO_M53 = 1.0 / 9007199254740992.0

MODE_JOINT = 0
MODE_INDEPENDENT = 1
DIST_GAUSSIAN = 0
DIST_TWO_POINT = 1


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = z ^ (z >> 30)
    z = z * 0xBF58476D1CE4E5B9ULL
    z = z ^ (z >> 27)
    z = z * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double unit(uint64_t w) noexcept nogil:
    return (<double>(w >> 11) + 0.5) * TWO_M53


cdef inline int odd_bin(double xi, double spacing) noexcept nogil:
    cdef int64_t m = <int64_t>ceil(xi / spacing - 0.5)
    return <int>(m & 1)


cdef inline void flips(uint64_t key, uint64_t q, uint64_t stream, int dist,
                       double a, double b, double spx, double spp,
                       int* fx, int* fp) noexcept nogil:
    cdef uint64_t c = (q * 3 + stream) * 2
    cdef double u1 = unit(mix64(key + (c + 1) * GOLDEN))
    cdef double u2 = unit(mix64(key + (c + 2) * GOLDEN))
    cdef double rad, ang
    if dist == 1:
        fx[0] = u1 < a
        fp[0] = u2 < b
        return
    rad = sqrt(-2.0 * log(u1))
    ang = TWO_PI * u2
    fx[0] = odd_bin(a * (rad * cos(ang)), spx)
    fp[0] = odd_bin(b * (rad * sin(ang)), spp)


cdef inline uint64_t trial_key(uint64_t seed_key, uint64_t t) noexcept nogil:
    return mix64(seed_key + (t + 1) * GOLDEN)


def count_failures(uint64_t seed, int64_t start, int64_t stop, int n, int k,
                   int mode, int dist, double a, double b, double spx, double spp):
    cdef uint64_t skey = mix64(seed)
    cdef uint64_t key
    cdef int64_t t, fails = 0
    cdef int q, cx, cz, fx, fp
    with nogil:
        for t in range(start, stop):
            key = trial_key(skey, <uint64_t>t)
            cx = 0
            cz = 0
            if mode == 0:
                for q in range(n):
                    flips(key, q, 0, dist, a, b, spx, spp, &fx, &fp)
                    cx += fx
                    cz += fp
            else:
                for q in range(n):
                    flips(key, q, 1, dist, a, b, spx, spp, &fx, &fp)
                    cx += fx & (1 - fp)
                    flips(key, q, 2, dist, a, b, spx, spp, &fx, &fp)
                    cz += fp & (1 - fx)
            if cx > k or (cz & 1):
                fails += 1
    return fails


def count_outcomes(uint64_t seed, int64_t start, int64_t stop, int dist,
                   double a, double b, double spx, double spp):
    cdef uint64_t skey = mix64(seed)
    cdef int64_t t
    cdef int64_t c0 = 0, c1 = 0, c2 = 0, c3 = 0
    cdef int fx, fp, idx
    with nogil:
        for t in range(start, stop):
            flips(trial_key(skey, <uint64_t>t), 0, 0, dist, a, b, spx, spp, &fx, &fp)
            idx = fx + 2 * fp
            if idx == 0:
                c0 += 1
            elif idx == 1:
                c1 += 1
            elif idx == 2:
                c2 += 1
            else:
                c3 += 1
    return (c0, c1, c2, c3)
