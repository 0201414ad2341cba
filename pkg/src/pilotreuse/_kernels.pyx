# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-trial rate kernel; same contract as ``_pykernels.trial_rates``."""
import numpy as np
from libc.math cimport log2, pow, rint


def trial_rates(home, interf, centers, period, period_inv, double gamma, bint power_control=False):
    cdef double[:, ::1] h = np.ascontiguousarray(home, dtype=np.float64)
    cdef double[:, :, ::1] u = np.ascontiguousarray(interf, dtype=np.float64)
    cdef double[:, ::1] c = np.ascontiguousarray(centers, dtype=np.float64)
    cdef double[:, ::1] P = np.ascontiguousarray(period, dtype=np.float64)
    cdef double[:, ::1] Pi = np.ascontiguousarray(period_inv, dtype=np.float64)
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t g = u.shape[1]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t t, j
    cdef int si, sj
    cdef double x, y, s0, s1, bx, by, ix, iy, d2, best, acc, h2, own2
    with nogil:
        for t in range(n):
            acc = 0.0
            for j in range(g):
                x = u[t, j, 0] + c[j, 0]
                y = u[t, j, 1] + c[j, 1]
                s0 = Pi[0, 0] * x + Pi[0, 1] * y
                s1 = Pi[1, 0] * x + Pi[1, 1] * y
                s0 = s0 - rint(s0)
                s1 = s1 - rint(s1)
                bx = P[0, 0] * s0 + P[0, 1] * s1
                by = P[1, 0] * s0 + P[1, 1] * s1
                best = 1e300
                for si in range(-1, 2):
                    for sj in range(-1, 2):
                        ix = bx + si * P[0, 0] + sj * P[0, 1]
                        iy = by + si * P[1, 0] + sj * P[1, 1]
                        d2 = ix * ix + iy * iy
                        if d2 < best:
                            best = d2
                if power_control:
                    own2 = u[t, j, 0] * u[t, j, 0] + u[t, j, 1] * u[t, j, 1]
                    acc = acc + pow(own2 / best, gamma)
                else:
                    acc = acc + pow(best, -gamma)
            if power_control:
                out[t] = log2(1.0 + 1.0 / acc)
            else:
                h2 = h[t, 0] * h[t, 0] + h[t, 1] * h[t, 1]
                out[t] = log2(1.0 + pow(h2, -gamma) / acc)
    return out_arr
