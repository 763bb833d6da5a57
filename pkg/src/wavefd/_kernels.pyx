# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled time-stepping loop for the three-point scheme.

Operation order matches ``wavefd._kernels_py`` exactly; the extension is
built with ``-ffp-contract=off`` so no multiply-add gets fused.
"""

import numpy as np


def step_levels(double[:, ::1] U, const double[::1] v1, const double[:, ::1] S,
                const Py_ssize_t[::1] lo, const Py_ssize_t[::1] hi,
                double c, double dx, double dt):
    cdef Py_ssize_t K = U.shape[0] - 1
    cdef Py_ssize_t J = U.shape[1] - 1
    cdef Py_ssize_t k, j
    cdef double c2 = c * c
    cdef double dx2 = dx * dx
    cdef double dt2 = dt * dt
    cdef double half_dt2 = dt2 / 2.0
    cdef double left, right, lap, a
    if K < 1:
        return
    with nogil:
        for j in range(lo[1], hi[1] + 1):
            left = U[0, j - 1] if j > 0 else 0.0
            right = U[0, j + 1] if j < J else 0.0
            lap = (right - 2.0 * U[0, j]) + left
            a = (-c2 * lap) / dx2
            U[1, j] = (U[0, j] + dt * v1[j]) - half_dt2 * a
        for k in range(2, K + 1):
            for j in range(lo[k], hi[k] + 1):
                left = U[k - 1, j - 1] if j > 0 else 0.0
                right = U[k - 1, j + 1] if j < J else 0.0
                lap = (right - 2.0 * U[k - 1, j]) + left
                a = (-c2 * lap) / dx2
                U[k, j] = (2.0 * U[k - 1, j] - U[k - 2, j]) + dt2 * (S[k - 1, j] - a)
