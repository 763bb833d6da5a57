"""Numpy implementation of the time-stepping loop (used when the extension is absent)."""

import numpy as np

from .seqspace import second_difference


def step_levels(U, v1, S, lo, hi, c, dx, dt):
    K = U.shape[0] - 1
    J = U.shape[1] - 1
    c2 = c * c
    dx2 = dx * dx
    dt2 = dt * dt
    half_dt2 = dt2 / 2.0
    padded = np.zeros(J + 3)
    for k in range(1, K + 1):
        a_, b_ = int(lo[k]), int(hi[k])
        if b_ < a_:
            continue
        padded[1:-1] = U[k - 1]
        a = (-c2 * second_difference(padded[a_:b_ + 3])) / dx2
        if k == 1:
            U[1, a_:b_ + 1] = (U[0, a_:b_ + 1] + dt * v1[a_:b_ + 1]) - half_dt2 * a
        else:
            U[k, a_:b_ + 1] = (2.0 * U[k - 1, a_:b_ + 1] - U[k - 2, a_:b_ + 1]) + dt2 * (S[k - 1, a_:b_ + 1] - a)
