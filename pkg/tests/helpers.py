"""Reference implementations and random instance generators shared by the tests."""

import numpy as np

from wavefd.scheme import GridSpec, initial_bounds, random_cone_source
from wavefd.seqspace import SupportSeq


def naive_solve(u0, u1, s, c, dx, dt, j_max, k_max):
    """Scalar triple loop over the scheme equations, on plain Python lists.

    ``u0``/``u1`` are lists over ``0..j_max``, ``s[k][j]`` over levels
    ``0..k_max``. Indices -1 and j_max + 1 read as zero.
    """
    u = [[0.0] * (j_max + 1) for _ in range(k_max + 1)]

    def v(k, j):
        if j < 0 or j > j_max:
            return 0.0
        return u[k][j]

    def Ah(k, j):
        return -c * c * (v(k, j + 1) - 2 * v(k, j) + v(k, j - 1)) / (dx * dx)

    for j in range(j_max + 1):
        u[0][j] = u0[j]
    if k_max >= 1:
        for j in range(j_max + 1):
            u[1][j] = u0[j] + dt * u1[j] - (dt * dt / 2) * Ah(0, j)
    for k in range(2, k_max + 1):
        for j in range(j_max + 1):
            u[k][j] = 2 * u[k - 1][j] - u[k - 2][j] + dt * dt * (s[k - 1][j] - Ah(k - 1, j))
    return np.array(u)


def random_grid(rng, zeta=0.1, xi=0.05, j_range=(12, 40), k_range=(10, 40), courant=None):
    j_max = int(rng.integers(*j_range))
    k_max = int(rng.integers(*k_range))
    dx = float(rng.uniform(0.05, 0.5))
    c = float(rng.uniform(0.5, 2.0))
    r = float(rng.uniform(zeta, 1 - xi)) if courant is None else courant
    dt = r * dx / c
    # pad the extents by half a step so the floors land on j_max / k_max
    return GridSpec(0.0, (j_max + 0.5) * dx, (k_max + 0.5) * dt, dx, dt, c, zeta, xi)


def random_data(rng, grid, width=None):
    """Random initial position/velocity on a random window inside the grid."""
    J = grid.j_max
    width = width or int(rng.integers(1, max(2, J // 3)))
    lo = int(rng.integers(0, J - width + 1))
    hi = lo + width - 1
    u0 = SupportSeq(rng.standard_normal(width), lo)
    u1 = SupportSeq(rng.standard_normal(width), lo)
    return u0, u1


def random_instance(rng, sourced=True, **grid_kw):
    grid = random_grid(rng, **grid_kw)
    u0, u1 = random_data(rng, grid)
    if sourced:
        sh = random_cone_source(grid, initial_bounds(u0, u1), rng, float(rng.uniform(0.1, 3.0)))
    else:
        sh = [SupportSeq.zero() for _ in range(grid.k_max + 1)]
    return grid, u0, u1, sh


def dense_sources(sh, j_max):
    return [list(s.window(0, j_max)) for s in sh]
