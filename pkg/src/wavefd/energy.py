"""Discrete energy of a three-point solution and the bounds it satisfies.

The energy between levels ``k`` and ``k+1`` is

    E^(k+1/2) = 1/2 ||(u^(k+1) - u^k)/dt||^2 + 1/2 <A_h u^k, u^(k+1)>

with grid inner products weighted by ``dx``. For the homogeneous scheme it is
constant in ``k``; with a source it changes by ``1/2 <u^(k+1) - u^(k-1), s^k>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .scheme import DiscreteSolution, GridSpec
from .seqspace import SupportSeq, apply_Ah, dot_dx, norm_dx, seq_combine

RTOL = 1e-10


@dataclass(frozen=True)
class EnergyTrace:
    """``values[k]`` is the energy between levels ``k`` and ``k + 1``."""

    values: np.ndarray
    grid: GridSpec


def _check_k(sol: DiscreteSolution, k: int, lo: int) -> None:
    if not lo <= k <= sol.grid.k_max - 1:
        raise IndexError(f"energy index k={k} outside [{lo}, {sol.grid.k_max - 1}]")


def _velocity(sol: DiscreteSolution, k: int) -> SupportSeq:
    u = sol.levels
    return seq_combine(1.0 / sol.grid.dt, u[k + 1], -1.0 / sol.grid.dt, u[k])


def discrete_energy(sol: DiscreteSolution, k: int) -> float:
    _check_k(sol, k, 0)
    g = sol.grid
    u = sol.levels
    kinetic = norm_dx(_velocity(sol, k), g.dx) ** 2
    potential = dot_dx(apply_Ah(u[k], g.c, g.dx), u[k + 1], g.dx)
    return 0.5 * kinetic + 0.5 * potential


def energy_trace(sol: DiscreteSolution) -> EnergyTrace:
    vals = np.array([discrete_energy(sol, k) for k in range(sol.grid.k_max)])
    return EnergyTrace(vals, sol.grid)


def increment_scale(sol: DiscreteSolution, k: int) -> float:
    return 1.0 + abs(discrete_energy(sol, k)) + abs(discrete_energy(sol, k - 1))


def energy_increment_residual(sol: DiscreteSolution, sh: Sequence[SupportSeq], k: int) -> float:
    """Mismatch between the energy step and ``1/2 <u^(k+1) - u^(k-1), s^k>``.

    Zero in exact arithmetic; compare against ``RTOL * increment_scale``.
    """
    _check_k(sol, k, 1)
    u = sol.levels
    delta = discrete_energy(sol, k) - discrete_energy(sol, k - 1)
    work = 0.5 * dot_dx(seq_combine(1.0, u[k + 1], -1.0, u[k - 1]), sh[k], sol.grid.dx)
    return abs(delta - work)


def energy_lower_bound_gap(sol: DiscreteSolution, k: int) -> float:
    """``E^(k+1/2) - 1/2 (1 - r^2) ||(u^(k+1) - u^k)/dt||^2``; nonnegative under CFL."""
    _check_k(sol, k, 0)
    r = sol.grid.courant
    kinetic = norm_dx(_velocity(sol, k), sol.grid.dx) ** 2
    return discrete_energy(sol, k) - 0.5 * (1.0 - r * r) * kinetic


def stability_constant(xi: float) -> float:
    return math.sqrt(2.0) / (2.0 * math.sqrt(2.0 * xi - xi * xi))


def stability_bound_check(sol: DiscreteSolution, sh: Sequence[SupportSeq], t: float):
    """Both sides of the energy growth bound at time ``t``.

    With ``k = floor(t / dt) - 1``::

        sqrt(E^(k+1/2)) <= sqrt(E^(1/2)) + C(xi) dt sum_{j=1..k} ||s^j||

    Returns:
        ``(lhs, rhs)``.

    Raises:
        ValueError: if ``t`` is outside ``[dt, t_max]`` or an energy is
            negative (which only happens when the CFL condition fails).
    """
    g = sol.grid
    if not g.dt <= t <= g.t_max:
        raise ValueError(f"t={t!r} outside [{g.dt!r}, {g.t_max!r}]")
    k = min(math.floor(t / g.dt), g.k_max) - 1
    e_k = discrete_energy(sol, k)
    e_0 = discrete_energy(sol, 0)
    if e_k < 0 or e_0 < 0:
        raise ValueError(f"negative discrete energy ({e_0!r}, {e_k!r}); CFL condition violated?")
    forcing = sum(norm_dx(sh[j], g.dx) for j in range(1, k + 1))
    return math.sqrt(e_k), math.sqrt(e_0) + stability_constant(g.xi) * g.dt * forcing


def stability_trace(sol: DiscreteSolution, sh: Sequence[SupportSeq]):
    """Both sides of the growth bound at every grid time ``(k + 1) dt``.

    Cheaper than calling :func:`stability_bound_check` per time since the
    energies and source norms are accumulated once.
    """
    g = sol.grid
    energies = energy_trace(sol).values
    if np.any(energies < 0):
        raise ValueError("negative discrete energy; CFL condition violated?")
    norms = np.array([norm_dx(sh[j], g.dx) for j in range(1, g.k_max)])
    forcing = np.concatenate([[0.0], np.cumsum(norms)])
    lhs = np.sqrt(energies)
    rhs = math.sqrt(energies[0]) + stability_constant(g.xi) * g.dt * forcing[:len(energies)]
    return lhs, rhs
