"""Continuous Cauchy problem for ``u_tt - c^2 u_xx = s`` and its exact solutions.

Two independent ways of getting the exact solution are provided: the closed
form of the manufactured traveling bump, and direct quadrature of
d'Alembert's formula for arbitrary data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .quadrature import DEFAULT_BUDGET, adaptive_simpson

Func1 = Callable[[float], float]
Func2 = Callable[[float, float], float]


def zero_data(x):
    return np.zeros_like(np.asarray(x, dtype=np.float64))


def zero_source(x, t):
    return np.zeros(np.broadcast(np.asarray(x), np.asarray(t)).shape)


@dataclass(frozen=True)
class CauchyProblem:
    """Initial position ``u0``, velocity ``u1`` and source ``s`` for speed ``c``.

    ``u0`` and ``u1`` vanish outside ``[chi1, chi2]``; ``s(x, t)`` vanishes
    outside ``[chi1 - c t, chi2 + c t]`` and at ``t = 0``. All callables must
    accept numpy arrays and return exact zeros outside their support.
    """

    u0: Func1
    u1: Func1
    s: Func2
    c: float
    chi1: float
    chi2: float

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"c must be > 0, got {self.c!r}")
        if not self.chi1 < self.chi2:
            raise ValueError(f"need chi1 < chi2, got ({self.chi1!r}, {self.chi2!r})")


@dataclass(frozen=True)
class ExactSolution:
    """Continuous solution ``u(x, t)``.

    ``u_t`` and ``u_x`` are optional analytic first derivatives; when they
    are missing callers fall back to finite differences.
    """

    u: Func2
    regularity_order: int
    u_t: Optional[Func2] = None
    u_x: Optional[Func2] = None


def zero_problem(c: float = 1.0, chi1: float = -1.0, chi2: float = 1.0):
    """The all-zero problem and its (zero) solution."""
    prob = CauchyProblem(zero_data, zero_data, zero_source, c, chi1, chi2)
    return prob, ExactSolution(zero_source, regularity_order=10**9, u_t=zero_source, u_x=zero_source)


def traveling_bump_problem(center: float = 0.0, half_width: float = 1.0, p: int = 6, c: float = 1.0):
    """Right-traveling polynomial bump ``u(x, t) = (1 - y^2)^p``, ``y = (x - c t - center)/half_width``.

    The bump is ``C^(p-1)``; ``p >= 5`` is required so the scheme's
    second-order error terms are bounded.

    Returns:
        ``(CauchyProblem, ExactSolution)`` with zero source.
    """
    if int(p) != p or p < 5:
        raise ValueError(f"bump exponent p must be an integer >= 5, got {p!r}")
    if not half_width > 0:
        raise ValueError(f"half_width must be > 0, got {half_width!r}")
    if not c > 0:
        raise ValueError(f"c must be > 0, got {c!r}")
    p = int(p)

    def shape(x):
        y = (np.asarray(x, dtype=np.float64) - center) / half_width
        inside = np.abs(y) < 1.0
        w = np.where(inside, 1.0 - y * y, 0.0)
        return w ** p

    def dshape(x):
        y = (np.asarray(x, dtype=np.float64) - center) / half_width
        inside = np.abs(y) < 1.0
        w = np.where(inside, 1.0 - y * y, 0.0)
        return np.where(inside, -2.0 * p * y * w ** (p - 1) / half_width, 0.0)

    def u1(x):
        return -c * dshape(x)

    def u(x, t):
        return shape(np.asarray(x, dtype=np.float64) - c * np.asarray(t, dtype=np.float64))

    def u_x(x, t):
        return dshape(np.asarray(x, dtype=np.float64) - c * np.asarray(t, dtype=np.float64))

    def u_t(x, t):
        return -c * u_x(x, t)

    prob = CauchyProblem(shape, u1, zero_source, c, center - half_width, center + half_width)
    return prob, ExactSolution(u, regularity_order=p - 1, u_t=u_t, u_x=u_x)


def support_interval(prob: CauchyProblem, t: float) -> tuple[float, float]:
    """Interval outside which the solution at time ``t`` is zero."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    return prob.chi1 - prob.c * t, prob.chi2 + prob.c * t


def _clip(a, b, lo, hi):
    return max(a, lo), min(b, hi)


def dalembert_eval(prob: CauchyProblem, x: float, t: float, tol: float = 1e-9,
                   budget: int = DEFAULT_BUDGET) -> float:
    """Evaluate the solution at ``(x, t)`` by quadrature of d'Alembert's formula.

    Integrals are clipped to the supports of ``u1`` and ``s`` first. The
    inner integral of the source term runs at ``tol / (10 max(t, 1))``.

    Raises:
        ValueError: for ``t < 0`` or ``tol <= 0``.
        QuadratureError: if a quadrature exceeds ``budget`` intervals.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol!r}")
    c = prob.c
    value = 0.5 * (float(prob.u0(x - c * t)) + float(prob.u0(x + c * t)))
    if t == 0:
        return value

    a, b = _clip(x - c * t, x + c * t, prob.chi1, prob.chi2)
    if a < b:
        value += adaptive_simpson(prob.u1, a, b, tol, budget) / (2.0 * c)

    inner_tol = tol / (10.0 * max(t, 1.0))

    def inner(sigma):
        lo, hi = support_interval(prob, sigma)
        ya, yb = _clip(x - c * (t - sigma), x + c * (t - sigma), lo, hi)
        if ya >= yb:
            return 0.0
        return adaptive_simpson(lambda y: prob.s(y, sigma), ya, yb, inner_tol, budget)

    value += adaptive_simpson(inner, 0.0, t, tol, budget) / (2.0 * c)
    return value


def continuous_energy(sol: ExactSolution, prob: CauchyProblem, t: float, h: float = 1e-5,
                      tol: float = 1e-9) -> float:
    """Mechanical energy ``1/2 int u_t^2 + 1/2 c^2 int u_x^2`` at time ``t``.

    Derivatives are centered differences of step ``h`` (so ``sol.u`` must
    accept ``t - h``); the potential term uses the integrated-by-parts form.
    Diagnostic accuracy only.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    if not h > 0:
        raise ValueError(f"h must be > 0, got {h!r}")
    c = prob.c
    a, b = support_interval(prob, t + h)
    a, b = a - h, b + h

    def dens(x):
        ut = (float(sol.u(x, t + h)) - float(sol.u(x, t - h))) / (2.0 * h)
        ux = (float(sol.u(x + h, t)) - float(sol.u(x - h, t))) / (2.0 * h)
        return 0.5 * ut * ut + 0.5 * c * c * ux * ux

    return adaptive_simpson(dens, a, b, tol)
