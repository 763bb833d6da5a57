"""Convergence and truncation errors, refinement studies and support counts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .continuous import CauchyProblem, ExactSolution
from .errors import CFLViolation, InstabilityError
from .scheme import (
    DiscreteSolution,
    GridSpec,
    cfl_message,
    check_cfl,
    sample_inputs,
    solve,
    support_cone,
)
from .seqspace import SupportSeq, apply_Ah, norm_dx, seq_combine


class ErrorKind(str, Enum):
    CONVERGENCE = "convergence"
    TRUNCATION = "truncation"


@dataclass(frozen=True)
class ErrorField:
    """One sequence per time level.

    For truncation errors the paper-style index runs over ``-1..k_max-1``;
    ``levels[m]`` holds index ``m - 1``. That way ``levels[m]`` always lives in
    the same support cone as solution level ``m``.
    """

    levels: tuple
    grid: GridSpec
    kind: ErrorKind


def sample_exact(exact: ExactSolution, grid: GridSpec, k: int) -> SupportSeq:
    """``u(x_j, k dt)`` for every ``j`` in ``0..j_max``."""
    xs = grid.x
    vals = np.broadcast_to(np.asarray(exact.u(xs, k * grid.dt), dtype=np.float64), xs.shape)
    return SupportSeq(vals, 0)


def convergence_error(sol: DiscreteSolution, exact: ExactSolution) -> ErrorField:
    """``e^k = ubar^k - u^k`` with ``ubar`` the exact solution at the nodes."""
    g = sol.grid
    levels = tuple(seq_combine(1.0, sample_exact(exact, g, k), -1.0, sol.levels[k])
                   for k in range(g.k_max + 1))
    return ErrorField(levels, g, ErrorKind.CONVERGENCE)


def _restrict(seq: SupportSeq, grid: GridSpec) -> SupportSeq:
    return seq.restrict(0, grid.j_max)


def truncation_error(grid: GridSpec, exact: ExactSolution, prob: CauchyProblem,
                     inputs: Optional[tuple] = None) -> ErrorField:
    """Residual of the sampled exact solution in each scheme equation.

    ``levels[0]`` is the initial-position residual, ``levels[1]`` the
    first-step residual and ``levels[k]`` (``k >= 2``) the residual of the
    step producing level ``k``. ``inputs`` may pass the ``(u0h, u1h, sh)``
    triple used for the solve; otherwise the problem is sampled.
    """
    u0h, u1h, sh = inputs if inputs is not None else sample_inputs(prob, grid)
    c, dx, dt = grid.c, grid.dx, grid.dt
    ubar = [sample_exact(exact, grid, k) for k in range(grid.k_max + 1)]

    def A(v):
        return _restrict(apply_Ah(v, c, dx), grid)

    levels = [seq_combine(1.0, ubar[0], -1.0, u0h)]
    if grid.k_max >= 1:
        step = seq_combine(1.0 / dt, ubar[1], -1.0 / dt, ubar[0])
        resid = seq_combine(1.0, step, dt / 2.0, A(ubar[0]))
        levels.append(seq_combine(1.0, resid, -1.0, u1h))
    for k in range(2, grid.k_max + 1):
        second = seq_combine(1.0, seq_combine(1.0, ubar[k], -2.0, ubar[k - 1]), 1.0, ubar[k - 2])
        resid = seq_combine(1.0 / (dt * dt), second, 1.0, A(ubar[k - 1]))
        levels.append(seq_combine(1.0, resid, -1.0, sh[k - 1]))
    return ErrorField(tuple(levels), grid, ErrorKind.TRUNCATION)


def max_norm_over_time(field: ErrorField) -> float:
    """Largest ``dx``-norm over the stored levels (0 for an empty field)."""
    return max((norm_dx(level, field.grid.dx) for level in field.levels), default=0.0)


def error_scheme_inputs(conv: ErrorField, trunc: ErrorField):
    """Inputs under which the convergence error itself solves the scheme.

    Initial position zero, initial velocity ``e^1 / dt``, and source level
    ``m`` equal to the truncation residual of the step producing level
    ``m + 1`` (``trunc.levels[m + 1]``).
    """
    g = conv.grid
    u0 = SupportSeq.zero()
    if g.k_max >= 1:
        e1 = conv.levels[1]
        u1 = SupportSeq(e1.values / g.dt, e1.lo)
    else:
        u1 = SupportSeq.zero()
    sh = [trunc.levels[m + 1] for m in range(g.k_max)] + [SupportSeq.zero()]
    return u0, u1, sh


@dataclass(frozen=True)
class RefinementReport:
    """Per-level error norms and the fitted ``max_norm ~ C dx^order`` law.

    ``fitted_order`` and ``fitted_constant`` are NaN and ``degenerate`` is set
    when the norms cannot be fitted (for instance all zero).
    """

    rows: tuple
    fitted_order: float
    fitted_constant: float
    courant: float
    kind: ErrorKind
    degenerate: bool = False


def fit_order(dx: np.ndarray, norms: np.ndarray) -> tuple[float, float]:
    """Least-squares slope and ``exp(intercept)`` of ``log(norm)`` against ``log(dx)``."""
    slope, intercept = np.polyfit(np.log(dx), np.log(norms), 1)
    return float(slope), float(math.exp(intercept))


def refinement_study(prob: CauchyProblem, exact: ExactSolution, base: GridSpec, levels: int = 4,
                     kind: ErrorKind | str = ErrorKind.CONVERGENCE,
                     backend: Optional[str] = None) -> RefinementReport:
    """Halve ``dx`` and ``dt`` together ``levels - 1`` times and fit the error order.

    Raises:
        ValueError: if ``levels < 3``.
        CFLViolation: if ``base`` violates the CFL condition.
        InstabilityError: if any error norm is not finite.
    """
    kind = ErrorKind(kind)
    if levels < 3:
        raise ValueError(f"need at least 3 refinement levels, got {levels}")
    if not check_cfl(base):
        raise CFLViolation(cfl_message(base))
    rows = []
    for ell in range(levels):
        grid = base.refined(2 ** ell)
        if not check_cfl(grid):
            raise CFLViolation(cfl_message(grid))
        inputs = sample_inputs(prob, grid)
        if kind is ErrorKind.CONVERGENCE:
            field = convergence_error(solve(grid, *inputs, backend=backend), exact)
        else:
            field = truncation_error(grid, exact, prob, inputs)
        norm = max_norm_over_time(field)
        if not math.isfinite(norm):
            raise InstabilityError(f"non-finite {kind.value} error norm at level {ell}")
        rows.append((grid.dx, grid.dt, norm))
    dx = np.array([r[0] for r in rows])
    norms = np.array([r[2] for r in rows])
    if np.any(norms <= 0):
        return RefinementReport(tuple(rows), math.nan, math.nan, base.courant, kind, degenerate=True)
    order, const = fit_order(dx, norms)
    return RefinementReport(tuple(rows), order, const, base.courant, kind)


def nonzero_counts(levels) -> np.ndarray:
    return np.array([lvl.count_nonzero() for lvl in levels], dtype=np.int64)


def nonzero_count_bound(grid: GridSpec, prob: CauchyProblem, field: ErrorField) -> tuple[float, float]:
    """``(N dx^2, chi2 - chi1 + 2 t_max c + 2 c t_max / zeta)``.

    ``N`` is the largest number of exactly nonzero entries in one level.
    """
    n = int(nonzero_counts(field.levels).max(initial=0))
    lhs = n * grid.dx * grid.dx
    rhs = (prob.chi2 - prob.chi1) + 2.0 * grid.t_max * grid.c + 2.0 * grid.c * grid.t_max / grid.zeta
    return lhs, rhs


def cone_violations(levels, grid: GridSpec, bounds: tuple[int, int]) -> np.ndarray:
    """Per level, the count of nonzero entries outside the predicted cone."""
    out = np.zeros(len(levels), dtype=np.int64)
    for k, lvl in enumerate(levels):
        lo, hi = support_cone(grid, bounds, k)
        if lvl.empty:
            continue
        idx = lvl.lo + np.flatnonzero(lvl.values != 0.0)
        out[k] = int(np.count_nonzero((idx < lo) | (idx > hi)))
    return out
