"""Grid and explicit three-point time stepping for the 1D wave equation.

Level ``k`` of the discrete solution is computed from

    u^0 = u0h
    u^1 = u^0 + dt u1h - (dt^2 / 2) A_h u^0
    u^k = 2 u^(k-1) - u^(k-2) + dt^2 (s^(k-1) - A_h u^(k-1)),   k >= 2

where ``A_h`` is the three-point operator of :func:`wavefd.seqspace.apply_Ah`.
The first-step formula is the centered first-step equation solved for
``u^1``. Values at the artificial indices ``-1`` and ``j_max + 1`` are
read as zero and never written.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .continuous import CauchyProblem, support_interval
from .errors import CFLViolation
from .kernels import get_kernel
from .seqspace import SupportSeq, second_difference


@dataclass(frozen=True)
class GridSpec:
    """Regular space-time grid over ``[x_min, x_max] x [0, t_max]``.

    ``zeta`` and ``xi`` are the CFL parameters: a grid is admissible when the
    Courant number ``c dt / dx`` lies in ``[zeta, 1 - xi]``.
    """

    x_min: float
    x_max: float
    t_max: float
    dx: float
    dt: float
    c: float = 1.0
    zeta: float = 0.3
    xi: float = 0.2

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError(f"need x_min < x_max, got ({self.x_min!r}, {self.x_max!r})")
        for name in ("t_max", "dx", "dt", "c"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)!r}")
        for name in ("zeta", "xi"):
            if not 0 < getattr(self, name) < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {getattr(self, name)!r}")
        if self.zeta > 1 - self.xi:
            raise ValueError(f"need zeta <= 1 - xi, got zeta={self.zeta!r}, xi={self.xi!r}")

    @property
    def j_max(self) -> int:
        return math.floor((self.x_max - self.x_min) / self.dx)

    @property
    def k_max(self) -> int:
        return math.floor(self.t_max / self.dt)

    @property
    def courant(self) -> float:
        return self.c * self.dt / self.dx

    @property
    def x(self) -> np.ndarray:
        return self.x_min + np.arange(self.j_max + 1) * self.dx

    def refined(self, factor: int) -> GridSpec:
        """Same domain with both steps divided by ``factor``."""
        return GridSpec(self.x_min, self.x_max, self.t_max, self.dx / factor, self.dt / factor,
                        self.c, self.zeta, self.xi)


def time_index(grid: GridSpec, t: float) -> int:
    """``floor(t / dt)`` clamped to ``[0, k_max]``."""
    if not 0 <= t <= grid.t_max:
        raise ValueError(f"t={t!r} outside [0, {grid.t_max!r}]")
    return min(max(math.floor(t / grid.dt), 0), grid.k_max)


def space_index(grid: GridSpec, x: float) -> int:
    """``floor((x - x_min) / dx)`` clamped to ``[0, j_max]``."""
    if not grid.x_min <= x <= grid.x_max:
        raise ValueError(f"x={x!r} outside [{grid.x_min!r}, {grid.x_max!r}]")
    return min(max(math.floor((x - grid.x_min) / grid.dx), 0), grid.j_max)


def check_cfl(grid: GridSpec) -> bool:
    r = grid.courant
    return grid.zeta <= r <= 1 - grid.xi


def cfl_message(grid: GridSpec) -> str:
    return (f"CFL condition zeta <= c*dt/dx <= 1 - xi violated: c*dt/dx = {grid.courant:.17g}, "
            f"required [{grid.zeta:.17g}, {1 - grid.xi:.17g}]")


def index_window(grid: GridSpec, a: float, b: float) -> tuple[int, int]:
    """Grid indices covering ``[a, b]``, intersected with ``0..j_max``."""
    lo = math.floor((a - grid.x_min) / grid.dx)
    hi = math.ceil((b - grid.x_min) / grid.dx)
    return max(lo, 0), min(hi, grid.j_max)


def _sample(f, grid: GridSpec, lo: int, hi: int) -> SupportSeq:
    if hi < lo:
        return SupportSeq.zero(max(lo, 0))
    xs = grid.x_min + np.arange(lo, hi + 1) * grid.dx
    return SupportSeq(np.broadcast_to(np.asarray(f(xs), dtype=np.float64), xs.shape), lo)


def sample_inputs(prob: CauchyProblem, grid: GridSpec):
    """Sample ``u0``, ``u1`` and ``s`` at the grid nodes.

    Each sample is taken only on the indices that can be nonzero according to
    the problem's support bounds.

    Returns:
        ``(u0h, u1h, sh)`` with ``sh[k]`` for ``k = 0..k_max``.
    """
    lo, hi = index_window(grid, prob.chi1, prob.chi2)
    u0h = _sample(prob.u0, grid, lo, hi)
    u1h = _sample(prob.u1, grid, lo, hi)
    sh = []
    for k in range(grid.k_max + 1):
        t = k * grid.dt
        slo, shi = index_window(grid, *support_interval(prob, t))
        sh.append(_sample(lambda x: prob.s(x, t), grid, slo, shi))
    return u0h, u1h, sh


def initial_bounds(*seqs: SupportSeq) -> tuple[int, int]:
    """Union of the windows of the initial data (empty -> ``(0, -1)``)."""
    nonempty = [s for s in seqs if not s.empty]
    if not nonempty:
        return 0, -1
    return min(s.lo for s in nonempty), max(s.hi for s in nonempty)


def support_cone(grid: GridSpec, u0h_bounds: tuple[int, int], k: int) -> tuple[int, int]:
    """Index window outside which level ``k`` must be exactly zero."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k!r}")
    lo, hi = u0h_bounds
    m = math.ceil(grid.courant)
    return lo - k * m, hi + k * m


@dataclass(frozen=True, eq=False)
class DiscreteSolution:
    """All levels ``u^0 .. u^k_max`` of a solve.

    ``array`` holds the dense ``(k_max + 1, j_max + 1)`` grid; ``windows[k]``
    bounds the entries of level ``k`` that may be nonzero.
    """

    grid: GridSpec
    array: np.ndarray
    windows: tuple = field(repr=False)

    @cached_property
    def levels(self) -> tuple:
        out = []
        for k, (lo, hi) in enumerate(self.windows):
            if hi < lo:
                out.append(SupportSeq.zero(max(lo, 0)))
            else:
                out.append(SupportSeq(self.array[k, lo:hi + 1], lo))
        return tuple(out)

    def level(self, k: int) -> SupportSeq:
        return self.levels[k]


def _dense(seq: SupportSeq, n: int) -> np.ndarray:
    return seq.window(0, n - 1)


def _clip_window(lo, hi, j_max):
    return max(lo, 0), min(hi, j_max)


def _union(*wins):
    wins = [w for w in wins if w[0] <= w[1]]
    if not wins:
        return 0, -1
    return min(w[0] for w in wins), max(w[1] for w in wins)


def _widen(w, n=1):
    return (w[0] - n, w[1] + n) if w[0] <= w[1] else w


def _seq_window(seq: SupportSeq, j_max: int):
    if seq.empty:
        return 0, -1
    return _clip_window(seq.lo, seq.hi, j_max)


def level_windows(grid: GridSpec, u0h: SupportSeq, u1h: SupportSeq, sh: Sequence[SupportSeq]):
    """Windows of the levels produced by the recurrence."""
    J = grid.j_max
    wins = [_seq_window(u0h, J)]
    if grid.k_max >= 1:
        wins.append(_clip_window(*_union(_widen(wins[0]), _seq_window(u1h, J)), J))
    for k in range(2, grid.k_max + 1):
        w = _union(_widen(wins[k - 1]), wins[k - 2], _seq_window(sh[k - 1], J))
        wins.append(_clip_window(*w, J) if w[0] <= w[1] else w)
    return [w if w[0] <= w[1] else (0, -1) for w in wins]


def _validate_sources(grid, sh):
    if len(sh) != grid.k_max + 1:
        raise ValueError(f"expected {grid.k_max + 1} source levels, got {len(sh)}")


def solve_unchecked(grid: GridSpec, u0h: SupportSeq, u1h: SupportSeq, sh: Sequence[SupportSeq],
                    backend: Optional[str] = None) -> DiscreteSolution:
    """Run the scheme without the CFL check (for instability demonstrations)."""
    _validate_sources(grid, sh)
    K, J = grid.k_max, grid.j_max
    wins = level_windows(grid, u0h, u1h, sh)
    U = np.zeros((K + 1, J + 1))
    U[0] = _dense(u0h, J + 1)
    S = np.zeros((K + 1, J + 1))
    for k, s in enumerate(sh):
        if not s.empty:
            S[k] = _dense(s, J + 1)
    lo = np.array([w[0] for w in wins], dtype=np.intp)
    hi = np.array([w[1] for w in wins], dtype=np.intp)
    with np.errstate(over="ignore", invalid="ignore"):
        get_kernel(backend)(U, _dense(u1h, J + 1), S, lo, hi, grid.c, grid.dx, grid.dt)
    U.flags.writeable = False
    return DiscreteSolution(grid, U, tuple(wins))


def solve(grid: GridSpec, u0h: SupportSeq, u1h: SupportSeq, sh: Sequence[SupportSeq],
          backend: Optional[str] = None) -> DiscreteSolution:
    """Run the three-point scheme on ``grid``.

    Raises:
        CFLViolation: if the Courant number is outside ``[zeta, 1 - xi]``.
        ValueError: if ``len(sh) != k_max + 1``.
    """
    if not check_cfl(grid):
        raise CFLViolation(cfl_message(grid))
    return solve_unchecked(grid, u0h, u1h, sh, backend)


def solve_rolling(grid: GridSpec, u0h: SupportSeq, u1h: SupportSeq, sh: Sequence[SupportSeq]):
    """Like :func:`solve` but keeps only two levels in memory.

    Returns:
        ``(u^(k_max - 1), u^k_max)`` as dense arrays over ``0..j_max``
        (``u^-1`` is reported as zeros when ``k_max == 0``).
    """
    if not check_cfl(grid):
        raise CFLViolation(cfl_message(grid))
    _validate_sources(grid, sh)
    K, J = grid.k_max, grid.j_max
    c2, dx2, dt2 = grid.c * grid.c, grid.dx * grid.dx, grid.dt * grid.dt
    prev = np.zeros(J + 1)
    cur = _dense(u0h, J + 1)
    padded = np.zeros(J + 3)
    for k in range(1, K + 1):
        padded[1:-1] = cur
        a = (-c2 * second_difference(padded)) / dx2
        if k == 1:
            nxt = (cur + grid.dt * _dense(u1h, J + 1)) - (dt2 / 2.0) * a
        else:
            nxt = (2.0 * cur - prev) + dt2 * (_dense(sh[k - 1], J + 1) - a)
        prev, cur = cur, nxt
    return prev, cur


def random_cone_source(grid: GridSpec, bounds: tuple[int, int], rng: np.random.Generator,
                       amplitude: float = 1.0) -> list:
    """Random source levels supported inside the cone of ``bounds``; level 0 is zero."""
    sh = [SupportSeq.zero()]
    for k in range(1, grid.k_max + 1):
        lo, hi = _clip_window(*support_cone(grid, bounds, k), grid.j_max)
        if hi < lo:
            sh.append(SupportSeq.zero())
        else:
            sh.append(SupportSeq(amplitude * rng.standard_normal(hi - lo + 1), lo))
    return sh
