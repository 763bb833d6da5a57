"""Acceptance criteria 1-11.

Each test prints one ``PASS``/``FAIL`` line for its criterion, then asserts.
Run with ``pytest tests/test_acceptance.py -v`` to see the report.
"""

import time
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np
import pytest

from helpers import dense_sources, naive_solve, random_instance
from wavefd import cli, kernels
from wavefd.analysis import (
    cone_violations,
    convergence_error,
    error_scheme_inputs,
    nonzero_count_bound,
    refinement_study,
    truncation_error,
)
from wavefd.continuous import dalembert_eval, traveling_bump_problem
from wavefd.energy import (
    RTOL,
    energy_increment_residual,
    energy_lower_bound_gap,
    energy_trace,
    increment_scale,
    stability_trace,
)
from wavefd.scheme import GridSpec, check_cfl, initial_bounds, sample_inputs, solve, solve_unchecked
from wavefd.seqspace import SupportSeq

N_RANDOM = 100


def base_grid():
    return GridSpec(-4.0, 4.0, 2.0, 0.1, 0.05, 1.0, zeta=0.3, xi=0.2)


def bump():
    return traveling_bump_problem(center=0.0, half_width=1.0, p=6, c=1.0)


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n:>2}: {detail}")
        assert ok, detail
    return emit


@dataclass
class Run:
    label: str
    grid: GridSpec
    u0h: SupportSeq
    u1h: SupportSeq
    sh: list
    sol: Any
    prob: Optional[Any] = None
    exact: Optional[Any] = None


def _bump_run(label, grid):
    prob, exact = bump()
    inputs = sample_inputs(prob, grid)
    return Run(label, grid, *inputs, solve(grid, *inputs), prob, exact)


def _random_run(label, seed):
    grid, u0, u1, sh = random_instance(np.random.default_rng(seed))
    return Run(label, grid, u0, u1, sh, solve(grid, u0, u1, sh))


@pytest.fixture(scope="module")
def suite():
    """Every CFL-satisfying run used by the acceptance criteria."""
    runs = {"long": _bump_run("bump 500 steps", long_grid())}
    for ell in range(4):
        runs[f"family{ell}"] = _bump_run(f"family level {ell}", base_grid().refined(2 ** ell))
    for i in range(N_RANDOM):
        runs[f"incr{i}"] = _random_run(f"increment seed {i}", 10_000 + i)
        runs[f"stab{i}"] = _random_run(f"stability seed {i}", 20_000 + i)
    for i, grid in enumerate(small_error_grids()):
        runs[f"small{i}"] = _bump_run(f"small grid {i}", grid)
    assert all(check_cfl(r.grid) for r in runs.values())
    return runs


def long_grid():
    return GridSpec(-3.0, 6.0, 3.90625, 1 / 64, 1 / 128, 1.0, zeta=0.3, xi=0.2)


def small_error_grids():
    rng = np.random.default_rng(909)
    grids = []
    while len(grids) < 20:
        dx = float(rng.uniform(0.15, 0.35))
        r = float(rng.uniform(0.3, 0.8))
        j_max, k_max = int(rng.integers(12, 31)), int(rng.integers(8, 31))
        x_min = -1.5 - float(rng.uniform(0, 1.0))
        grids.append(GridSpec(x_min, x_min + (j_max + 0.5) * dx, (k_max + 0.5) * r * dx, dx, r * dx, 1.0))
    return grids


def test_criterion_01_convergence_order(report):
    prob, exact = bump()
    start = time.perf_counter()
    rep = refinement_study(prob, exact, base_grid(), 4, "convergence")
    elapsed = time.perf_counter() - start
    ok = 1.8 <= rep.fitted_order <= 2.2 and elapsed < 30.0 and len(rep.rows) == 4
    report(1, ok, f"convergence fitted_order={rep.fitted_order:.4f} in [1.8, 2.2], runtime {elapsed:.2f}s < 30s")


def test_criterion_02_consistency_order(report):
    prob, exact = bump()
    start = time.perf_counter()
    rep = refinement_study(prob, exact, base_grid(), 4, "truncation")
    elapsed = time.perf_counter() - start
    ok = 1.8 <= rep.fitted_order <= 2.2 and elapsed < 30.0 and len(rep.rows) == 4
    report(2, ok, f"consistency fitted_order={rep.fitted_order:.4f} in [1.8, 2.2], runtime {elapsed:.2f}s < 30s")


def test_criterion_03_energy_conservation(report, suite):
    run = suite["long"]
    steps = run.grid.k_max
    e = energy_trace(run.sol).values
    drift = float(np.max(np.abs(e - e[0])))
    limit = RTOL * 500 * (1 + abs(e[0]))
    ok = steps == 500 and drift <= limit
    report(3, ok, f"{steps} steps, max |E - E_half| = {drift:.3e} <= {limit:.3e}")


def test_criterion_04_increment_identity(report, suite):
    failures = worst = 0
    checked = 0
    for i in range(N_RANDOM):
        run = suite[f"incr{i}"]
        for k in range(1, run.grid.k_max):
            ratio = energy_increment_residual(run.sol, run.sh, k) / increment_scale(run.sol, k)
            worst = max(worst, ratio)
            failures += ratio > RTOL
            checked += 1
    report(4, failures == 0,
           f"{N_RANDOM} sourced instances, {checked} steps, {failures} failures, worst residual/scale = {worst:.3e}")


def test_criterion_05_energy_lower_bound(report, suite):
    failures = checked = 0
    worst = np.inf
    for run in suite.values():
        e = energy_trace(run.sol).values
        for k in range(run.grid.k_max):
            gap = energy_lower_bound_gap(run.sol, k)
            scale = 1 + abs(e[k])
            worst = min(worst, gap / scale)
            failures += gap < -RTOL * scale or e[k] < -RTOL * scale
            checked += 1
    report(5, failures == 0,
           f"{len(suite)} runs, {checked} steps, {failures} failures, min gap/scale = {worst:.3e}")


def test_criterion_06_stability_bound(report, suite):
    failures = checked = 0
    worst = -np.inf
    for i in range(N_RANDOM):
        run = suite[f"stab{i}"]
        lhs, rhs = stability_trace(run.sol, run.sh)
        excess = (lhs - rhs) / (1 + lhs + rhs)
        worst = max(worst, float(np.max(excess)))
        failures += int(np.sum(excess > RTOL))
        checked += lhs.size
    report(6, failures == 0,
           f"{N_RANDOM} sourced instances, {checked} grid times, {failures} failures, "
           f"max (lhs - rhs)/scale = {worst:.3e}")


def test_criterion_07_support_cone(report, suite):
    violations = fields = 0
    for run in suite.values():
        bounds = initial_bounds(run.u0h, run.u1h)
        level_sets = [run.sol.levels]
        if run.exact is not None:
            level_sets.append(truncation_error(run.grid, run.exact, run.prob, (run.u0h, run.u1h, run.sh)).levels)
            level_sets.append(convergence_error(run.sol, run.exact).levels)
        for levels in level_sets:
            violations += int(cone_violations(levels, run.grid, bounds).sum())
            fields += 1
    report(7, violations == 0, f"{len(suite)} runs, {fields} fields, {violations} nonzeros outside the cone")


def test_criterion_08_nonzero_count_bound(report, suite):
    worst, rhs_seen, ok = 0.0, None, True
    for ell in range(4):
        run = suite[f"family{ell}"]
        for field in (truncation_error(run.grid, run.exact, run.prob, (run.u0h, run.u1h, run.sh)),
                      convergence_error(run.sol, run.exact)):
            lhs, rhs = nonzero_count_bound(run.grid, run.prob, field)
            ok &= lhs <= rhs
            worst, rhs_seen = max(worst, lhs), rhs
    report(8, ok, f"4-level family, max count*dx^2 = {worst:.4g} <= {rhs_seen:.4g}")


def test_criterion_09_error_scheme(report, suite):
    worst, ok = 0.0, True
    for i in range(len(small_error_grids())):
        run = suite[f"small{i}"]
        ok &= run.grid.j_max <= 30 and run.grid.k_max <= 30
        conv = convergence_error(run.sol, run.exact)
        trunc = truncation_error(run.grid, run.exact, run.prob, (run.u0h, run.u1h, run.sh))
        again = solve(run.grid, *error_scheme_inputs(conv, trunc)).array
        direct = np.array([lvl.window(0, run.grid.j_max) for lvl in conv.levels])
        rel = float(np.max(np.abs(again - direct)) / np.max(np.abs(direct)))
        worst = max(worst, rel)
    ok &= worst <= 1e-9
    report(9, ok, f"20 grids with j_max, k_max <= 30, max relative difference {worst:.3e} <= 1e-9")


def test_criterion_10_oracles(report):
    mismatches = 0
    backends = sorted(kernels.BACKENDS)
    for seed in range(40):
        grid, u0, u1, sh = random_instance(np.random.default_rng(30_000 + seed), j_range=(3, 20), k_range=(2, 20))
        ref = naive_solve(list(u0.window(0, grid.j_max)), list(u1.window(0, grid.j_max)),
                          dense_sources(sh, grid.j_max), grid.c, grid.dx, grid.dt, grid.j_max, grid.k_max)
        for b in backends:
            mismatches += not np.array_equal(solve(grid, u0, u1, sh, backend=b).array, ref)
    tol = 1e-9
    prob, exact = traveling_bump_problem(0.2, 0.8, 6, 1.3)
    rng = np.random.default_rng(31_337)
    err = max(abs(dalembert_eval(prob, x, t, tol) - float(exact.u(x, t)))
              for x, t in zip(rng.uniform(-4.0, 5.0, 100), rng.uniform(0.0, 2.5, 100)))
    ok = mismatches == 0 and err <= 10 * tol
    report(10, ok, f"40 grids <= 20x20 on backends {backends}: {mismatches} bitwise mismatches; "
                   f"d'Alembert max error {err:.2e} <= {10 * tol:.0e} at 100 points")


def test_criterion_11_cfl_necessity(report, tmp_path, capsys):
    dx = 0.25
    dt = 1.1 * dx
    grid = GridSpec(0.0, 60.0, 220 * dt, dx, dt, 1.0, zeta=0.3, xi=0.2)
    zeros = [SupportSeq.zero() for _ in range(grid.k_max + 1)]
    sol = solve_unchecked(grid, SupportSeq.delta(120), SupportSeq.zero(), zeros)
    with np.errstate(all="ignore"):
        e = energy_trace(sol).values
    peak = float(np.max(np.abs(e)))
    grew = grid.k_max >= 200 and peak > 1e3 * (1 + abs(e[0]))
    status = cli.main(["cfl-demo", "--out", str(tmp_path / "demo.csv")])
    err = capsys.readouterr().err
    cli_ok = status == cli.EXIT_UNSTABLE and "instability detected" in err
    report(11, grew and cli_ok,
           f"r=1.1, {grid.k_max} steps, max|E| = {peak:.3e} > {1e3 * (1 + abs(e[0])):.3e}; "
           f"CLI cfl-demo exit {status} (instability = {cli.EXIT_UNSTABLE})")
