"""Command-line driver: ``wavefd <experiment> [--config FILE] [--out FILE]``.

Configuration files hold one ``key = value`` per line; ``#`` starts a
comment. Every experiment writes a CSV whose leading ``#`` lines describe the
run. Exit codes: 0 success, 2 invalid configuration, 3 CFL rejection,
4 instability detected, 5 property check failed.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from . import analysis, energy, scheme
from .continuous import traveling_bump_problem, zero_problem
from .errors import CFLViolation, ConfigError, InstabilityError
from .seqspace import seq_combine

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CFL = 3
EXIT_UNSTABLE = 4
EXIT_CHECK_FAILED = 5

EXPERIMENTS = ("solve", "converge", "consist", "energy", "stability", "cfl-demo", "cone-check")
PROBLEM_TYPES = ("traveling_bump", "zero")

BLOWUP_FACTOR = 1e3


def _positive(v):
    return None if v > 0 else "must be > 0"


def _nonnegative(v):
    return None if v >= 0 else "must be >= 0"


def _unit_open(v):
    return None if 0 < v < 1 else "must lie in (0, 1)"


def _choice(options):
    def check(v):
        return None if v in options else f"must be one of {', '.join(options)}"
    return check


@dataclass(frozen=True)
class Key:
    type: Callable[[str], Any]
    default: Any
    help: str
    check: Optional[Callable[[Any], Optional[str]]] = None


KEYS = {
    "problem.type": Key(str, "traveling_bump", "problem family: traveling_bump or zero", _choice(PROBLEM_TYPES)),
    "problem.center": Key(float, 0.0, "bump center at t = 0"),
    "problem.half_width": Key(float, 1.0, "bump half width (support is center +- half_width)", _positive),
    "problem.p": Key(int, 6, "bump exponent, >= 5", lambda v: None if v >= 5 else "must be >= 5"),
    "problem.c": Key(float, 1.0, "propagation speed", _positive),
    "problem.source_amplitude": Key(float, 0.0, "std of a random source inside the support cone (energy, stability)",
                                    _nonnegative),
    "grid.x_min": Key(float, -4.0, "left end of the spatial domain"),
    "grid.x_max": Key(float, 4.0, "right end of the spatial domain"),
    "grid.t_max": Key(float, 2.0, "final time", _positive),
    "grid.dx": Key(float, 0.1, "space step", _positive),
    "grid.dt": Key(float, 0.05, "time step", _positive),
    "grid.zeta": Key(float, 0.3, "lower CFL bound on c*dt/dx", _unit_open),
    "grid.xi": Key(float, 0.2, "upper CFL bound is 1 - xi", _unit_open),
    "demo.courant": Key(float, 1.1, "cfl-demo: Courant number used (dt = courant*dx/c)", _positive),
    "demo.min_steps": Key(int, 200, "cfl-demo: minimum number of time steps", _positive),
    "experiment": Key(str, "solve", "experiment to run when no verb is given", _choice(EXPERIMENTS)),
    "levels": Key(int, 4, "refinement levels for converge/consist", lambda v: None if v >= 3 else "must be >= 3"),
    "output_path": Key(str, "", "CSV destination (empty: stdout)"),
    "seed": Key(int, 0, "seed for randomized sources"),
}


@dataclass
class RunConfig:
    values: dict = field(default_factory=lambda: {k: spec.default for k, spec in KEYS.items()})
    lines: dict = field(default_factory=dict)
    source: str = "<defaults>"

    def __getitem__(self, key):
        return self.values[key]

    def where(self, key) -> str:
        if key in self.lines:
            return f"{self.source}:{self.lines[key]}"
        return f"{self.source}"

    def set(self, key: str, raw: str, where: str) -> None:
        spec = KEYS[key]
        try:
            value = spec.type(raw)
        except ValueError:
            raise ConfigError(f"{where}: {key}: cannot parse {raw!r} as {spec.type.__name__}") from None
        if isinstance(value, float) and not math.isfinite(value):
            raise ConfigError(f"{where}: {key}: must be finite")
        if spec.check is not None:
            reason = spec.check(value)
            if reason:
                raise ConfigError(f"{where}: {key}: {reason}, got {raw!r}")
        self.values[key] = value

    def validate(self) -> None:
        if not self["grid.x_min"] < self["grid.x_max"]:
            raise ConfigError(f"{self.where('grid.x_max')}: grid.x_max: must exceed grid.x_min")
        if self["grid.zeta"] > 1 - self["grid.xi"]:
            raise ConfigError(f"{self.where('grid.zeta')}: grid.zeta: must be <= 1 - grid.xi")

    def problem(self):
        c = self["problem.c"]
        if self["problem.type"] == "zero":
            hw, center = self["problem.half_width"], self["problem.center"]
            return zero_problem(c, center - hw, center + hw)
        return traveling_bump_problem(self["problem.center"], self["problem.half_width"], self["problem.p"], c)

    def grid(self, dt=None, t_max=None) -> scheme.GridSpec:
        return scheme.GridSpec(self["grid.x_min"], self["grid.x_max"],
                               self["grid.t_max"] if t_max is None else t_max,
                               self["grid.dx"], self["grid.dt"] if dt is None else dt,
                               self["problem.c"], self["grid.zeta"], self["grid.xi"])


def parse_config(text: str, source: str = "<string>") -> RunConfig:
    cfg = RunConfig(source=source)
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        where = f"{source}:{lineno}"
        if "=" not in body:
            raise ConfigError(f"{where}: expected 'key = value', got {line.strip()!r}")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        if key in cfg.lines:
            raise ConfigError(f"{where}: {key}: duplicate (first set on line {cfg.lines[key]})")
        cfg.set(key, raw, where)
        cfg.lines[key] = lineno
    cfg.validate()
    return cfg


def load_config(path: Optional[str]) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc.strerror}") from None
    return parse_config(text, path)


def fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return ""
    return format(float(v), ".17g")


class CsvOut:
    def __init__(self, experiment: str, exercises: str, cfg: RunConfig):
        self.buf = io.StringIO()
        self.meta(f"wavefd {experiment}")
        self.meta(f"exercises: {exercises}")
        for key in sorted(KEYS):
            self.meta(f"config {key}={cfg[key]}")

    def meta(self, text: str) -> None:
        self.buf.write(f"# {text}\n")

    def row(self, *values) -> None:
        self.buf.write(",".join(v if isinstance(v, str) else fmt(v) for v in values) + "\n")

    def getvalue(self) -> str:
        return self.buf.getvalue()


def _sources(cfg: RunConfig, grid, prob, u0h, u1h, sh):
    amp = cfg["problem.source_amplitude"]
    if amp == 0:
        return sh
    rng = np.random.default_rng(cfg["seed"])
    extra = scheme.random_cone_source(grid, scheme.initial_bounds(u0h, u1h), rng, amp)
    return [seq_combine(1.0, a, 1.0, b) for a, b in zip(sh, extra)]


def _require_finite(sol) -> None:
    if not np.all(np.isfinite(sol.array)):
        raise InstabilityError("non-finite values in the discrete solution")


def _checked_solve(cfg: RunConfig):
    prob, exact = cfg.problem()
    grid = cfg.grid()
    u0h, u1h, sh = scheme.sample_inputs(prob, grid)
    sh = _sources(cfg, grid, prob, u0h, u1h, sh)
    sol = scheme.solve(grid, u0h, u1h, sh)
    _require_finite(sol)
    return prob, exact, grid, (u0h, u1h, sh), sol


def run_solve(cfg, log):
    prob, exact, grid, inputs, sol = _checked_solve(cfg)
    out = CsvOut("solve", "three-point scheme time stepping", cfg)
    out.row("k,j,x,t,u")
    xs = grid.x
    for k in range(grid.k_max + 1):
        t = k * grid.dt
        for j in range(grid.j_max + 1):
            out.row(k, j, xs[j], t, sol.array[k, j])
    log(f"solved {grid.k_max + 1} levels x {grid.j_max + 1} nodes, courant={grid.courant:.6g}")
    return out, EXIT_OK


def run_refinement(cfg, log, kind):
    prob, exact = cfg.problem()
    report = analysis.refinement_study(prob, exact, cfg.grid(), cfg["levels"], kind)
    what = "convergence error order" if kind == "convergence" else "truncation error order"
    out = CsvOut("converge" if kind == "convergence" else "consist", what, cfg)
    out.row("level,dx,dt,courant,max_norm")
    for ell, (dx, dt, norm) in enumerate(report.rows):
        out.row(ell, dx, dt, cfg["problem.c"] * dt / dx, norm)
    out.meta(f"fitted_order={fmt(report.fitted_order)}")
    out.meta(f"fitted_constant={fmt(report.fitted_constant)}")
    if report.degenerate:
        out.meta("degenerate=true")
        log("degenerate refinement: some error norms are zero, no order fitted")
    else:
        log(f"fitted {kind} order {report.fitted_order:.4f}")
    return out, EXIT_OK


def _energy_rows(out, sol, sh):
    grid = sol.grid
    trace = energy.energy_trace(sol).values
    failures = 0
    for k, e in enumerate(trace):
        resid = None
        if k >= 1:
            resid = energy.energy_increment_residual(sol, sh, k)
            scale = 1.0 + abs(e) + abs(trace[k - 1])
            if not resid <= energy.RTOL * scale:
                failures += 1
        gap = energy.energy_lower_bound_gap(sol, k)
        if not gap >= -energy.RTOL * (1.0 + abs(e)):
            failures += 1
        out.row(k, (k + 0.5) * grid.dt, e, resid, gap)
    return trace, failures


def run_energy(cfg, log):
    prob, exact, grid, (u0h, u1h, sh), sol = _checked_solve(cfg)
    out = CsvOut("energy", "discrete energy, energy increment identity, energy lower bound", cfg)
    out.row("k,t,E,increment_residual,lower_bound_gap")
    trace, failures = _energy_rows(out, sol, sh)
    if cfg["problem.source_amplitude"] == 0 and trace.size:
        drift = float(np.max(np.abs(trace - trace[0])))
        out.meta(f"max_energy_drift={fmt(drift)}")
        if not drift <= energy.RTOL * grid.k_max * (1.0 + abs(trace[0])):
            failures += 1
    if failures:
        log(f"energy checks failed at {failures} places")
        return out, EXIT_CHECK_FAILED
    log("energy checks passed")
    return out, EXIT_OK


def run_stability(cfg, log):
    prob, exact, grid, (u0h, u1h, sh), sol = _checked_solve(cfg)
    out = CsvOut("stability", "energy growth bound under the CFL condition", cfg)
    out.row("k,t,lhs_sqrtE,rhs_bound")
    lhs, rhs = energy.stability_trace(sol, sh)
    failures = 0
    for k, (a, b) in enumerate(zip(lhs, rhs)):
        if not a <= b + energy.RTOL * (1.0 + a + b):
            failures += 1
        out.row(k, (k + 1) * grid.dt, a, b)
    if failures:
        log(f"stability bound violated at {failures} times")
        return out, EXIT_CHECK_FAILED
    log("stability bound holds at every grid time")
    return out, EXIT_OK


def run_cfl_demo(cfg, log):
    prob, exact = cfg.problem()
    dx, c = cfg["grid.dx"], cfg["problem.c"]
    dt = cfg["demo.courant"] * dx / c
    t_max = max(cfg["grid.t_max"], (cfg["demo.min_steps"] + 0.5) * dt)
    grid = cfg.grid(dt=dt, t_max=t_max)
    u0h, u1h, sh = scheme.sample_inputs(prob, grid)
    sol = scheme.solve_unchecked(grid, u0h, u1h, sh)
    out = CsvOut("cfl-demo", "energy growth when the Courant number exceeds 1", cfg)
    out.meta(f"courant={fmt(grid.courant)} steps={grid.k_max}")
    out.row("k,t,E,increment_residual,lower_bound_gap")
    with np.errstate(all="ignore"):
        trace, _ = _energy_rows(out, sol, sh)
    e0 = trace[0] if trace.size else 0.0
    blown = bool(np.any(~np.isfinite(trace)) or np.any(np.abs(trace) > BLOWUP_FACTOR * (1.0 + abs(e0))))
    if blown:
        log(f"instability detected: energy exceeded {BLOWUP_FACTOR:g} x (1 + |E_1/2|) "
            f"at courant {grid.courant:.6g}")
        return out, EXIT_UNSTABLE
    log(f"no instability detected at courant {grid.courant:.6g}")
    return out, EXIT_OK


def run_cone_check(cfg, log):
    prob, exact, grid, (u0h, u1h, sh), sol = _checked_solve(cfg)
    bounds = scheme.initial_bounds(u0h, u1h)
    fields = [sol.levels,
              analysis.truncation_error(grid, exact, prob, (u0h, u1h, sh)).levels,
              analysis.convergence_error(sol, exact).levels]
    viol = sum(analysis.cone_violations(levels, grid, bounds) for levels in fields)
    out = CsvOut("cone-check", "support cone of the solution, truncation error and convergence error", cfg)
    out.row("k,predicted_lo,predicted_hi,actual_lo,actual_hi,violations")
    for k in range(grid.k_max + 1):
        lo, hi = scheme.support_cone(grid, bounds, k)
        extents = [b for b in (levels[k].nonzero_bounds() for levels in fields) if b is not None]
        a_lo = min(b[0] for b in extents) if extents else None
        a_hi = max(b[1] for b in extents) if extents else None
        out.row(k, lo, hi, a_lo, a_hi, int(viol[k]))
    total = int(viol.sum())
    if total:
        log(f"{total} nonzero values outside the predicted cone")
        return out, EXIT_CHECK_FAILED
    log("all levels vanish outside the predicted cone")
    return out, EXIT_OK


RUNNERS = {
    "solve": run_solve,
    "converge": lambda cfg, log: run_refinement(cfg, log, "convergence"),
    "consist": lambda cfg, log: run_refinement(cfg, log, "truncation"),
    "energy": run_energy,
    "stability": run_stability,
    "cfl-demo": run_cfl_demo,
    "cone-check": run_cone_check,
}


def run(cfg: RunConfig, experiment: Optional[str] = None, out_path: Optional[str] = None,
        stdout=None, stderr=None) -> int:
    """Execute one experiment and write its CSV; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    experiment = experiment or cfg["experiment"]

    def log(msg):
        print(f"wavefd {experiment}: {msg}", file=stderr)

    try:
        out, status = RUNNERS[experiment](cfg, log)
    except CFLViolation as exc:
        log(f"rejected: {exc}")
        return EXIT_CFL
    except InstabilityError as exc:
        log(f"instability detected: {exc}")
        return EXIT_UNSTABLE
    except ValueError as exc:
        log(f"invalid configuration: {exc}")
        return EXIT_CONFIG
    path = out_path or cfg["output_path"]
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(out.getvalue())
    else:
        stdout.write(out.getvalue())
    return status


def _key_help() -> str:
    lines = ["configuration keys (key = value, one per line, # comments):"]
    for key, spec in KEYS.items():
        lines.append(f"  {key:<26} {spec.help} [default: {spec.default!r}]")
    lines.append("")
    lines.append("exit status: 0 ok, 2 bad config, 3 CFL rejected, 4 instability, 5 check failed")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavefd",
        description="Three-point finite-difference scheme for the 1D wave equation: solves and checks.",
        epilog=_key_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("experiment", nargs="?", choices=EXPERIMENTS,
                        help="experiment to run (default: the config's 'experiment' key)")
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--out", help="CSV output path (overrides output_path)")
    parser.add_argument("--levels", type=int, help="refinement levels (overrides levels)")
    parser.add_argument("--seed", type=int, help="random seed (overrides seed)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.levels is not None:
            cfg.set("levels", str(args.levels), "--levels")
        if args.seed is not None:
            cfg.set("seed", str(args.seed), "--seed")
    except ConfigError as exc:
        print(f"wavefd: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg, args.experiment, args.out)


if __name__ == "__main__":
    sys.exit(main())
