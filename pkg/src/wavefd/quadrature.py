"""Adaptive Simpson quadrature with an interval budget."""

from __future__ import annotations

from typing import Callable

from .errors import QuadratureError

DEFAULT_BUDGET = 1_000_000
MIN_PANELS = 8
MAX_DEPTH = 60


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    budget: int = DEFAULT_BUDGET,
) -> float:
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``tol``.

    The interval is first cut into a few panels (so narrow features are not
    skipped by the first five samples), then each panel is bisected until the
    Richardson error estimate ``|S2 - S1| / 15`` falls under its share of the
    tolerance.

    Raises:
        QuadratureError: if more than ``budget`` intervals are processed or a
            panel shrinks past ``MAX_DEPTH`` bisections.
    """
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol!r}")
    if a == b:
        return 0.0
    if a > b:
        return -adaptive_simpson(f, b, a, tol, budget)

    def ev(x):
        return float(f(x))

    width = (b - a) / MIN_PANELS
    stack = []
    for i in range(MIN_PANELS):
        lo = a + i * width
        hi = b if i == MIN_PANELS - 1 else a + (i + 1) * width
        flo, fmid, fhi = ev(lo), ev(0.5 * (lo + hi)), ev(hi)
        whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)
        stack.append((lo, hi, flo, fmid, fhi, whole, tol / MIN_PANELS, 0))

    total = 0.0
    processed = 0
    while stack:
        lo, hi, flo, fmid, fhi, whole, eps, depth = stack.pop()
        processed += 1
        if processed > budget:
            raise QuadratureError(f"adaptive Simpson exceeded {budget} intervals on [{a}, {b}]")
        mid = 0.5 * (lo + hi)
        fl = ev(0.5 * (lo + mid))
        fr = ev(0.5 * (mid + hi))
        left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi)
        delta = left + right - whole
        if abs(delta) <= 15.0 * eps:
            total += left + right + delta / 15.0
            continue
        if depth >= MAX_DEPTH:
            raise QuadratureError(f"adaptive Simpson hit depth {MAX_DEPTH} near x={mid}")
        stack.append((lo, mid, flo, fl, fmid, left, 0.5 * eps, depth + 1))
        stack.append((mid, hi, fmid, fr, fhi, right, 0.5 * eps, depth + 1))
    return total
