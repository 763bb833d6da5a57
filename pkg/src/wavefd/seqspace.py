"""Real sequences over the integers with a finite support window.

A :class:`SupportSeq` stores a dense block of values for indices ``lo..hi``
and is exactly zero everywhere else. Every operation below returns a new
sequence whose window covers all indices where the result can be nonzero, so
finite support is preserved structurally instead of being checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np


@dataclass(frozen=True, eq=False)
class SupportSeq:
    """Sequence ``i -> value(i)`` that vanishes outside ``[lo, hi]``.

    The window is conservative: stored entries may be zero. ``lo == hi + 1``
    is the empty window (the zero sequence). Instances are immutable.
    """

    values: np.ndarray
    lo: int

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "lo", int(self.lo))

    @property
    def hi(self) -> int:
        return self.lo + self.values.size - 1

    @property
    def empty(self) -> bool:
        return self.values.size == 0

    @classmethod
    def zero(cls, lo: int = 0) -> SupportSeq:
        return cls(np.zeros(0), lo)

    @classmethod
    def delta(cls, i: int, value: float = 1.0) -> SupportSeq:
        return cls(np.array([value]), i)

    @classmethod
    def indicator(cls, lo: int, hi: int) -> SupportSeq:
        return cls(np.ones(hi - lo + 1), lo)

    @classmethod
    def from_dict(cls, entries: dict[int, float]) -> SupportSeq:
        if not entries:
            return cls.zero()
        lo, hi = min(entries), max(entries)
        vals = np.zeros(hi - lo + 1)
        for i, v in entries.items():
            vals[i - lo] = v
        return cls(vals, lo)

    def __call__(self, i: int) -> float:
        if self.lo <= i <= self.hi:
            return float(self.values[i - self.lo])
        return 0.0

    def at(self, indices) -> np.ndarray:
        """Vectorized lookup; zero outside the window."""
        idx = np.asarray(indices, dtype=np.int64)
        out = np.zeros(idx.shape)
        inside = (idx >= self.lo) & (idx <= self.hi)
        out[inside] = self.values[idx[inside] - self.lo]
        return out

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Dense copy of the values on ``lo..hi`` (zero padded)."""
        out = np.zeros(max(hi - lo + 1, 0))
        if self.empty or hi < lo:
            return out
        a, b = max(lo, self.lo), min(hi, self.hi)
        if a <= b:
            out[a - lo:b - lo + 1] = self.values[a - self.lo:b - self.lo + 1]
        return out

    def restrict(self, lo: int, hi: int) -> SupportSeq:
        """Drop every entry outside ``lo..hi``."""
        a, b = max(lo, self.lo), min(hi, self.hi)
        if a > b:
            return SupportSeq.zero(lo)
        return SupportSeq(self.values[a - self.lo:b - self.lo + 1], a)

    def nonzero_bounds(self) -> tuple[int, int] | None:
        """Tight bounds of the exactly-nonzero entries, or None."""
        nz = np.flatnonzero(self.values != 0.0)
        if nz.size == 0:
            return None
        return self.lo + int(nz[0]), self.lo + int(nz[-1])

    def count_nonzero(self) -> int:
        return int(np.count_nonzero(self.values))

    def equals(self, other: SupportSeq) -> bool:
        """Pointwise equality (window bounds are ignored)."""
        lo, hi = _union_bounds([self, other])
        return bool(np.array_equal(self.window(lo, hi), other.window(lo, hi)))

    def __repr__(self):
        return f"SupportSeq(lo={self.lo}, hi={self.hi}, values={self.values!r})"


def _union_bounds(seqs: Iterable[SupportSeq]) -> tuple[int, int]:
    seqs = [s for s in seqs if not s.empty]
    if not seqs:
        return 0, -1
    return min(s.lo for s in seqs), max(s.hi for s in seqs)


def seq_combine(alpha: float, f: SupportSeq, beta: float, g: SupportSeq) -> SupportSeq:
    """Return ``alpha*f + beta*g`` on the union of both windows."""
    lo, hi = _union_bounds([f, g])
    if hi < lo:
        return SupportSeq.zero()
    return SupportSeq(alpha * f.window(lo, hi) + beta * g.window(lo, hi), lo)


def seq_shift(f: SupportSeq, k: int) -> SupportSeq:
    """Return ``i -> f(i + k)``."""
    return SupportSeq(f.values, f.lo - k)


def dot(f: SupportSeq, g: SupportSeq) -> float:
    """Sum of ``f(i)*g(i)`` over the overlap of the two windows."""
    lo, hi = max(f.lo, g.lo), min(f.hi, g.hi)
    if f.empty or g.empty or lo > hi:
        return 0.0
    return float(np.dot(f.values[lo - f.lo:hi - f.lo + 1], g.values[lo - g.lo:hi - g.lo + 1]))


def _check_positive(name: str, value: float) -> None:
    if not value > 0:
        raise ValueError(f"{name} must be > 0, got {value!r}")


def dot_dx(f: SupportSeq, g: SupportSeq, dx: float) -> float:
    """Grid inner product ``dx * sum f(i) g(i)``."""
    _check_positive("dx", dx)
    return dx * dot(f, g)


def norm_dx(f: SupportSeq, dx: float) -> float:
    return float(np.sqrt(dot_dx(f, f, dx)))


def second_difference(padded: np.ndarray) -> np.ndarray:
    """``(v[j+1] - 2 v[j]) + v[j-1]`` for every interior point of ``padded``.

    Every kernel of the package uses this exact grouping so results stay
    bitwise comparable across code paths.
    """
    return (padded[2:] - 2.0 * padded[1:-1]) + padded[:-2]


def apply_Ah(v: SupportSeq, c: float, dx: float) -> SupportSeq:
    """Discrete wave operator ``-c^2 (v[j+1] - 2 v[j] + v[j-1]) / dx^2``.

    The result window is the input window widened by one on each side.
    """
    _check_positive("c", c)
    _check_positive("dx", dx)
    if v.empty:
        return SupportSeq.zero(v.lo)
    padded = v.window(v.lo - 2, v.hi + 2)
    return SupportSeq((-(c * c) * second_difference(padded)) / (dx * dx), v.lo - 1)
