"""Cadlag pure-jump paths stored as jump skeletons.

A skeleton is (origin, jump epochs, jump sizes); the path is the
right-continuous step function origin + sum of sizes with epoch <= t.
Every integral used downstream is exactly computable on such paths, so the
time-change arithmetic below carries no discretization error.
"""

import io
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from nonovershoot.errors import ExhaustedError

__all__ = ["JumpSkeleton", "PassageRecord", "first_passage", "sigma_inverse",
           "sigma_of", "time_change_sigma", "scaled_walk_path", "skeleton_to_csv"]


@dataclass(frozen=True)
class JumpSkeleton:
    """Strictly increasing jump epochs, same-length sizes, initial value."""

    times: np.ndarray
    sizes: np.ndarray
    origin: float = 0.0

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        sizes = np.asarray(self.sizes, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "sizes", sizes)
        if times.shape != sizes.shape or times.ndim != 1:
            raise ValueError("times and sizes must be 1-d arrays of equal length")
        if times.size and (np.any(np.diff(times) <= 0) or times[0] < 0):
            raise ValueError("jump epochs must be strictly increasing and nonnegative")
        object.__setattr__(self, "_cum", self.origin + np.cumsum(sizes))

    @property
    def n_jumps(self) -> int:
        return int(self.times.size)

    def value(self, t):
        """Path value at t (right-continuous: includes a jump exactly at t)."""
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.times, t, side="right")
        cum = np.concatenate([[self.origin], self._cum])
        out = cum[idx]
        return float(out) if out.ndim == 0 else out

    def left_limit(self, t):
        """Left limit at t (excludes a jump exactly at t)."""
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.times, t, side="left")
        cum = np.concatenate([[self.origin], self._cum])
        out = cum[idx]
        return float(out) if out.ndim == 0 else out

    def values_after_jumps(self) -> np.ndarray:
        return self._cum.copy()

    def terminal(self) -> float:
        return float(self._cum[-1]) if self.times.size else self.origin


@dataclass(frozen=True)
class PassageRecord:
    """Outcome of one first-passage simulation."""

    skeleton: Optional[JumpSkeleton]
    tau: float
    chi: float
    weight: float
    hit: bool
    budget_exhausted: bool = False
    meta: dict = field(default_factory=dict)


def first_passage(skeleton: JumpSkeleton, level: float) -> Tuple[float, float, bool]:
    """(tau, chi, hit): first epoch with value >= level.

    Equality counts as a hit (lattice walks can land exactly on the level).
    A skeleton that never reaches the level returns hit=False with NaNs.
    """
    if level <= skeleton.origin:
        raise ValueError("level must exceed the skeleton origin")
    nan = float("nan")
    vals = skeleton.values_after_jumps()
    if vals.size == 0:
        return nan, nan, False
    idx = np.nonzero(vals >= level)[0]
    if idx.size == 0:
        return nan, nan, False
    i = int(idx[0])
    return float(skeleton.times[i]), float(vals[i] - level), True


def _breve_segments(skeleton: JumpSkeleton):
    """Segment representation of a positive nonincreasing step path.

    Returns (start times t_i, values v_i on [t_i, t_{i+1})) including the
    pre-first-jump segment at the origin value.
    """
    vals = skeleton.values_after_jumps()
    starts = np.concatenate([[0.0], skeleton.times])
    levels = np.concatenate([[skeleton.origin], vals])
    if np.any(levels < 0) or skeleton.origin <= 0:
        raise ValueError("time change requires a positive nonincreasing path")
    if vals.size and np.any(np.diff(levels) > 0):
        raise ValueError("time change requires a nonincreasing path")
    return starts, levels


def sigma_inverse(skeleton: JumpSkeleton, alpha: float, s) -> np.ndarray:
    """A(s) = integral_0^s value(q)^alpha dq, exactly (piecewise linear)."""
    starts, levels = _breve_segments(skeleton)
    slopes = levels**alpha
    seg_ends = np.concatenate([skeleton.times, [np.inf]])
    seg_int = slopes[:-1] * np.diff(starts)
    cum = np.concatenate([[0.0], np.cumsum(seg_int)])
    s = np.asarray(s, dtype=float)
    idx = np.searchsorted(seg_ends, s, side="left")
    idx = np.minimum(idx, len(starts) - 1)
    out = cum[idx] + slopes[idx] * (s - starts[idx])
    return float(out) if out.ndim == 0 else out


def sigma_of(skeleton: JumpSkeleton, alpha: float, t, horizon: Optional[float] = None):
    """Inverse of A: sigma(t) = inf{s : A(s) > t}, exact linear interpolation.

    Raises ExhaustedError when t is not reached by the finite skeleton within
    `horizon` (default: unbounded final segment, which is fine as long as the
    final value is positive).
    """
    starts, levels = _breve_segments(skeleton)
    slopes = levels**alpha
    seg_int = slopes[:-1] * np.diff(starts)
    cum = np.concatenate([[0.0], np.cumsum(seg_int)])
    t = np.asarray(t, dtype=float)
    if horizon is not None:
        total = cum[-1] + slopes[-1] * max(horizon - starts[-1], 0.0)
        if np.any(t >= total):
            raise ExhaustedError(
                f"time change target beyond the skeleton's integral {total:.6g}")
    if np.any(slopes[-1] == 0.0):
        total = cum[-1]
        if np.any(t >= total):
            raise ExhaustedError("path reaches zero; integral saturates")
    idx = np.searchsorted(cum, t, side="right") - 1
    idx = np.clip(idx, 0, len(slopes) - 1)
    out = starts[idx] + (t - cum[idx]) / slopes[idx]
    return float(out) if out.ndim == 0 else out


def time_change_sigma(skeleton: JumpSkeleton, alpha: float, t, horizon=None):
    """Alias matching the operation name: the time change applied to t."""
    return sigma_of(skeleton, alpha, t, horizon=horizon)


def scaled_walk_path(increments: np.ndarray, r: float, tail_at_r: float,
                     tau_steps: Optional[int] = None) -> JumpSkeleton:
    """Scaled stopped walk: step i becomes a jump of xi_i/r at epoch
    i*(1 - F(r)), truncated at the passage step."""
    if not 0.0 < tail_at_r < 1.0:
        raise ValueError("tail_at_r must lie in (0, 1)")
    inc = np.asarray(increments, dtype=float)
    n = inc.size if tau_steps is None else min(int(tau_steps), inc.size)
    idx = np.arange(1, n + 1, dtype=float)
    return JumpSkeleton(times=idx * tail_at_r, sizes=inc[:n] / r, origin=0.0)


def skeleton_to_csv(skeleton: JumpSkeleton) -> str:
    """Two-column CSV (time,value) with the initial value at time 0."""
    buf = io.StringIO()
    buf.write("time,value\n")
    buf.write(f"0.0,{skeleton.origin!r}\n")
    for t, v in zip(skeleton.times, skeleton.values_after_jumps()):
        buf.write(f"{float(t)!r},{float(v)!r}\n")
    return buf.getvalue()
