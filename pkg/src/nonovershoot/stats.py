"""Monte Carlo aggregation and distribution-distance machinery.

Aggregation keeps compensated raw sums, so accumulators merge associatively
(parallel reduction) and reproduce one-shot aggregation to rounding.  The
weighted mean uses the self-normalized ratio form with a delta-method
standard error; effective sample sizes drive the (approximate, conservative)
Kolmogorov-Smirnov p-values for weighted samples.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import kolmogorov

from nonovershoot.errors import DegenerateWeights

__all__ = ["Estimate", "Accumulator", "aggregate", "weighted_ecdf", "ECDF",
           "ks_one_sample", "ks_two_sample", "effective_sample_size"]


@dataclass(frozen=True)
class Estimate:
    """Point value with stderr, 99% CI, replica count and budget metadata."""

    value: float
    stderr: float
    n: int
    n_effective: float
    budget_exhausted: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def ci99(self):
        half = 2.5758293035489004 * self.stderr
        return (self.value - half, self.value + half)

    def to_dict(self) -> dict:
        lo, hi = self.ci99
        d = {"estimate": self.value, "stderr": self.stderr, "n": self.n,
             "n_effective": self.n_effective, "ci99_low": lo, "ci99_high": hi,
             "budget_exhausted": self.budget_exhausted}
        d.update(self.meta)
        return d


def _fsum(x):
    return math.fsum(np.asarray(x, dtype=float).tolist())


class Accumulator:
    """Mergeable weighted-moment accumulator (compensated raw sums)."""

    __slots__ = ("n", "sw", "swx", "sw2", "sw2x", "sw2x2", "sx", "sx2", "budget")

    def __init__(self):
        self.n = 0
        self.sw = 0.0
        self.swx = 0.0
        self.sw2 = 0.0
        self.sw2x = 0.0
        self.sw2x2 = 0.0
        self.sx = 0.0
        self.sx2 = 0.0
        self.budget = 0

    def add(self, values, weights=None, budget_exhausted=0):
        x = np.asarray(values, dtype=float)
        if weights is None:
            w = np.ones_like(x)
        else:
            w = np.asarray(weights, dtype=float)
            if w.shape != x.shape:
                raise ValueError("values and weights must have equal length")
            if np.any(w < 0):
                raise ValueError("weights must be nonnegative")
        self.n += x.size
        self.sw += _fsum(w)
        self.swx += _fsum(w * x)
        self.sw2 += _fsum(w * w)
        self.sw2x += _fsum(w * w * x)
        self.sw2x2 += _fsum(w * w * x * x)
        self.sx += _fsum(x)
        self.sx2 += _fsum(x * x)
        self.budget += int(budget_exhausted)
        return self

    def merge(self, other: "Accumulator") -> "Accumulator":
        out = Accumulator()
        for name in ("n", "sw", "swx", "sw2", "sw2x", "sw2x2", "sx", "sx2", "budget"):
            setattr(out, name, getattr(self, name) + getattr(other, name))
        return out

    def estimate(self, weighted: bool = False) -> Estimate:
        if self.n < 1:
            raise ValueError("empty accumulator")
        if not weighted:
            mean = self.sx / self.n
            if self.n == 1:
                se = 0.0
            else:
                var = max(self.sx2 - self.n * mean * mean, 0.0) / (self.n - 1)
                se = math.sqrt(var / self.n)
            return Estimate(mean, se, self.n, float(self.n), self.budget)
        if self.sw <= 0.0:
            raise DegenerateWeights("all weights are zero")
        ratio = self.swx / self.sw
        # delta-method variance of the self-normalized estimator
        num = self.sw2x2 - 2.0 * ratio * self.sw2x + ratio * ratio * self.sw2
        se = math.sqrt(max(num, 0.0)) / self.sw
        n_eff = self.sw * self.sw / self.sw2 if self.sw2 > 0 else 0.0
        return Estimate(ratio, se, self.n, n_eff, self.budget)


def aggregate(values, weights=None, budget_exhausted=0) -> Estimate:
    """One-shot mean/stderr; ratio estimator when weights are given."""
    acc = Accumulator().add(values, weights, budget_exhausted)
    return acc.estimate(weighted=weights is not None)


def effective_sample_size(weights) -> float:
    w = np.asarray(weights, dtype=float)
    sw = _fsum(w)
    sw2 = _fsum(w * w)
    if sw2 <= 0.0:
        raise DegenerateWeights("all weights are zero")
    return sw * sw / sw2


# ---------------------------------------------------------------------------
# empirical distributions

@dataclass(frozen=True)
class ECDF:
    """Right-continuous weighted empirical CDF."""

    support: np.ndarray
    cum: np.ndarray

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.support, x, side="right")
        cum = np.concatenate([[0.0], self.cum])
        out = cum[idx]
        return float(out) if out.ndim == 0 else out


def weighted_ecdf(values, weights=None) -> ECDF:
    """Atoms w_i / sum(w) at the sorted values; F(inf) = 1 exactly."""
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        raise ValueError("empty sample")
    if weights is None:
        w = np.ones_like(x)
    else:
        w = np.asarray(weights, dtype=float)
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
    total = _fsum(w)
    if total <= 0.0:
        raise DegenerateWeights("all weights are zero")
    order = np.argsort(x, kind="stable")
    xs = x[order]
    cum = np.cumsum(w[order]) / total
    cum[-1] = 1.0
    # collapse ties onto the last cumulative value
    keep = np.concatenate([xs[1:] != xs[:-1], [True]])
    return ECDF(xs[keep], cum[keep])


def ks_one_sample(values, cdf, weights=None) -> float:
    """sup |F_n - F| against a callable CDF.

    The reference CDF must be continuous (the empirical left-limit bracket
    assumes F does not jump at the sample points).  Compare atomic laws on
    their common support grid instead.
    """
    e = weighted_ecdf(values, weights)
    f = np.asarray(cdf(e.support), dtype=float)
    lower = np.concatenate([[0.0], e.cum[:-1]])
    return float(np.max(np.maximum(np.abs(f - e.cum), np.abs(f - lower))))


def ks_two_sample(values_a, values_b, weights_a=None, weights_b=None):
    """sup-distance between two (possibly weighted) ECDFs and an asymptotic
    p-value using effective sample sizes."""
    ea = weighted_ecdf(values_a, weights_a)
    eb = weighted_ecdf(values_b, weights_b)
    grid = np.union1d(ea.support, eb.support)
    d = float(np.max(np.abs(ea(grid) - eb(grid))))
    na = effective_sample_size(weights_a) if weights_a is not None else len(np.atleast_1d(values_a))
    nb = effective_sample_size(weights_b) if weights_b is not None else len(np.atleast_1d(values_b))
    n = na * nb / (na + nb)
    p = float(kolmogorov(math.sqrt(n) * d))
    return d, p
