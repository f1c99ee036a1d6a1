"""Ladder-height machinery, the tail constant of the mean passage weight,
and mechanical regular-variation checks.

The central limit statement verified here: the mean importance weight at
level r decays like ``C0 / (r * (1 - F(r)))`` with

    C0 = (1/E[T1]) * (sin pi a / pi) * integral_0^inf e^{-gamma x} (1 - F_+(x)) dx,

where (T1, zeta1) are the first strict ascending ladder epoch/height of the
tilted walk and F_+ the ladder-height law.  Two independent estimators of
the same constant (the ladder formula vs the plateau of
``r (1-F(r)) E[weight]``) cross-check each other; lattice models use the
lattice-sum form of the constant and only admit levels on the lattice.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from nonovershoot import kernels
from nonovershoot.errors import LatticeMisaligned
from nonovershoot.model import ModelSpec, m_of, pack_tilted, tail_F
from nonovershoot.rng import TAG_LADDER, as_stream, replica_keys, u01_block
from nonovershoot.stats import Estimate
from nonovershoot.walk import DEFAULT_MAX_STEPS, u_of

__all__ = ["LadderSample", "ladder_sample", "ladder_from_increments",
           "ladder_batch", "estimate_C0", "korshunov_ratio", "CheckReport",
           "potter_check", "condition2_check", "karamata_check",
           "slowly_varying_part"]


@dataclass(frozen=True)
class LadderSample:
    """First strict ascending ladder epoch (steps) and height (level units)."""

    T1: int
    zeta1: float


@dataclass
class CheckReport:
    check: str
    passed: bool
    margin: float
    worst: dict
    details: dict

    def to_dict(self) -> dict:
        return {"check": self.check, "pass": self.passed, "margin": self.margin,
                "worst_case": self.worst, "details": self.details}


# ---------------------------------------------------------------------------
# ladder heights

def ladder_from_increments(increments) -> LadderSample:
    """First strict ascending ladder point of a given increment sequence."""
    s = 0.0
    for k, x in enumerate(increments, start=1):
        s += float(x)
        if s > 0.0:
            return LadderSample(T1=k, zeta1=s)
    raise ValueError("sequence never climbs above zero")


def ladder_batch(spec: ModelSpec, n: int, rng, max_steps: int = DEFAULT_MAX_STEPS):
    stream = as_stream(rng)
    keys = replica_keys(stream.key, TAG_LADDER, n, start_index=stream.ctr)
    stream.ctr += n
    return kernels.ladder(keys, max_steps, pack_tilted(spec))


def ladder_sample(spec: ModelSpec, rng, max_steps: int = DEFAULT_MAX_STEPS) -> LadderSample:
    t1, zeta, budget = ladder_batch(spec, 1, rng, max_steps)
    if budget[0]:
        raise RuntimeError(f"no ladder epoch within {max_steps} steps")
    return LadderSample(T1=int(t1[0]), zeta1=float(zeta[0]))


def _ratio_of_means(num_vals: np.ndarray, den_vals: np.ndarray, budget: int = 0,
                    meta: Optional[dict] = None) -> Estimate:
    """Delta-method estimate of E[num]/E[den] from paired samples."""
    n = num_vals.size
    a = float(np.mean(num_vals))
    b = float(np.mean(den_vals))
    r = a / b
    resid = num_vals - r * den_vals
    var = float(np.sum(resid * resid)) / max(n - 1, 1)
    se = math.sqrt(var / n) / abs(b)
    return Estimate(r, se, n, float(n), budget, meta=meta or {})


def estimate_C0(spec: ModelSpec, n_replicas: int, rng,
                max_steps: int = DEFAULT_MAX_STEPS) -> Estimate:
    """Ladder-formula estimate of the passage-weight tail constant.

    The exponential integral of the empirical ladder-height tail is exact:
    each height zeta contributes (1 - e^{-gamma zeta})/gamma, or its
    lattice-sum analogue h * sum_{k<zeta/h} e^{-gamma k h} on a lattice.
    """
    t1, zeta, budget = ladder_batch(spec, n_replicas, rng, max_steps)
    ok = budget == 0
    t1, zeta = t1[ok], zeta[ok]
    g = spec.gamma
    sin_term = math.sin(math.pi * spec.alpha) / math.pi
    if spec.is_lattice:
        h = spec.lattice
        k_counts = np.rint(zeta / h)
        egh = math.exp(-g * h)
        contrib = h * (1.0 - egh**k_counts) / (1.0 - egh)
    else:
        contrib = (1.0 - np.exp(-g * zeta)) / g
    est = _ratio_of_means(sin_term * contrib, t1.astype(float),
                          budget=int((~ok).sum()),
                          meta={"mean_T1": float(np.mean(t1)),
                                "mean_zeta1": float(np.mean(zeta)),
                                "lattice": bool(spec.is_lattice)})
    return est


def korshunov_ratio(spec: ModelSpec, r: float, n_replicas: int, rng,
                    max_steps: int = DEFAULT_MAX_STEPS) -> Estimate:
    """r * (1-F(r)) * E[weight at level r]; stabilizes at the tail constant."""
    if spec.is_lattice:
        h = spec.lattice
        if abs(r / h - round(r / h)) > 1e-9:
            raise LatticeMisaligned(f"level {r} is not a multiple of the span {h}")
    u = u_of(spec, r, n_replicas, rng, max_steps)
    scale = r * float(tail_F(spec, r))
    return Estimate(u.value * scale, u.stderr * scale, u.n, u.n_effective,
                    u.budget_exhausted, meta={"level": r, "mean_weight": u.value})


# ---------------------------------------------------------------------------
# regular-variation checks (evidence, not proof; reported as such)

def slowly_varying_part(spec: ModelSpec) -> Callable[[np.ndarray], np.ndarray]:
    """ell(x) = x^alpha * (1 - F(x)), slowly varying for the shipped tails."""
    return lambda x: np.asarray(x, dtype=float) ** spec.alpha * tail_F(spec, x)


def potter_check(ell_or_spec, epsilon: float, x0: float, n_probes: int = 512,
                 rng=None) -> CheckReport:
    """Probe the slow-variation bound L(x)/L(y) <= (1+eps) (x/y v y/x)^eps.

    Probes are log-uniform pairs over six decades above x0, plus the extreme
    corners; reports the worst violation margin.
    """
    ell = slowly_varying_part(ell_or_spec) if isinstance(ell_or_spec, ModelSpec) else ell_or_spec
    stream = as_stream(rng if rng is not None else 0)
    u = u01_block(stream.key, stream.ctr, 2 * n_probes)
    stream.ctr += 2 * n_probes
    xs = x0 * 10.0 ** (6.0 * u[:n_probes])
    ys = x0 * 10.0 ** (6.0 * u[n_probes:])
    xs = np.concatenate([xs, [x0, x0 * 1e6]])
    ys = np.concatenate([ys, [x0 * 1e6, x0]])
    lx = np.asarray(ell(xs), dtype=float)
    ly = np.asarray(ell(ys), dtype=float)
    bound = (1.0 + epsilon) * np.maximum(xs / ys, ys / xs) ** epsilon
    margin = lx / ly - bound
    worst = int(np.argmax(margin))
    passed = bool(margin[worst] <= 0.0)
    return CheckReport(
        check="potter", passed=passed, margin=float(margin[worst]),
        worst={"x": float(xs[worst]), "y": float(ys[worst]),
               "ratio": float(lx[worst] / ly[worst]), "bound": float(bound[worst])},
        details={"epsilon": epsilon, "x0": x0, "n_probes": int(n_probes)})


def condition2_check(spec_or_tail, C: float, rho: float,
                     y_grid: Optional[Sequence[float]] = None,
                     x_grid: Optional[Sequence[float]] = None,
                     y_min: float = 10.0,
                     lattice_span: Optional[float] = None) -> CheckReport:
    """Grid check of (1 - F(yx)) / (1 - F(y)) <= 1 + C (1-x) for x in (rho, 1).

    Lattice models satisfy the bound only along the aligned grid (levels
    y = n h, ratios x = k/n); passing `lattice_span` (taken from the spec
    automatically) restricts the probe grid accordingly.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    if isinstance(spec_or_tail, ModelSpec):
        tail = lambda x: tail_F(spec_or_tail, x)
        if lattice_span is None and spec_or_tail.is_lattice:
            lattice_span = spec_or_tail.lattice
    else:
        tail = spec_or_tail

    worst = {"y": None, "x": None, "ratio": None, "bound": None}
    worst_margin = -math.inf
    if lattice_span is not None:
        h = lattice_span
        ns = np.unique(np.rint(np.geomspace(max(y_min / h, 2), y_min / h * 1e6, 61))
                       .astype(np.int64))
        for n in ns:
            ks = np.arange(int(math.floor(rho * n)) + 1, n + 1, dtype=np.int64)
            if ks.size > 256:
                ks = ks[np.unique(np.linspace(0, ks.size - 1, 256).astype(int))]
            x = ks / float(n)
            ratio = np.asarray(tail(ks * h), dtype=float) / float(tail(n * h))
            bound = 1.0 + C * (1.0 - x)
            margin = ratio - bound
            i = int(np.argmax(margin))
            if margin[i] > worst_margin:
                worst_margin = float(margin[i])
                worst = {"y": float(n * h), "x": float(x[i]),
                         "ratio": float(ratio[i]), "bound": float(bound[i])}
        n_y, n_x = int(ns.size), 256
    else:
        if y_grid is None:
            y_grid = np.geomspace(y_min, y_min * 1e6, 61)
        if x_grid is None:
            x_grid = np.linspace(rho + 1e-6, 1.0 - 1e-9, 200)
        y = np.asarray(y_grid, dtype=float)
        x = np.asarray(x_grid, dtype=float)
        ratio = np.asarray(tail(np.outer(y, x)), dtype=float) / \
            np.asarray(tail(y), dtype=float)[:, None]
        bound = np.broadcast_to(1.0 + C * (1.0 - x)[None, :], ratio.shape)
        margin = ratio - bound
        iy, ix = np.unravel_index(int(np.argmax(margin)), margin.shape)
        worst_margin = float(margin[iy, ix])
        worst = {"y": float(y[iy]), "x": float(x[ix]),
                 "ratio": float(ratio[iy, ix]), "bound": float(bound[iy, ix])}
        n_y, n_x = int(y.size), int(x.size)
    return CheckReport(
        check="condition2", passed=bool(worst_margin <= 0.0), margin=worst_margin,
        worst=worst,
        details={"C": C, "rho": rho, "n_y": n_y, "n_x": n_x,
                 "lattice_span": lattice_span})


def karamata_check(spec: ModelSpec, r_list: Sequence[float],
                   y_grid: Optional[Sequence[float]] = None,
                   slack: float = 0.05, a_floor: float = 10.0) -> CheckReport:
    """Check the two scaling bounds behind the tail calculus.

    1. sup_{y in [A/r, 1]} y (1-F(ry)) / (1-F(r)) <= 1 + slack at large r;
    2. (1-F(r))^{-1} int_0^y x F(r dx)  <=  y^{1-a}/(1-a) * (1 + slack),
       with the truncated mean computed exactly from the closed-form tail.
    """
    r_list = sorted(float(r) for r in r_list)
    al = spec.alpha
    results = []
    worst_margin = -math.inf
    worst = {}
    for r in r_list:
        if y_grid is None:
            ys = np.geomspace(max(a_floor / r, 1e-12), 1.0, 101)
        else:
            ys = np.asarray(y_grid, dtype=float)
        tail_r = float(tail_F(spec, r))
        sup1 = float(np.max(ys * tail_F(spec, r * ys) / tail_r))
        margin1 = sup1 - (1.0 + slack)
        m2 = -math.inf
        for y in (0.25, 0.5, 1.0):
            trunc = (m_of(spec, r * y) - r * y * float(tail_F(spec, r * y))) / r
            lhs = trunc / tail_r
            rhs = y ** (1.0 - al) / (1.0 - al) * (1.0 + slack)
            m2 = max(m2, lhs - rhs)
        results.append({"r": r, "sup_scaling": sup1, "margin_scaling": margin1,
                        "margin_truncated_mean": m2})
        for margin, label in ((margin1, "scaling"), (m2, "truncated_mean")):
            if margin > worst_margin:
                worst_margin = margin
                worst = {"r": r, "bound": label, "margin": margin}
    # only the largest r must satisfy the asymptotic bounds; smaller r are
    # reported to show convergence
    final = results[-1]
    passed = final["margin_scaling"] <= 0.0 and final["margin_truncated_mean"] <= 0.0
    return CheckReport(check="karamata", passed=bool(passed),
                       margin=float(max(final["margin_scaling"],
                                        final["margin_truncated_mean"])),
                       worst=worst, details={"slack": slack, "rows": results})
