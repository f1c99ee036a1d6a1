"""Increasing stable process (jump density alpha * x^(-alpha-1)), its first
passage over a level, the limiting overshoot law, and rejection sampling of
the process conditioned to overshoot by at most epsilon.

Simulation truncates jumps below `delta` (the remaining jump intensity is
exactly delta^(-alpha)) and can compensate the omitted mass by a linear
drift alpha*delta^(1-alpha)/(1-alpha) per unit time.  Overshoot statistics
default to no drift: a drift can cross a level continuously, which the pure
jump process almost surely never does.
"""

import io
import math
from dataclasses import dataclass

import numpy as np

from nonovershoot import kernels
from nonovershoot.errors import AttemptsExhausted
from nonovershoot.paths import JumpSkeleton, PassageRecord
from nonovershoot.quadrature import cum_gl01
from nonovershoot.rng import TAG_SUBORDINATOR, as_stream, replica_keys

__all__ = ["SubordinatorConfig", "truncation_drift", "sample_passage",
           "passage_batch", "value_batch", "overshoot_cdf", "overshoot_pdf",
           "phi_alpha", "phi_alpha_small_y_limit", "sample_conditioned",
           "conditioned_batch", "passage_csv"]


@dataclass(frozen=True)
class SubordinatorConfig:
    """Truncation scheme for the stable subordinator, tail index alpha."""

    alpha: float
    delta: float = 1e-4
    drift_comp: bool = True

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.delta <= 0:
            raise ValueError("delta must be positive")

    @property
    def jump_rate(self) -> float:
        return self.delta ** (-self.alpha)

    @property
    def drift(self) -> float:
        return truncation_drift(self.alpha, self.delta) if self.drift_comp else 0.0


def truncation_drift(alpha: float, delta: float) -> float:
    """Mean of the omitted jumps below delta per unit time."""
    return alpha * delta ** (1.0 - alpha) / (1.0 - alpha)


# ---------------------------------------------------------------------------
# simulation

def sample_passage(config: SubordinatorConfig, rng, level: float = 1.0,
                   with_skeleton: bool = False, max_jumps: int = 100_000_000) -> PassageRecord:
    """One passage of the truncated subordinator over `level`.

    Scalar reference implementation; consumes the stream exactly like the
    batch kernels (two uniforms per jump), so a record is reproducible from
    its stream key alone.
    """
    stream = as_stream(rng)
    alpha, delta, drift = config.alpha, config.delta, config.drift
    rate = config.jump_rate
    t = x = 0.0
    times, sizes = [], []
    for _ in range(max_jumps):
        gap = -math.log(stream.uniform()) / rate
        if drift > 0.0 and x + drift * gap >= level:
            tau = t + (level - x) / drift
            return PassageRecord(
                skeleton=_maybe_skeleton(times, sizes, with_skeleton),
                tau=tau, chi=0.0, weight=1.0, hit=True,
                meta={"drift_crossing": True, "n_jumps": len(times)})
        x += drift * gap
        t += gap
        size = delta * stream.uniform() ** (-1.0 / alpha)
        x += size
        times.append(t)
        sizes.append(size)
        if x >= level:
            return PassageRecord(
                skeleton=_maybe_skeleton(times, sizes, with_skeleton),
                tau=t, chi=x - level, weight=1.0, hit=True,
                meta={"drift_crossing": False, "n_jumps": len(times)})
    return PassageRecord(skeleton=None, tau=t, chi=float("nan"), weight=1.0,
                         hit=False, budget_exhausted=True,
                         meta={"drift_crossing": False, "n_jumps": len(times)})


def _maybe_skeleton(times, sizes, keep):
    if not keep:
        return None
    return JumpSkeleton(np.asarray(times), np.asarray(sizes), origin=0.0)


def passage_batch(config: SubordinatorConfig, n: int, seed: int, level: float = 1.0,
                  start_index: int = 0, max_jumps: int = 100_000_000):
    """(tau, chi, drift_cross, njumps, budget) arrays for n replicas."""
    keys = replica_keys(seed, TAG_SUBORDINATOR, n, start_index)
    return kernels.sub_passage(keys, config.alpha, config.delta, config.drift,
                               level=level, max_jumps=max_jumps)


def value_batch(config: SubordinatorConfig, n: int, seed: int, horizon: float,
                start_index: int = 0):
    """(value at horizon, jump counts) for n replicas."""
    keys = replica_keys(seed, TAG_SUBORDINATOR, n, start_index)
    return kernels.sub_value(keys, config.alpha, config.delta, config.drift, horizon)


# ---------------------------------------------------------------------------
# the limiting overshoot law

def _phi_pieces(alpha: float, y: np.ndarray) -> np.ndarray:
    """integral_0^y u^(-alpha) (1+u)^(-1) du, vectorized, both endpoint
    singularities removed by power substitutions."""
    y = np.asarray(y, dtype=float)
    p_low = 1.0 / (1.0 - alpha)
    p_high = 1.0 / alpha
    low_part = cum_gl01(lambda v: 1.0 / (1.0 + v**p_low),
                        np.minimum(y, 1.0) ** (1.0 - alpha)) * p_low
    out = low_part
    big = y > 1.0
    if np.any(big):
        h2 = lambda v: 1.0 / (1.0 + v**p_high)
        uppers = np.where(big, y, 1.0) ** (-alpha)
        full = cum_gl01(h2, np.ones(1))[0]
        out = out + np.where(big, (full - cum_gl01(h2, uppers)) * p_high, 0.0)
    return out


def phi_alpha(alpha: float, y) -> np.ndarray | float:
    """Limiting overshoot CDF: (sin pi a / pi) * integral_0^y u^-a (1+u)^-1 du.

    Accepts scalars, arrays, and infinity (total mass from quadrature, not
    hard-coded, so normalization stays a checkable statement).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    scalar = np.ndim(y) == 0
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(y < 0):
        raise ValueError("y must be nonnegative")
    out = np.empty_like(y)
    fin = np.isfinite(y)
    if alpha == 0.5:
        out[fin] = (2.0 / math.pi) * np.arctan(np.sqrt(y[fin]))
    else:
        out[fin] = (math.sin(math.pi * alpha) / math.pi) * _phi_pieces(alpha, y[fin])
    if np.any(~fin):
        total = _phi_pieces(alpha, np.array([np.inf]))[0] if alpha != 0.5 \
            else math.pi / math.sin(math.pi * alpha)
        out[~fin] = (math.sin(math.pi * alpha) / math.pi) * total
    return float(out[0]) if scalar else out


def overshoot_cdf(alpha: float, x):
    """CDF of the scaled overshoot; coincides with phi_alpha."""
    return phi_alpha(alpha, x)


def overshoot_pdf(alpha: float, x):
    """Density (sin pi a / pi) x^-a (1+x)^-1 on (0, inf)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if np.any(x < 0):
        raise ValueError("x must be nonnegative")
    with np.errstate(divide="ignore"):
        out = (math.sin(math.pi * alpha) / math.pi) * x ** (-alpha) / (1.0 + x)
    return float(out[0]) if scalar else out


def phi_alpha_small_y_limit(alpha: float) -> float:
    """lim_{y->0} y^(alpha-1) * phi_alpha(y) = sin(pi a) / (pi (1-a))."""
    return math.sin(math.pi * alpha) / (math.pi * (1.0 - alpha))


# ---------------------------------------------------------------------------
# conditioning on a small overshoot (rejection)

def sample_conditioned(config: SubordinatorConfig, epsilon: float, rng,
                       max_attempts: int = 1_000_000,
                       with_skeleton: bool = False) -> PassageRecord:
    """First passage conditioned on overshoot <= epsilon, by rejection.

    The acceptance probability is phi_alpha(epsilon) for passage over level
    1, so budget at least ~10/phi_alpha(epsilon) attempts.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    stream = as_stream(rng)
    for attempt in range(1, max_attempts + 1):
        rec = sample_passage(config, stream.substream(attempt), with_skeleton=with_skeleton)
        if rec.hit and rec.chi <= epsilon:
            meta = dict(rec.meta)
            meta["attempts"] = attempt
            meta["acceptance_rate"] = 1.0 / attempt
            return PassageRecord(rec.skeleton, rec.tau, rec.chi, rec.weight,
                                 True, meta=meta)
    raise AttemptsExhausted(
        f"no acceptance in {max_attempts} attempts (epsilon={epsilon})",
        acceptance_rate=0.0)


def conditioned_batch(config: SubordinatorConfig, epsilon: float, n_accept: int,
                      seed: int, max_attempts: int = 10_000_000):
    """Accepted (tau, chi) samples plus attempt count, batched rejection.

    A drift crossing (creep) satisfies the conditioning event - it stands in
    for the sub-truncation jump crossings of the exact process - so it is
    accepted like any other overshoot <= epsilon.  The attempt count is
    exact: attempts up to and including the one yielding the last acceptance.
    """
    taus = []
    chis = []
    attempts = 0
    chunk = max(1024, int(n_accept / max(phi_alpha(config.alpha, epsilon), 1e-6)) // 4)
    while len(taus) < n_accept:
        if attempts >= max_attempts:
            raise AttemptsExhausted(
                f"{len(taus)} acceptances in {attempts} attempts",
                acceptance_rate=len(taus) / max(attempts, 1))
        m = min(chunk, max_attempts - attempts)
        tau, chi, dcross, _, budget = passage_batch(
            config, m, seed, start_index=attempts)
        ok = (chi <= epsilon) & (budget == 0)
        hits = np.nonzero(ok)[0]
        need = n_accept - len(taus)
        if hits.size >= need:
            attempts += int(hits[need - 1]) + 1
            hits = hits[:need]
        else:
            attempts += m
        taus.extend(tau[hits].tolist())
        chis.extend(chi[hits].tolist())
    return np.array(taus), np.array(chis), attempts


def passage_csv(taus, chis, accepted) -> str:
    """CSV of (replica, tau, chi, accepted) for plotting."""
    buf = io.StringIO()
    buf.write("replica,tau,chi,accepted\n")
    for i, (t, c, a) in enumerate(zip(taus, chis, accepted)):
        buf.write(f"{i},{float(t)!r},{float(c)!r},{int(a)}\n")
    return buf.getvalue()
