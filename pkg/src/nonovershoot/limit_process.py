"""The non-overshooting limit process.

Construction (the constructive half of its existence proof): drive an
increasing pure-jump process L with jump density
``(1-x)^(alpha-1) * alpha * x^(-alpha-1)`` on (0,1); the product
``V(t) = prod_{s<=t} (1 - dL(s))`` solves the Doleans equation
``V(t) = 1 - int_0^t V(s-) dL(s)``, decays to 0, and the time-changed
process ``1 - V(sigma(t))`` with ``sigma = inf{s: int_0^s V^alpha > t}`` is
the conditioned-not-to-overshoot process.  Its passage time of level 1 is
``int_0^infty V(q)^alpha dq``.

``ln V`` is a pure-jump Levy process with jump density
``alpha e^(alpha x) (1-e^x)^(-alpha-1)`` on x < 0, which is what we
simulate: state-independent, with a one-dimensional truncation knob.  The
driver tail has the closed form ``Pi((z,1)) = ((1-z)/z)^alpha``, giving an
exact inverse-CDF jump sampler and an exact truncated rate.  Jumps of
``ln V`` smaller than `delta_log` are dropped and their mean is folded into
the following jump, keeping paths piecewise constant so every pathwise
identity below is exact arithmetic.
"""

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from nonovershoot import kernels
from nonovershoot.errors import OutOfRange
from nonovershoot.paths import JumpSkeleton, sigma_inverse, sigma_of
from nonovershoot.quadrature import alg_weighted_quad
from nonovershoot.rng import TAG_LOGBREVE, Stream, as_stream, replica_keys

__all__ = ["LogBreveSkeleton", "driver_rate", "driver_tail", "small_jump_drift",
           "sample_log_breve", "extend_log_breve", "build_xtilde",
           "doleans_residual", "tau_tilde", "TauTilde", "tau_batch",
           "jump_kernel", "kernel_mean_jump", "moment_integral", "moment_tau",
           "exp_moment_bound"]


# ---------------------------------------------------------------------------
# driving measure: closed forms

def driver_tail(alpha: float, z: float) -> float:
    """Mass of the driver jump law above z in (0, 1): ((1-z)/z)^alpha."""
    if not 0.0 < z < 1.0:
        raise ValueError("z must lie in (0, 1)")
    return ((1.0 - z) / z) ** alpha


def driver_rate(alpha: float, delta_log: float) -> float:
    """Intensity of ln-path jumps below -delta_log: (e^delta - 1)^(-alpha)."""
    return math.expm1(delta_log) ** (-alpha)


def small_jump_drift(alpha: float, delta_log: float) -> float:
    """Mean of the omitted ln-path jumps per unit time (negative).

    integral of ln(1-y) over the driver density on (0, 1 - e^(-delta_log)).
    """
    z0 = -math.expm1(-delta_log)

    def g(y):
        if y <= 0.0:
            return -alpha
        return alpha * (math.log1p(-y) / y) * (1.0 - y) ** (alpha - 1.0)

    return alg_weighted_quad(g, 0.0, z0, -alpha, 0.0)


# ---------------------------------------------------------------------------
# simulation

@dataclass(frozen=True)
class LogBreveSkeleton:
    """Skeleton of the decaying ln-path, plus its stream continuation state.

    All jumps are <= -delta_log (plus the folded drift share); the path is
    nonincreasing from 0.  (key, ctr, t_end) let the same trajectory be
    extended deterministically when a longer horizon is needed.
    """

    skeleton: JumpSkeleton
    alpha: float
    delta_log: float
    drift_rate: float
    key: int
    ctr: int
    t_end: float

    def breve_skeleton(self) -> JumpSkeleton:
        """The multiplicative-decay path V = exp(ln-path), origin 1."""
        vals = np.exp(np.cumsum(self.skeleton.sizes))
        return JumpSkeleton(self.skeleton.times.copy(),
                            np.diff(np.concatenate([[1.0], vals])), origin=1.0)


def sample_log_breve(alpha: float, delta_log: float, horizon_t: float, rng,
                     drift_comp: bool = True) -> LogBreveSkeleton:
    """Simulate the ln-path to a fixed horizon.

    Two uniforms per jump (gap, size), matching the batch kernel's stream
    consumption exactly.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if delta_log <= 0:
        raise ValueError("delta_log must be positive")
    stream = as_stream(rng)
    mu = small_jump_drift(alpha, delta_log) if drift_comp else 0.0
    lbs = LogBreveSkeleton(JumpSkeleton(np.zeros(0), np.zeros(0), origin=0.0),
                           alpha, delta_log, mu, stream.key, stream.ctr, 0.0)
    return extend_log_breve(lbs, horizon_t)


def extend_log_breve(lbs: LogBreveSkeleton, new_horizon: float) -> LogBreveSkeleton:
    """Continue the same trajectory to a longer horizon (deterministic)."""
    if new_horizon <= lbs.t_end:
        return lbs
    alpha = lbs.alpha
    rate = driver_rate(alpha, lbs.delta_log)
    emdelta = math.expm1(lbs.delta_log)
    stream = Stream(lbs.key, lbs.ctr)
    # resume from the last jump epoch: the pending gap draw was rewound when
    # the previous horizon cut it off, so replaying it reproduces exactly the
    # trajectory a single longer run would have produced
    times = list(lbs.skeleton.times)
    sizes = list(lbs.skeleton.sizes)
    t = times[-1] if times else 0.0
    while True:
        gap = -math.log(stream.uniform()) / rate
        if t + gap > new_horizon:
            # the gap draw is not consumed: rewind so the continuation
            # re-draws it against the extended horizon
            stream.ctr -= 1
            break
        t += gap
        w = emdelta / (emdelta + stream.uniform() ** (1.0 / alpha))
        times.append(t)
        sizes.append(math.log1p(-w) + lbs.drift_rate * gap)
    return replace(lbs, skeleton=JumpSkeleton(np.array(times), np.array(sizes)),
                   ctr=stream.ctr, t_end=new_horizon)


# ---------------------------------------------------------------------------
# pathwise constructions

def build_xtilde(lbs: LogBreveSkeleton) -> JumpSkeleton:
    """The non-overshooting path: increasing, values in [0, 1).

    Jump epochs are the exact time-change images of the decay path's jump
    epochs; sizes are the decay increments.
    """
    s_times = lbs.skeleton.times
    if s_times.size == 0:
        return JumpSkeleton(np.zeros(0), np.zeros(0), origin=0.0)
    v = np.exp(np.cumsum(lbs.skeleton.sizes))
    v_prev = np.concatenate([[1.0], v[:-1]])
    gaps = np.diff(np.concatenate([[0.0], s_times]))
    t_epochs = np.cumsum(v_prev**lbs.alpha * gaps)
    sizes = v_prev - v
    # once the decay is so deep that clock increments fall below float
    # resolution, the transformed path has converged: drop the unresolvable
    # jumps (their sizes are at the same scale)
    stalled = np.nonzero(np.diff(t_epochs) <= 0.0)[0]
    if stalled.size:
        cut = int(stalled[0]) + 1
        t_epochs, sizes = t_epochs[:cut], sizes[:cut]
    return JumpSkeleton(t_epochs, sizes, origin=0.0)


def doleans_residual(lbs: LogBreveSkeleton) -> float:
    """Max absolute residual of V(t) = 1 - int_0^t V(s-) dL(s) on the skeleton.

    The driver increments are recovered from the path itself
    (dL_i = 1 - V_i/V_{i-1}); the integral is a compensated prefix sum, so
    the residual measures pure floating-point error (scale: initial value 1).
    """
    jumps = lbs.skeleton.sizes
    if jumps.size == 0:
        return 0.0
    v = np.exp(np.cumsum(jumps))
    v_prev = np.concatenate([[1.0], v[:-1]])
    dl = -np.expm1(jumps)
    terms = v_prev * dl
    # Neumaier compensated cumulative sum
    total = 0.0
    comp = 0.0
    worst = 0.0
    for i in range(terms.size):
        x = terms[i]
        s = total + x
        if abs(total) >= abs(x):
            comp += (total - s) + x
        else:
            comp += (x - s) + total
        total = s
        resid = abs(v[i] - (1.0 - (total + comp)))
        if resid > worst:
            worst = resid
    return worst


class TauTilde(NamedTuple):
    value: float
    tail_bound: float


def tau_tilde(lbs: LogBreveSkeleton, tol: float = 1e-10,
              max_doublings: int = 60) -> TauTilde:
    """Passage time of the limit process: int_0^infty V(q)^alpha dq.

    Summed exactly per segment; the horizon doubles until the mean of the
    unsimulated tail, V(T)^alpha * E[tau] * 2, is below tol.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    e_tau = moment_tau(1, lbs.alpha)
    tail = math.inf
    for _ in range(max_doublings):
        v_end = math.exp(float(np.sum(lbs.skeleton.sizes)))
        tail = v_end**lbs.alpha * e_tau * 2.0
        if tail < tol:
            break
        lbs = extend_log_breve(lbs, max(2.0 * lbs.t_end, 1.0))
    value = float(sigma_inverse(lbs.breve_skeleton(), lbs.alpha, lbs.t_end))
    return TauTilde(value, tail_bound=tail)


def tau_batch(alpha: float, n: int, seed: int, delta_log: float = 1e-4,
              tol: float = 1e-8, drift_comp: bool = True,
              t_mark: Optional[float] = None, start_index: int = 0):
    """Batch passage times of the limit process via the hot kernels.

    Returns (tau, final path value, marked level, marked compensator
    integral, budget flags); the marked outputs are NaN-free only when
    t_mark is given.
    """
    keys = replica_keys(seed, TAG_LOGBREVE, n, start_index)
    rate = driver_rate(alpha, delta_log)
    emdelta = math.expm1(delta_log)
    mu = small_jump_drift(alpha, delta_log) if drift_comp else 0.0
    v_stop = (tol / (2.0 * moment_tau(1, alpha))) ** (1.0 / alpha)
    mark = -1.0 if t_mark is None else float(t_mark)
    return kernels.breve_paths(keys, alpha, rate, emdelta, mu, v_stop, mark)


def xtilde_at(lbs: LogBreveSkeleton, t: float) -> float:
    """Level of the non-overshooting path at clock time t (exact)."""
    breve = lbs.breve_skeleton()
    total = sigma_inverse(breve, lbs.alpha, lbs.t_end)
    if t >= total:
        return 1.0 - breve.terminal()
    s = sigma_of(breve, lbs.alpha, t)
    return 1.0 - float(breve.value(s))


# ---------------------------------------------------------------------------
# the state-dependent jump kernel and the passage-time moments

def jump_kernel(alpha: float, y: float, x: float) -> float:
    """Jump intensity density of the limit process at level y, jump size x:
    (1 - x/(1-y))^(alpha-1) * alpha * x^(-alpha-1) on 0 < x < 1-y,
    zero for levels outside [0, 1)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if y < 0.0 or y >= 1.0 or x <= 0.0 or x >= 1.0 - y:
        return 0.0
    return (1.0 - x / (1.0 - y)) ** (alpha - 1.0) * alpha * x ** (-alpha - 1.0)


def kernel_mean_jump(alpha: float, y: float) -> float:
    """integral x K(y; dx) = alpha B(alpha, 1-alpha) (1-y)^(1-alpha)."""
    if y < 0.0 or y >= 1.0:
        return 0.0
    beta = math.gamma(alpha) * math.gamma(1.0 - alpha)
    return alpha * beta * (1.0 - y) ** (1.0 - alpha)


def moment_integral(alpha: float, k: int) -> float:
    """I_k = integral_0^1 (1 - x^(alpha k)) alpha x^(alpha-1) (1-x)^(-alpha-1) dx.

    Evaluated as alpha * integral of (1-x^u)/(1-x) against the weight
    x^(alpha-1) (1-x)^(-alpha); both endpoint singularities are handled by
    the weighted quadrature.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    u = alpha * k

    def g(x):
        if x >= 1.0:
            return u
        if x <= 0.0:
            return 1.0
        return -math.expm1(u * math.log(x)) / (1.0 - x)

    return alpha * alg_weighted_quad(g, 0.0, 1.0, alpha - 1.0, -alpha)


def moment_tau(n: int, alpha: float) -> float:
    """n-th moment of the passage time: n! / prod_{k<=n} I_k."""
    if n < 1:
        raise ValueError("n must be >= 1")
    prod = 1.0
    for k in range(1, n + 1):
        prod *= moment_integral(alpha, k)
    return math.factorial(n) / prod


def exp_moment_bound(alpha: float, c: float) -> float:
    """Upper bound 1/(1 - c E[tau]) on E exp(c tau), valid for c < 1/E[tau]."""
    e_tau = moment_tau(1, alpha)
    if c >= 1.0 / e_tau:
        raise OutOfRange(f"c={c} is not below 1/E[tau]={1.0 / e_tau}")
    if c < 0:
        raise OutOfRange("c must be nonnegative")
    return 1.0 / (1.0 - c * e_tau)
