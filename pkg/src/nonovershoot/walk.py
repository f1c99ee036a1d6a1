"""Random-walk simulation under both measures and the tilted estimators.

Under the tilted law the walk drifts to +infinity (infinite mean), so first
passage of any level is almost sure and fast; the importance weight
``exp(-gamma * overshoot)`` turns tilted passage statistics into original-
measure probabilities:

    P(ruin over r)        = e^{-gamma r} * E[weight]
    P(event | ruin)       = E[weight ; event] / E[weight]   (self-normalized)

Batch simulation runs through the backend kernels; single paths are
reconstructed vectorially from the same counter streams (one uniform per
step), so a record's skeleton is reproducible from its stream key alone.
"""

import math
from dataclasses import dataclass

import numpy as np

from nonovershoot import kernels
from nonovershoot.errors import BudgetExceeded, DegenerateWeights
from nonovershoot.model import ModelSpec, pack_original, pack_tilted, tail_F
from nonovershoot.paths import JumpSkeleton, PassageRecord
from nonovershoot.rng import TAG_CRUDE, TAG_WALK, as_stream, replica_keys, u01_block
from nonovershoot.stats import Estimate, aggregate

__all__ = ["WeightedSample", "simulate_passage_star", "passage_arrays",
           "estimate_ruin", "crude_ruin", "conditional_functional", "u_of",
           "DEFAULT_MAX_STEPS"]

DEFAULT_MAX_STEPS = 1_000_000_000


@dataclass(frozen=True)
class WeightedSample:
    """(value, weight) pairs backing a conditional-law estimate."""

    values: np.ndarray
    weights: np.ndarray


def _batch_keys(rng, tag, n):
    stream = as_stream(rng)
    keys = replica_keys(stream.key, tag, n, start_index=stream.ctr)
    stream.ctr += n
    return keys


def _reconstruct_increments(spec: ModelSpec, key: int, n_steps: int) -> np.ndarray:
    """Replay the tilted increments of one replica from its stream key."""
    u = u01_block(int(key), 0, int(n_steps))
    kinds, P, pv, pc, nv, nc = pack_tilted(spec)
    return kernels._draw_tilted_np(u, int(kinds[0]), int(kinds[1]), P, pv, pc, nv, nc)


def simulate_passage_star(spec: ModelSpec, r: float, rng,
                          max_steps: int = DEFAULT_MAX_STEPS,
                          with_skeleton: bool = True) -> PassageRecord:
    """One tilted-measure passage over level r, with the full step skeleton."""
    if r <= 0:
        raise ValueError("r must be positive")
    keys = _batch_keys(rng, TAG_WALK, 1)
    tau, chi, _, budget = kernels.walk_passage(keys, r, max_steps, -1, pack_tilted(spec))
    if budget[0]:
        raise BudgetExceeded(f"no passage of level {r} within {max_steps} steps")
    tau_steps = int(tau[0])
    skel = None
    if with_skeleton:
        inc = _reconstruct_increments(spec, keys[0], tau_steps)
        skel = JumpSkeleton(np.arange(1, tau_steps + 1, dtype=float), inc, origin=0.0)
    weight = math.exp(-spec.gamma * chi[0])
    return PassageRecord(skeleton=skel, tau=float(tau_steps), chi=float(chi[0]),
                         weight=weight, hit=True,
                         meta={"stream_key": int(keys[0]), "level": float(r)})


def passage_arrays(spec: ModelSpec, r: float, n: int, rng,
                   max_steps: int = DEFAULT_MAX_STEPS, mark_step: int = -1):
    """Batch passage: dict of per-replica arrays (tilted measure).

    mark_step >= 0 additionally records the walk value at step
    min(mark_step, tau) - the stopped path's marginal at that step.
    """
    keys = _batch_keys(rng, TAG_WALK, n)
    tau, chi, mark, budget = kernels.walk_passage(keys, r, max_steps, mark_step,
                                                  pack_tilted(spec))
    ok = budget == 0
    weights = np.where(ok, np.exp(-spec.gamma * np.where(ok, chi, 0.0)), 0.0)
    return {"tau_steps": tau, "chi": chi, "weight": weights, "mark": mark,
            "budget": budget, "keys": keys}


def estimate_ruin(spec: ModelSpec, r: float, n_replicas: int, rng,
                  max_steps: int = DEFAULT_MAX_STEPS) -> Estimate:
    """Unbiased ruin probability P(walk ever reaches r) by tilting.

    The estimate is e^{-gamma r} times the mean weight; at levels where
    e^{-gamma r} underflows, meta['tilted_mean'] and meta['log_factor']
    carry the two factors separately.
    """
    out = passage_arrays(spec, r, n_replicas, rng, max_steps)
    ok = out["budget"] == 0
    w = out["weight"][ok]
    base = aggregate(w, budget_exhausted=int((~ok).sum()))
    scale = math.exp(-spec.gamma * r)
    return Estimate(base.value * scale, base.stderr * scale, base.n,
                    base.n_effective, base.budget_exhausted,
                    meta={"tilted_mean": base.value, "tilted_stderr": base.stderr,
                          "log_factor": -spec.gamma * r})


def crude_ruin(spec: ModelSpec, r: float, horizon: int, n_replicas: int, rng) -> Estimate:
    """Original-measure frequency of reaching r within `horizon` steps.

    Lower-biased for P(ruin); the missing mass is at most e^{-gamma r}
    (reported as meta['bias_bound']).
    """
    if horizon <= 0:
        return Estimate(0.0, 0.0, n_replicas, float(n_replicas),
                        meta={"bias_bound": math.exp(-spec.gamma * r)})
    keys = _batch_keys(rng, TAG_CRUDE, n_replicas)
    hit = kernels.walk_crude(keys, r, horizon, pack_original(spec))
    est = aggregate(hit.astype(float))
    return Estimate(est.value, est.stderr, est.n, est.n_effective,
                    meta={"bias_bound": math.exp(-spec.gamma * r)})


def u_of(spec: ModelSpec, level: float, n_replicas: int, rng,
         max_steps: int = DEFAULT_MAX_STEPS) -> Estimate:
    """Mean importance weight at the given passage level (always <= 1)."""
    out = passage_arrays(spec, level, n_replicas, rng, max_steps)
    ok = out["budget"] == 0
    return aggregate(out["weight"][ok], budget_exhausted=int((~ok).sum()))


def conditional_functional(spec: ModelSpec, r: float, functional, n_replicas: int,
                           rng, max_steps: int = DEFAULT_MAX_STEPS,
                           with_skeleton: bool = True):
    """Self-normalized estimate of E[functional | the walk reaches r].

    `functional` maps a PassageRecord to a float.  Returns (Estimate,
    WeightedSample); the sample backs distribution-level statistics.
    """
    out = passage_arrays(spec, r, n_replicas, rng, max_steps)
    ok = out["budget"] == 0
    values = np.empty(int(ok.sum()))
    weights = out["weight"][ok]
    tail_r = float(tail_F(spec, r))
    j = 0
    for i in np.nonzero(ok)[0]:
        tau_steps = int(out["tau_steps"][i])
        skel = None
        if with_skeleton:
            inc = _reconstruct_increments(spec, out["keys"][i], tau_steps)
            skel = JumpSkeleton(np.arange(1, tau_steps + 1, dtype=float), inc)
        rec = PassageRecord(skeleton=skel, tau=float(tau_steps),
                            chi=float(out["chi"][i]), weight=float(weights[j]),
                            hit=True, meta={"level": r, "tail_at_level": tail_r})
        values[j] = functional(rec)
        j += 1
    if not np.any(weights > 0):
        raise DegenerateWeights("importance weights sum to zero")
    est = aggregate(values, weights, budget_exhausted=int((~ok).sum()))
    return est, WeightedSample(values=values, weights=weights)
