"""Hot Monte Carlo inner loops, in two interchangeable implementations.

Every kernel exists as a numba ``@njit(parallel=True)`` function operating on
scalars per replica and as a vectorized pure-numpy fallback.  Both consume
identical counter-based uniforms (see :mod:`nonovershoot.rng`): replica i of a
batch owns stream ``keys[i]`` and its j-th uniform is a pure function of
``(keys[i], j)``, so results do not depend on execution order, thread count,
or backend (up to last-ulp libm differences between the two backends).

Kernels
-------
walk_passage      tilted-measure walk until it reaches a level
walk_crude        original-measure walk with a step horizon
ladder            first strict ascending ladder epoch/height (tilted measure)
sub_passage       truncated stable subordinator until it passes a level
sub_value         truncated stable subordinator value at a fixed time
breve_paths       multiplicative decay paths driving the non-overshooting
                  process: passage time integral, marked values

Uniform-consumption contracts (the numpy fallback relies on them):
tilted walk draws use exactly 1 uniform per step; original-measure draws use
1 uniform for the branch/left value plus rejection pairs for continuous
positive parts; subordinator and decay paths use exactly 2 uniforms per jump.
"""

import math

import numpy as np

from nonovershoot import backend as _backend
from nonovershoot import rng as _rng

__all__ = ["walk_passage", "walk_crude", "ladder", "sub_passage", "sub_value",
           "breve_paths"]

_E = math.e

# ---------------------------------------------------------------------------
# numpy draw transforms (vectorized); the numba twins live further down

def _draw_tilted_np(u, tail_kind, left_kind, P, pos_vals, pos_cum, neg_vals, neg_cum):
    q, c, al, x0, b, rate, at, h = P[0], P[1], P[2], P[3], P[4], P[5], P[6], P[7]
    out = np.empty_like(u)
    left = u < q
    if left.any():
        if left_kind == 0:
            out[left] = np.log(u[left] / q) / rate
        elif left_kind == 1:
            out[left] = at
        else:
            idx = np.minimum(np.searchsorted(neg_cum, u[left] / q), len(neg_vals) - 1)
            out[left] = neg_vals[idx]
    pos = ~left
    if pos.any():
        v = (u[pos] - q) / (1.0 - q)
        out[pos] = _invert_positive_np(v, tail_kind, al, x0, b, h, pos_vals, pos_cum)
    return out + c


def _invert_positive_np(v, tail_kind, al, x0, b, h, pos_vals, pos_cum):
    if tail_kind == 0:
        return x0 * ((1.0 - v) ** (-1.0 / al) - 1.0)
    if tail_kind == 1:
        target = 1.0 - v
        hi = x0 * ((target / (1.0 + b)) ** (-1.0 / al) - 1.0) + 1.0
        lo = np.zeros_like(v)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            t = (1.0 + mid / x0) ** (-al) / (1.0 + b / np.log(_E + mid))
            above = t > target
            lo = np.where(above, mid, lo)
            hi = np.where(above, hi, mid)
        return 0.5 * (lo + hi)
    if tail_kind == 2:
        z = (x0 / h) * ((1.0 - v) ** (-1.0 / al) - 1.0)
        return h * np.maximum(0.0, np.ceil(z) - 1.0)
    idx = np.minimum(np.searchsorted(pos_cum, v), len(pos_vals) - 1)
    return pos_vals[idx]


def _walk_passage_np(keys, level, max_steps, mark_step,
                     tail_kind, left_kind, P, pos_vals, pos_cum, neg_vals, neg_cum):
    n = keys.shape[0]
    out_tau = np.zeros(n)
    out_chi = np.full(n, np.nan)
    out_mark = np.zeros(n)
    out_budget = np.zeros(n, dtype=np.int64)
    s = np.zeros(n)
    live = np.arange(n)
    step = 0
    while live.size and step < max_steps:
        step += 1
        u = _rng.u01_keys(keys[live], np.full(live.size, step - 1, dtype=np.uint64))
        s[live] += _draw_tilted_np(u, tail_kind, left_kind, P,
                                   pos_vals, pos_cum, neg_vals, neg_cum)
        if step == mark_step:
            out_mark[live] = s[live]
        crossed = s[live] >= level
        if crossed.any():
            done = live[crossed]
            out_tau[done] = step
            out_chi[done] = s[done] - level
            if step < mark_step:
                out_mark[done] = s[done]
            live = live[~crossed]
    if live.size:
        out_budget[live] = 1
        out_tau[live] = max_steps
        if step < mark_step:
            out_mark[live] = s[live]
    return out_tau, out_chi, out_mark, out_budget


def _draw_original_np(keys, ctrs, tail_kind, left_kind, P,
                      pos_vals, pos_cum, neg_vals, neg_cum):
    """One original-measure increment per replica; returns (x, new ctrs)."""
    q, c, al, x0, b, rate, at, h, gamma = P
    n = keys.shape[0]
    out = np.empty(n)
    u = _rng.u01_keys(keys, ctrs)
    ctrs = ctrs + np.uint64(1)
    left = u < q
    if left.any():
        if left_kind == 0:
            out[left] = np.log(u[left] / q) / rate
        elif left_kind == 1:
            out[left] = at
        else:
            idx = np.minimum(np.searchsorted(neg_cum, u[left] / q), len(neg_vals) - 1)
            out[left] = neg_vals[idx]
    pos = ~left
    if pos.any():
        if tail_kind in (0, 1):
            pending = np.nonzero(pos)[0]
            while pending.size:
                up = _rng.u01_keys(keys[pending], ctrs[pending])
                ua = _rng.u01_keys(keys[pending], ctrs[pending] + np.uint64(1))
                ctrs[pending] += np.uint64(2)
                y = _invert_positive_np(up, tail_kind, al, x0, b, h, pos_vals, pos_cum)
                ok = ua < np.exp(-gamma * y)
                out[pending[ok]] = y[ok]
                pending = pending[~ok]
        else:
            v = (u[pos] - q) / (1.0 - q)
            idx = np.minimum(np.searchsorted(pos_cum, v), len(pos_vals) - 1)
            out[pos] = pos_vals[idx]
    return out + c, ctrs


def _walk_crude_np(keys, level, horizon,
                   tail_kind, left_kind, P, pos_vals, pos_cum, neg_vals, neg_cum):
    n = keys.shape[0]
    hit = np.zeros(n, dtype=np.int64)
    s = np.zeros(n)
    ctrs = np.zeros(n, dtype=np.uint64)
    live = np.arange(n)
    for _ in range(int(horizon)):
        if not live.size:
            break
        x, new_ctrs = _draw_original_np(keys[live], ctrs[live], tail_kind, left_kind,
                                        P, pos_vals, pos_cum, neg_vals, neg_cum)
        ctrs[live] = new_ctrs
        s[live] += x
        crossed = s[live] >= level
        hit[live[crossed]] = 1
        live = live[~crossed]
    return hit


def _ladder_np(keys, max_steps,
               tail_kind, left_kind, P, pos_vals, pos_cum, neg_vals, neg_cum):
    n = keys.shape[0]
    t1 = np.zeros(n)
    zeta = np.full(n, np.nan)
    budget = np.zeros(n, dtype=np.int64)
    s = np.zeros(n)
    live = np.arange(n)
    step = 0
    while live.size and step < max_steps:
        step += 1
        u = _rng.u01_keys(keys[live], np.full(live.size, step - 1, dtype=np.uint64))
        s[live] += _draw_tilted_np(u, tail_kind, left_kind, P,
                                   pos_vals, pos_cum, neg_vals, neg_cum)
        crossed = s[live] > 0.0
        done = live[crossed]
        t1[done] = step
        zeta[done] = s[done]
        live = live[~crossed]
    if live.size:
        budget[live] = 1
        t1[live] = max_steps
    return t1, zeta, budget


def _sub_passage_np(keys, alpha, delta, drift, level, max_jumps):
    n = keys.shape[0]
    rate = delta ** (-alpha)
    tau = np.zeros(n)
    chi = np.full(n, np.nan)
    dcross = np.zeros(n, dtype=np.int64)
    njumps = np.zeros(n, dtype=np.int64)
    budget = np.zeros(n, dtype=np.int64)
    t = np.zeros(n)
    x = np.zeros(n)
    live = np.arange(n)
    j = 0
    while live.size and j < max_jumps:
        u1 = _rng.u01_keys(keys[live], np.full(live.size, 2 * j, dtype=np.uint64))
        gap = -np.log(u1) / rate
        if drift > 0.0:
            crossing = x[live] + drift * gap >= level
            if crossing.any():
                done = live[crossing]
                tau[done] = t[done] + (level - x[done]) / drift
                chi[done] = 0.0
                dcross[done] = 1
                njumps[done] = j
                keep = ~crossing
                live, gap = live[keep], gap[keep]
            x[live] += drift * gap
        t[live] += gap
        if not live.size:
            break
        u2 = _rng.u01_keys(keys[live], np.full(live.size, 2 * j + 1, dtype=np.uint64))
        x[live] += delta * u2 ** (-1.0 / alpha)
        j += 1
        crossed = x[live] >= level
        if crossed.any():
            done = live[crossed]
            tau[done] = t[done]
            chi[done] = x[done] - level
            njumps[done] = j
            live = live[~crossed]
    if live.size:
        budget[live] = 1
        tau[live] = t[live]
        njumps[live] = j
    return tau, chi, dcross, njumps, budget


def _sub_value_np(keys, alpha, delta, drift, horizon, max_jumps):
    n = keys.shape[0]
    rate = delta ** (-alpha)
    value = np.zeros(n)
    njumps = np.zeros(n, dtype=np.int64)
    t = np.zeros(n)
    x = np.zeros(n)
    live = np.arange(n)
    j = 0
    while live.size and j < max_jumps:
        u1 = _rng.u01_keys(keys[live], np.full(live.size, 2 * j, dtype=np.uint64))
        gap = -np.log(u1) / rate
        ends = t[live] + gap > horizon
        if ends.any():
            done = live[ends]
            value[done] = x[done] + drift * (horizon - t[done])
            njumps[done] = j
            keep = ~ends
            live, gap = live[keep], gap[keep]
        if not live.size:
            break
        t[live] += gap
        x[live] += drift * gap
        u2 = _rng.u01_keys(keys[live], np.full(live.size, 2 * j + 1, dtype=np.uint64))
        x[live] += delta * u2 ** (-1.0 / alpha)
        j += 1
    if live.size:
        value[live] = x[live] + drift * (horizon - t[live])
        njumps[live] = j
    return value, njumps


def _breve_paths_np(keys, alpha, rate, emdelta, mu_drift, v_stop, t_mark, max_jumps):
    n = keys.shape[0]
    val = np.ones(n)
    a_int = np.zeros(n)       # integral of value^alpha (the passage-time clock)
    b_int = np.zeros(n)       # integral of value (compensator cross-check)
    xmark = np.full(n, np.nan)
    bmark = np.full(n, np.nan)
    markdone = np.full(n, t_mark < 0.0)
    budget = np.zeros(n, dtype=np.int64)
    inv_alpha = 1.0 / alpha
    live = np.arange(n)
    j = 0
    while live.size and j < max_jumps:
        v = val[live]
        u1 = _rng.u01_keys(keys[live], np.full(live.size, 2 * j, dtype=np.uint64))
        gap = -np.log(u1) / rate
        va = v ** alpha
        if not markdone.all():
            crossing = (~markdone[live]) & (a_int[live] + va * gap > t_mark)
            if crossing.any():
                idx = live[crossing]
                dq = (t_mark - a_int[idx]) / va[crossing]
                xmark[idx] = 1.0 - v[crossing]
                bmark[idx] = b_int[idx] + v[crossing] * dq
                markdone[idx] = True
        a_int[live] += va * gap
        b_int[live] += v * gap
        u2 = _rng.u01_keys(keys[live], np.full(live.size, 2 * j + 1, dtype=np.uint64))
        shrink = u2**inv_alpha / (emdelta + u2**inv_alpha)
        if mu_drift != 0.0:
            shrink = shrink * np.exp(mu_drift * gap)
        val[live] = v * shrink
        j += 1
        live = live[val[live] > v_stop]
    if live.size:
        budget[live] = 1
    missing = ~markdone
    xmark[missing] = 1.0 - val[missing]
    bmark[missing] = b_int[missing]
    return a_int, val, xmark, bmark, budget


# ---------------------------------------------------------------------------
# numba twins

if _backend.has_numba():
    from numba import njit, prange

    _U64_GOLD = np.uint64(_rng.GOLD)
    _U64_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
    _U64_MIX2 = np.uint64(0x94D049BB133111EB)
    _U64_KEYC = np.uint64(0xDA942042E4DD58B5)
    _INV53 = 2.0 ** -53

    @njit(inline="always")
    def _mix64_nb(z):
        z = (z ^ (z >> np.uint64(30))) * _U64_MIX1
        z = (z ^ (z >> np.uint64(27))) * _U64_MIX2
        return z ^ (z >> np.uint64(31))

    @njit(inline="always")
    def _u01_nb(key, ctr):
        z = key + ctr * _U64_GOLD
        h = _mix64_nb(_mix64_nb(z) ^ (key * _U64_KEYC))
        return (np.float64(h >> np.uint64(11)) + 0.5) * _INV53

    @njit(inline="always")
    def _invert_positive_nb(v, tail_kind, al, x0, b, h, pos_vals, pos_cum):
        if tail_kind == 0:
            return x0 * ((1.0 - v) ** (-1.0 / al) - 1.0)
        if tail_kind == 1:
            target = 1.0 - v
            hi = x0 * ((target / (1.0 + b)) ** (-1.0 / al) - 1.0) + 1.0
            lo = 0.0
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                t = (1.0 + mid / x0) ** (-al) / (1.0 + b / np.log(_E + mid))
                if t > target:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)
        if tail_kind == 2:
            z = (x0 / h) * ((1.0 - v) ** (-1.0 / al) - 1.0)
            k = np.ceil(z) - 1.0
            if k < 0.0:
                k = 0.0
            return h * k
        idx = np.searchsorted(pos_cum, v)
        if idx >= len(pos_vals):
            idx = len(pos_vals) - 1
        return pos_vals[idx]

    @njit(inline="always")
    def _draw_tilted_nb(u, tail_kind, left_kind, P, pos_vals, pos_cum, neg_vals, neg_cum):
        q = P[0]
        c = P[1]
        if u < q:
            if left_kind == 0:
                return c + np.log(u / q) / P[5]
            if left_kind == 1:
                return c + P[6]
            idx = np.searchsorted(neg_cum, u / q)
            if idx >= len(neg_vals):
                idx = len(neg_vals) - 1
            return c + neg_vals[idx]
        v = (u - q) / (1.0 - q)
        return c + _invert_positive_nb(v, tail_kind, P[2], P[3], P[4], P[7],
                                       pos_vals, pos_cum)

    @njit(parallel=True, cache=True)
    def _walk_passage_nb(keys, level, max_steps, mark_step,
                         tail_kind, left_kind, P, pos_vals, pos_cum, neg_vals, neg_cum):
        n = keys.shape[0]
        out_tau = np.zeros(n)
        out_chi = np.full(n, np.nan)
        out_mark = np.zeros(n)
        out_budget = np.zeros(n, dtype=np.int64)
        for i in prange(n):
            key = keys[i]
            s = 0.0
            mark = 0.0
            mark_set = mark_step <= 0
            ctr = np.uint64(0)
            done = False
            for step in range(1, max_steps + 1):
                u = _u01_nb(key, ctr)
                ctr += np.uint64(1)
                s += _draw_tilted_nb(u, tail_kind, left_kind, P,
                                     pos_vals, pos_cum, neg_vals, neg_cum)
                if step == mark_step:
                    mark = s
                    mark_set = True
                if s >= level:
                    out_tau[i] = step
                    out_chi[i] = s - level
                    if not mark_set:
                        mark = s
                    done = True
                    break
            if not done:
                out_budget[i] = 1
                out_tau[i] = max_steps
                if not mark_set:
                    mark = s
            out_mark[i] = mark
        return out_tau, out_chi, out_mark, out_budget

    @njit(parallel=True, cache=True)
    def _walk_crude_nb(keys, level, horizon,
                       tail_kind, left_kind, P, pos_vals, pos_cum, neg_vals, neg_cum):
        n = keys.shape[0]
        hit = np.zeros(n, dtype=np.int64)
        q = P[0]
        c = P[1]
        gamma = P[8]
        for i in prange(n):
            key = keys[i]
            s = 0.0
            ctr = np.uint64(0)
            for _ in range(horizon):
                u = _u01_nb(key, ctr)
                ctr += np.uint64(1)
                if u < q:
                    if left_kind == 0:
                        x = c + np.log(u / q) / P[5]
                    elif left_kind == 1:
                        x = c + P[6]
                    else:
                        idx = np.searchsorted(neg_cum, u / q)
                        if idx >= len(neg_vals):
                            idx = len(neg_vals) - 1
                        x = c + neg_vals[idx]
                elif tail_kind == 0 or tail_kind == 1:
                    while True:
                        up = _u01_nb(key, ctr)
                        ua = _u01_nb(key, ctr + np.uint64(1))
                        ctr += np.uint64(2)
                        y = _invert_positive_nb(up, tail_kind, P[2], P[3], P[4], P[7],
                                                pos_vals, pos_cum)
                        if ua < np.exp(-gamma * y):
                            x = c + y
                            break
                else:
                    v = (u - q) / (1.0 - q)
                    idx = np.searchsorted(pos_cum, v)
                    if idx >= len(pos_vals):
                        idx = len(pos_vals) - 1
                    x = c + pos_vals[idx]
                s += x
                if s >= level:
                    hit[i] = 1
                    break
        return hit

    @njit(parallel=True, cache=True)
    def _ladder_nb(keys, max_steps,
                   tail_kind, left_kind, P, pos_vals, pos_cum, neg_vals, neg_cum):
        n = keys.shape[0]
        t1 = np.zeros(n)
        zeta = np.full(n, np.nan)
        budget = np.zeros(n, dtype=np.int64)
        for i in prange(n):
            key = keys[i]
            s = 0.0
            ctr = np.uint64(0)
            done = False
            for step in range(1, max_steps + 1):
                u = _u01_nb(key, ctr)
                ctr += np.uint64(1)
                s += _draw_tilted_nb(u, tail_kind, left_kind, P,
                                     pos_vals, pos_cum, neg_vals, neg_cum)
                if s > 0.0:
                    t1[i] = step
                    zeta[i] = s
                    done = True
                    break
            if not done:
                budget[i] = 1
                t1[i] = max_steps
        return t1, zeta, budget

    @njit(parallel=True, cache=True)
    def _sub_passage_nb(keys, alpha, delta, drift, level, max_jumps):
        n = keys.shape[0]
        rate = delta ** (-alpha)
        tau = np.zeros(n)
        chi = np.full(n, np.nan)
        dcross = np.zeros(n, dtype=np.int64)
        njumps = np.zeros(n, dtype=np.int64)
        budget = np.zeros(n, dtype=np.int64)
        for i in prange(n):
            key = keys[i]
            t = 0.0
            x = 0.0
            done = False
            for j in range(max_jumps):
                u1 = _u01_nb(key, np.uint64(2 * j))
                gap = -np.log(u1) / rate
                if drift > 0.0:
                    if x + drift * gap >= level:
                        tau[i] = t + (level - x) / drift
                        chi[i] = 0.0
                        dcross[i] = 1
                        njumps[i] = j
                        done = True
                        break
                    x += drift * gap
                t += gap
                u2 = _u01_nb(key, np.uint64(2 * j + 1))
                x += delta * u2 ** (-1.0 / alpha)
                if x >= level:
                    tau[i] = t
                    chi[i] = x - level
                    njumps[i] = j + 1
                    done = True
                    break
            if not done:
                budget[i] = 1
                tau[i] = t
                njumps[i] = max_jumps
        return tau, chi, dcross, njumps, budget

    @njit(parallel=True, cache=True)
    def _sub_value_nb(keys, alpha, delta, drift, horizon, max_jumps):
        n = keys.shape[0]
        rate = delta ** (-alpha)
        value = np.zeros(n)
        njumps = np.zeros(n, dtype=np.int64)
        for i in prange(n):
            key = keys[i]
            t = 0.0
            x = 0.0
            done = False
            for j in range(max_jumps):
                u1 = _u01_nb(key, np.uint64(2 * j))
                gap = -np.log(u1) / rate
                if t + gap > horizon:
                    value[i] = x + drift * (horizon - t)
                    njumps[i] = j
                    done = True
                    break
                t += gap
                x += drift * gap
                u2 = _u01_nb(key, np.uint64(2 * j + 1))
                x += delta * u2 ** (-1.0 / alpha)
            if not done:
                value[i] = x + drift * (horizon - t)
                njumps[i] = max_jumps
        return value, njumps

    @njit(parallel=True, cache=True)
    def _breve_paths_nb(keys, alpha, rate, emdelta, mu_drift, v_stop, t_mark, max_jumps):
        n = keys.shape[0]
        a_out = np.zeros(n)
        vfinal = np.zeros(n)
        xmark = np.full(n, np.nan)
        bmark = np.full(n, np.nan)
        budget = np.zeros(n, dtype=np.int64)
        inv_alpha = 1.0 / alpha
        for i in prange(n):
            key = keys[i]
            v = 1.0
            a_int = 0.0
            b_int = 0.0
            xm = np.nan
            bm = np.nan
            markdone = t_mark < 0.0
            for j in range(max_jumps):
                if v <= v_stop:
                    break
                u1 = _u01_nb(key, np.uint64(2 * j))
                gap = -np.log(u1) / rate
                va = v**alpha
                if not markdone and a_int + va * gap > t_mark:
                    dq = (t_mark - a_int) / va
                    xm = 1.0 - v
                    bm = b_int + v * dq
                    markdone = True
                a_int += va * gap
                b_int += v * gap
                u2 = _u01_nb(key, np.uint64(2 * j + 1))
                u2a = u2**inv_alpha
                shrink = u2a / (emdelta + u2a)
                if mu_drift != 0.0:
                    shrink = shrink * np.exp(mu_drift * gap)
                v = v * shrink
            if v > v_stop:
                budget[i] = 1
            if not markdone:
                xm = 1.0 - v
                bm = b_int
            a_out[i] = a_int
            vfinal[i] = v
            xmark[i] = xm
            bmark[i] = bm
        return a_out, vfinal, xmark, bmark, budget


# ---------------------------------------------------------------------------
# dispatchers

def _use_numba() -> bool:
    return _backend.active_backend() == "numba"


def walk_passage(keys, level, max_steps, mark_step, pack):
    """Tilted walk to `level`: (tau_steps, chi, value at min(mark, tau), budget)."""
    kinds, P, pv, pc, nv, nc = pack
    args = (keys, float(level), int(max_steps), int(mark_step),
            int(kinds[0]), int(kinds[1]), P, pv, pc, nv, nc)
    if _use_numba():
        return _walk_passage_nb(*args)
    return _walk_passage_np(*args)


def walk_crude(keys, level, horizon, pack):
    """Original-measure walk: indicator of reaching `level` within `horizon`."""
    kinds, P, pv, pc, nv, nc = pack
    args = (keys, float(level), int(horizon), int(kinds[0]), int(kinds[1]),
            P, pv, pc, nv, nc)
    if _use_numba():
        return _walk_crude_nb(*args)
    return _walk_crude_np(*args)


def ladder(keys, max_steps, pack):
    """First strict ascending ladder epoch and height under the tilted law."""
    kinds, P, pv, pc, nv, nc = pack
    args = (keys, int(max_steps), int(kinds[0]), int(kinds[1]), P, pv, pc, nv, nc)
    if _use_numba():
        return _ladder_nb(*args)
    return _ladder_np(*args)


def sub_passage(keys, alpha, delta, drift, level=1.0, max_jumps=100_000_000):
    """Truncated subordinator first passage: (tau, chi, drift_cross, njumps, budget)."""
    args = (keys, float(alpha), float(delta), float(drift), float(level), int(max_jumps))
    if _use_numba():
        return _sub_passage_nb(*args)
    return _sub_passage_np(*args)


def sub_value(keys, alpha, delta, drift, horizon, max_jumps=100_000_000):
    """Truncated subordinator value at `horizon`: (value, njumps)."""
    args = (keys, float(alpha), float(delta), float(drift), float(horizon), int(max_jumps))
    if _use_numba():
        return _sub_value_nb(*args)
    return _sub_value_np(*args)


def breve_paths(keys, alpha, rate, emdelta, mu_drift, v_stop, t_mark=-1.0,
                max_jumps=100_000_000):
    """Decay paths: (clock integral, final value, marked level, marked
    compensator integral, budget flags).

    rate      jump intensity of the truncated driver
    emdelta   exp(delta_log) - 1, parametrizes the inverse jump-size CDF
    mu_drift  mean of the omitted small jumps per unit time (<= 0), folded
              into the next jump so paths stay piecewise constant
    v_stop    stop once the path value is below this threshold
    t_mark    clock time at which to record the transformed path (< 0: off)
    """
    args = (keys, float(alpha), float(rate), float(emdelta), float(mu_drift),
            float(v_stop), float(t_mark), int(max_jumps))
    if _use_numba():
        return _breve_paths_nb(*args)
    return _breve_paths_np(*args)
