"""Increment distribution pair for the tilted random walk.

A model is the law F of one step under the tilted measure (positive drift)
together with the implied original law ``F_hat(dx) = exp(-gamma x) F(dx)``.
F is a two-part mixture: a regularly-varying right tail (index -alpha,
alpha in (0,1), so the tilted walk has infinite mean) and an exponentially
light negative part.  Calibration enforces the martingale identity

    integral exp(-gamma x) F(dx) = 1,

which simultaneously makes F_hat a probability and gives the original walk
``E exp(gamma xi) = 1`` with negative drift.  Non-lattice families calibrate
by a location shift; lattice families tune the mixture weight instead so all
mass stays on the lattice.
"""

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from nonovershoot.errors import ConfigError, NoRootError, UnboundedError
from nonovershoot.quadrature import adaptive_quad
from nonovershoot.rng import Stream, as_stream

__all__ = [
    "TailFamily",
    "LeftFamily",
    "ModelSpec",
    "GammaEstimate",
    "calibrate",
    "residual",
    "tail_F",
    "m_of",
    "gamma_of",
    "sample_increment",
    "spec_to_config",
    "spec_from_config",
    "pareto_spec",
    "log_pareto_spec",
    "lattice_spec",
    "gambler_spec",
    "stub_spec",
]

# tail / left variant tags shared with the kernels
TAIL_PARETO = 0
TAIL_LOG_PARETO = 1
TAIL_LATTICE = 2
TAIL_ATOMS = 3

LEFT_EXPONENTIAL = 0
LEFT_POINT = 1
LEFT_ATOMS = 2
LEFT_NONE = 3

_TAIL_NAMES = {"pareto": TAIL_PARETO, "log_pareto": TAIL_LOG_PARETO,
               "lattice_pareto": TAIL_LATTICE, "atoms": TAIL_ATOMS}
_LEFT_NAMES = {"exponential": LEFT_EXPONENTIAL, "point": LEFT_POINT,
               "atoms": LEFT_ATOMS, "none": LEFT_NONE}
_TAIL_TAGS = {v: k for k, v in _TAIL_NAMES.items()}
_LEFT_TAGS = {v: k for k, v in _LEFT_NAMES.items()}


@dataclass(frozen=True)
class TailFamily:
    """Right tail of the tilted law, supported on [0, inf) before shifting.

    variant 'pareto':         tail(y) = (1 + y/x0)^(-alpha)
    variant 'log_pareto':     tail(y) = (1 + y/x0)^(-alpha) / (1 + b/ln(e+y))
    variant 'lattice_pareto': mass at k*h equals the Pareto tail increment
                              tail(k h) - tail((k+1) h), k = 0, 1, ...
    variant 'atoms':          finite stub support, ((value, prob), ...)
    """

    variant: str = "pareto"
    x0: float = 1.0
    b: float = 0.0
    atoms: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.variant not in _TAIL_NAMES:
            raise ValueError(f"unknown tail variant {self.variant!r}")
        if self.variant != "atoms" and self.x0 <= 0:
            raise ValueError("x0 must be positive")
        if self.variant == "log_pareto" and self.b < 0:
            raise ValueError("b must be nonnegative")
        if self.variant == "atoms":
            total = sum(p for _, p in self.atoms)
            if not self.atoms or abs(total - 1.0) > 1e-12:
                raise ValueError("atom probabilities must sum to 1")
            if any(v < 0 for v, _ in self.atoms):
                raise ValueError("tail atoms must be nonnegative")

    @property
    def kind(self) -> int:
        return _TAIL_NAMES[self.variant]


@dataclass(frozen=True)
class LeftFamily:
    """Negative part of the tilted law, supported on (-inf, 0).

    variant 'exponential': density lam * exp(lam*y) on y < 0; lam > gamma is
                           required so the original law integrates.
    variant 'point':       unit mass at `at` < 0 (lattice and stub models)
    variant 'atoms':       finite stub support on negative values
    variant 'none':        no negative part (stubs only)

    `weight` is the mixture weight of this part; lattice calibration
    overwrites it, non-lattice calibration keeps it fixed.
    """

    variant: str = "exponential"
    lam: float = 2.0
    at: float = -1.0
    weight: float = 0.5
    atoms: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.variant not in _LEFT_NAMES:
            raise ValueError(f"unknown left variant {self.variant!r}")
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError("left weight must lie in [0, 1]")
        if self.variant == "exponential" and self.lam <= 0:
            raise ValueError("left rate must be positive")
        if self.variant == "point" and self.at >= 0:
            raise ValueError("point mass must sit at a negative value")
        if self.variant == "atoms":
            total = sum(p for _, p in self.atoms)
            if not self.atoms or abs(total - 1.0) > 1e-12:
                raise ValueError("atom probabilities must sum to 1")
            if any(v >= 0 for v, _ in self.atoms):
                raise ValueError("left atoms must be negative")
        if self.variant == "none" and self.weight != 0.0:
            raise ValueError("variant 'none' requires weight 0")

    @property
    def kind(self) -> int:
        return _LEFT_NAMES[self.variant]


@dataclass(frozen=True)
class ModelSpec:
    """Calibrated increment model; immutable and safe to share across workers."""

    alpha: float
    gamma: float
    tail: TailFamily
    left: LeftFamily
    shift: float = 0.0
    lattice: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.lattice is not None and self.lattice <= 0:
            raise ValueError("lattice span must be positive")

    @property
    def is_lattice(self) -> bool:
        return self.lattice is not None


@dataclass(frozen=True)
class GammaEstimate:
    value: float
    degenerate: bool = False


# ---------------------------------------------------------------------------
# closed-form tails of the unshifted parts

def _tail_pos0(tail: TailFamily, alpha: float, h: float, y):
    """P(positive part > y) for y >= 0, unshifted."""
    y = np.asarray(y, dtype=float)
    if tail.variant == "pareto":
        return (1.0 + y / tail.x0) ** (-alpha)
    if tail.variant == "log_pareto":
        return (1.0 + y / tail.x0) ** (-alpha) / (1.0 + tail.b / np.log(math.e + y))
    if tail.variant == "lattice_pareto":
        k = np.floor(y / h) + 1.0
        return (1.0 + k * h / tail.x0) ** (-alpha)
    vals = np.array([v for v, _ in tail.atoms])
    probs = np.array([p for _, p in tail.atoms])
    return (probs[None, :] * (vals[None, :] > y.reshape(-1, 1))).sum(axis=1).reshape(y.shape)


def _tail_left0(left: LeftFamily, y):
    """P(left part > y); equals 1 for y >= 0 ... 0 as y -> -inf."""
    y = np.asarray(y, dtype=float)
    if left.variant == "none":
        return np.ones_like(y)
    if left.variant == "exponential":
        return np.where(y >= 0.0, 1.0, 1.0 - np.exp(left.lam * np.minimum(y, 0.0)))
    if left.variant == "point":
        return (y < left.at).astype(float)
    vals = np.array([v for v, _ in left.atoms])
    probs = np.array([p for _, p in left.atoms])
    return (probs[None, :] * (vals[None, :] > y.reshape(-1, 1))).sum(axis=1).reshape(y.shape)


def _exp_moment_pos0(tail: TailFamily, alpha: float, h: float, s: float) -> float:
    """integral exp(s*y) over the unshifted positive part; finite for s <= 0."""
    if tail.variant == "atoms":
        return float(sum(p * math.exp(s * v) for v, p in tail.atoms))
    if s > 0.0:
        return math.inf
    if s == 0.0:
        return 1.0
    if tail.variant == "lattice_pareto":
        return _lattice_transform(tail.x0, alpha, h, s)
    # continuous: integral e^{sy} dF0 = 1 + s * integral e^{sy} tail(y) dy.
    # Substituting t = e^{sy} maps the slowly decaying infinite-interval
    # integrand onto [0, 1] where the quadrature is robust even as s -> 0-.
    tail_fn = lambda y: float(_tail_pos0(tail, alpha, h, y))
    integral = adaptive_quad(lambda t: tail_fn(math.log(1.0 / t) / -s) / -s,
                             0.0, 1.0)
    return 1.0 + s * integral


def _lattice_transform(x0: float, alpha: float, h: float, s: float) -> float:
    """Sum of exp(s k h) over the lattice Pareto masses, s < 0.

    Abel summation turns it into 1 + (1 - e^{-sh}) * sum_k e^{skh} tail(kh);
    the sum converges polynomially slowly as s -> 0-, so the head is summed
    directly and the tail closed by Euler-Maclaurin (integral via an
    exponential substitution, plus the g/2 and -g'/12 corrections).
    """
    k_head = 4096
    k = np.arange(1, k_head)
    head = float(np.sum(np.exp(s * h * k) * (1.0 + k * h / x0) ** (-alpha)))

    def g(u):
        return math.exp(s * h * u) * (1.0 + u * h / x0) ** (-alpha)

    t_hi = math.exp(s * h * k_head)
    if t_hi > 0.0:
        # absolute tolerance framing: the result is divided by |s| h, and
        # only its contribution to A (a further factor |s| h) must be tight;
        # QUADPACK's roundoff complaint about the relative goal is expected
        import warnings

        from scipy.integrate import IntegrationWarning
        from scipy.integrate import quad as _quad

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            raw, _ = _quad(lambda t: (1.0 + math.log(t) / (s * x0)) ** (-alpha),
                           0.0, t_hi, epsabs=1e-13 * (-s * h) + 1e-16,
                           epsrel=1e-11, limit=200)
        integral = raw / (-s * h)
    else:
        integral = 0.0
    g_k = g(k_head)
    gp_k = g_k * (s * h - alpha * (h / x0) / (1.0 + k_head * h / x0))
    total = head + integral + 0.5 * g_k - gp_k / 12.0
    return 1.0 + (1.0 - math.exp(-s * h)) * total


def _exp_moment_left0(left: LeftFamily, s: float) -> float:
    """integral exp(s*y) over the unshifted left part; finite for s > -lam."""
    if left.variant == "none":
        return 1.0
    if left.variant == "exponential":
        if s <= -left.lam:
            return math.inf
        return left.lam / (left.lam + s)
    if left.variant == "point":
        return math.exp(s * left.at)
    return float(sum(p * math.exp(s * v) for v, p in left.atoms))


# ---------------------------------------------------------------------------
# calibration

def calibrate(alpha: float, gamma: float, tail: TailFamily, left: LeftFamily,
              lattice: Optional[float] = None) -> ModelSpec:
    """Build a spec satisfying the martingale identity to 1e-10.

    Non-lattice: solves exp(-gamma c) * M0 = 1 for the location shift c,
    where M0 is the unshifted mixture transform at -gamma.  Lattice: tunes
    the left-part weight (the transform is linear in it) so mass stays on
    {k h}; raises NoRootError when no weight in (0, 1) reaches 1.
    """
    if left.variant == "exponential" and left.lam <= gamma:
        raise NoRootError(
            f"left part too light: exponential rate {left.lam} must exceed gamma {gamma}",
            bracket=(left.lam, gamma),
        )
    h = lattice if lattice is not None else 0.0
    a = _exp_moment_pos0(tail, alpha, h, -gamma)
    b = _exp_moment_left0(left, -gamma)

    if lattice is not None:
        _check_lattice_support(tail, left, lattice)
        if b <= 1.0 or a >= 1.0:
            raise NoRootError(
                "lattice mixture cannot reach normalization: "
                f"positive transform {a:.6g}, negative transform {b:.6g}",
                bracket=(a, b),
            )
        w = (1.0 - a) / (b - a)
        if not 0.0 < w < 1.0:
            raise NoRootError(f"calibrated weight {w:.6g} outside (0, 1)", bracket=(a, b))
        spec = ModelSpec(alpha, gamma, tail, replace(left, weight=w), shift=0.0, lattice=lattice)
    else:
        q = left.weight
        m0 = (1.0 - q) * a + q * b
        if not (0.0 < m0 < math.inf):
            raise NoRootError(f"mixture transform {m0} not normalizable", bracket=(a, b))
        c = math.log(m0) / gamma
        spec = ModelSpec(alpha, gamma, tail, left, shift=c, lattice=None)

    res = residual(spec)
    if abs(res) > 1e-10:
        raise NoRootError(f"calibration residual {res:.3e} exceeds 1e-10", bracket=(a, b))
    return spec


def _check_lattice_support(tail, left, h):
    if tail.variant == "lattice_pareto":
        pass
    elif tail.variant == "atoms":
        for v, _ in tail.atoms:
            if abs(v / h - round(v / h)) > 1e-9:
                raise ValueError(f"tail atom {v} off the lattice with span {h}")
    else:
        raise ValueError("lattice spec requires a lattice or atoms tail")
    if left.variant == "point":
        if abs(left.at / h - round(left.at / h)) > 1e-9:
            raise ValueError(f"left point {left.at} off the lattice with span {h}")
    elif left.variant == "atoms":
        for v, _ in left.atoms:
            if abs(v / h - round(v / h)) > 1e-9:
                raise ValueError(f"left atom {v} off the lattice with span {h}")
    elif left.variant != "none":
        raise ValueError("lattice spec requires point or atoms left part")


def residual(spec: ModelSpec) -> float:
    """E exp(-gamma x) under F minus 1 (martingale calibration error)."""
    h = spec.lattice if spec.lattice is not None else 0.0
    a = _exp_moment_pos0(spec.tail, spec.alpha, h, -spec.gamma)
    b = _exp_moment_left0(spec.left, -spec.gamma)
    q = spec.left.weight
    return math.exp(-spec.gamma * spec.shift) * ((1.0 - q) * a + q * b) - 1.0


# ---------------------------------------------------------------------------
# tail functionals

def tail_F(spec: ModelSpec, x):
    """P(xi > x) under the tilted law, closed form, vectorized in x."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    c = spec.shift
    q = spec.left.weight
    h = spec.lattice if spec.lattice is not None else 0.0
    out = np.empty_like(x)
    above = x >= c
    if above.any():
        out[above] = (1.0 - q) * _tail_pos0(spec.tail, spec.alpha, h, x[above] - c)
    below = ~above
    if below.any():
        out[below] = (1.0 - q) + q * _tail_left0(spec.left, x[below] - c)
    return float(out[0]) if scalar else out


def m_of(spec: ModelSpec, r: float) -> float:
    """integral_0^r P(xi > u) du, closed form where available."""
    if r <= 0:
        return 0.0
    c = spec.shift
    q = spec.left.weight
    total = 0.0
    # piece below the shift point: left tail + full positive mass
    if c > 0:
        b_hi = min(r, c)
        if spec.left.variant == "exponential":
            lam = spec.left.lam
            total += (1.0 - q) * b_hi + q * (b_hi - (math.exp(lam * (b_hi - c)) - math.exp(-lam * c)) / lam)
        else:
            total += adaptive_quad(lambda u: float(tail_F(spec, u)), 0.0, b_hi)
        if r <= c:
            return total
    lo = max(c, 0.0)
    if spec.tail.variant == "pareto":
        x0, al = spec.tail.x0, spec.alpha
        anti = lambda u: x0 / (1.0 - al) * (1.0 + (u - c) / x0) ** (1.0 - al)
        total += (1.0 - q) * (anti(r) - anti(lo))
    elif spec.tail.variant == "lattice_pareto":
        hh = spec.lattice
        n_cells = int(math.ceil(r / hh))
        k = np.arange(n_cells)
        cell_hi = np.minimum((k + 1.0) * hh, r)
        widths = cell_hi - k * hh
        tails = (1.0 + (k + 1.0) * hh / spec.tail.x0) ** (-spec.alpha)
        total += (1.0 - q) * float(np.sum(widths * tails))
    elif spec.tail.variant == "atoms":
        # step integration: tail is piecewise constant between atom locations
        pts = sorted(set([lo, r] + [v + c for v, _ in spec.tail.atoms if lo < v + c < r]))
        for a_, b_ in zip(pts[:-1], pts[1:]):
            total += float(tail_F(spec, 0.5 * (a_ + b_))) * (b_ - a_)
    else:
        total += adaptive_quad(lambda u: float(tail_F(spec, u)), lo, r,
                               epsabs=1e-13, epsrel=1e-11)
    return total


def gamma_of(spec: ModelSpec, lambda_cap: float = 64.0) -> GammaEstimate:
    """Largest tilt rate with E exp(lambda xi) <= 1 under the original law.

    Validation utility: for calibrated specs this recovers `gamma` by
    monotone bisection on the boundary of the finiteness/normalization set.
    A law with nonnegative original drift is reported as degenerate (0).
    """
    g0 = spec.gamma
    c = spec.shift
    q = spec.left.weight
    h = spec.lattice if spec.lattice is not None else 0.0
    heavy = spec.tail.variant != "atoms"

    def transform(lam: float) -> float:
        s = lam - g0
        if heavy and s > 0:
            return math.inf
        a = _exp_moment_pos0(spec.tail, spec.alpha, h, s)
        b = _exp_moment_left0(spec.left, s)
        if not (math.isfinite(a) and math.isfinite(b)):
            return math.inf
        return math.exp(s * c) * ((1.0 - q) * a + q * b)

    eps = 1e-9
    if transform(eps) > 1.0:
        return GammaEstimate(0.0, degenerate=True)
    lo, hi = eps, 2 * eps
    while transform(hi) <= 1.0:
        lo = hi
        hi *= 2.0
        if hi > lambda_cap:
            raise UnboundedError(f"E exp(lambda xi) <= 1 for all lambda up to {lambda_cap}")
    for _ in range(120):
        mid = 0.5 * (lo + hi)
        if transform(mid) <= 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-10 * max(1.0, lo):
            break
    return GammaEstimate(0.5 * (lo + hi), degenerate=False)


# ---------------------------------------------------------------------------
# sampling (scalar reference; the kernels reimplement the same transforms)

def _atoms_tables(atoms):
    vals = np.array([v for v, _ in atoms], dtype=float)
    probs = np.array([p for _, p in atoms], dtype=float)
    order = np.argsort(vals)
    return vals[order], np.cumsum(probs[order])


def invert_positive(spec: ModelSpec, v: float) -> float:
    """Inverse CDF of the unshifted positive part at v in (0, 1)."""
    tail = spec.tail
    al = spec.alpha
    if tail.variant == "pareto":
        return tail.x0 * ((1.0 - v) ** (-1.0 / al) - 1.0)
    if tail.variant == "log_pareto":
        target = 1.0 - v
        hi = tail.x0 * ((target / (1.0 + tail.b)) ** (-1.0 / al) - 1.0) + 1.0
        lo = 0.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            t = (1.0 + mid / tail.x0) ** (-al) / (1.0 + tail.b / math.log(math.e + mid))
            if t > target:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)
    if tail.variant == "lattice_pareto":
        hh = spec.lattice
        z = (tail.x0 / hh) * ((1.0 - v) ** (-1.0 / al) - 1.0)
        return hh * max(0.0, math.ceil(z) - 1.0)
    vals, cum = _atoms_tables(tail.atoms)
    return float(vals[int(np.searchsorted(cum, v, side="left").clip(0, len(vals) - 1))])


def _invert_left(spec: ModelSpec, u_scaled: float) -> float:
    left = spec.left
    if left.variant == "exponential":
        return math.log(u_scaled) / left.lam
    if left.variant == "point":
        return left.at
    vals, cum = _atoms_tables(left.atoms)
    return float(vals[int(np.searchsorted(cum, u_scaled, side="left").clip(0, len(vals) - 1))])


def sample_increment(spec: ModelSpec, measure: str, rng) -> float:
    """One step draw under 'Pstar' (tilted) or 'P' (original)."""
    stream = as_stream(rng)
    if measure == "Pstar":
        u = stream.uniform()
        q = spec.left.weight
        if u < q:
            return spec.shift + _invert_left(spec, u / q)
        v = (u - q) / (1.0 - q)
        return spec.shift + invert_positive(spec, v)
    if measure != "P":
        raise ValueError("measure must be 'P' or 'Pstar'")
    return _sample_original(spec, stream)


@lru_cache(maxsize=256)
def p_part_weights(spec: ModelSpec) -> Tuple[float, float]:
    """(left weight, positive weight) of the original law F_hat."""
    g = spec.gamma
    h = spec.lattice if spec.lattice is not None else 0.0
    a = _exp_moment_pos0(spec.tail, spec.alpha, h, -g)
    b = _exp_moment_left0(spec.left, -g)
    q = spec.left.weight
    scale = math.exp(-g * spec.shift)
    qp = q * b * scale
    pp = (1.0 - q) * a * scale
    total = qp + pp
    return qp / total, pp / total


@lru_cache(maxsize=256)
def original_tables(spec: ModelSpec):
    """Reweighted inverse-CDF tables of the original law's discrete parts."""
    g = spec.gamma
    pos = neg = None
    if spec.tail.variant == "lattice_pareto":
        hh = spec.lattice
        x0, al = spec.tail.x0, spec.alpha
        ks, masses = [], []
        k, tk, total = 0, 1.0, 0.0
        while True:
            tk1 = (1.0 + (k + 1) * hh / x0) ** (-al)
            m = math.exp(-g * k * hh) * (tk - tk1)
            ks.append(k * hh)
            masses.append(m)
            total += m
            if m < total * 1e-17 and k * hh > x0:
                break
            tk, k = tk1, k + 1
        vals = np.array(ks)
        cum = np.cumsum(np.array(masses) / total)
        pos = (vals, cum)
    elif spec.tail.variant == "atoms":
        vals, cum0 = _atoms_tables(spec.tail.atoms)
        w = np.exp(-g * vals) * np.diff(np.concatenate([[0.0], cum0]))
        pos = (vals, np.cumsum(w / w.sum()))
    if spec.left.variant == "atoms":
        vals, cum0 = _atoms_tables(spec.left.atoms)
        w = np.exp(-g * vals) * np.diff(np.concatenate([[0.0], cum0]))
        neg = (vals, np.cumsum(w / w.sum()))
    return pos, neg


def _sample_original(spec: ModelSpec, stream: Stream) -> float:
    qp, _ = p_part_weights(spec)
    u = stream.uniform()
    if u < qp:
        left = spec.left
        if left.variant == "exponential":
            return spec.shift + math.log(u / qp) / (left.lam - spec.gamma)
        if left.variant == "point":
            return spec.shift + left.at
        _, neg = original_tables(spec)
        vals, cum = neg
        return spec.shift + float(vals[min(int(np.searchsorted(cum, u / qp)), len(vals) - 1)])
    if spec.tail.variant in ("pareto", "log_pareto"):
        # rejection: propose from the tilted positive part, accept w.p. e^{-gamma y}
        while True:
            y = invert_positive(spec, stream.uniform())
            if stream.uniform() < math.exp(-spec.gamma * y):
                return spec.shift + y
    pos, _ = original_tables(spec)
    vals, cum = pos
    v = (u - qp) / (1.0 - qp)
    return spec.shift + float(vals[min(int(np.searchsorted(cum, v)), len(vals) - 1)])


# ---------------------------------------------------------------------------
# parameter packing for the kernels

PAR_Q, PAR_SHIFT, PAR_ALPHA, PAR_X0, PAR_B, PAR_RATE, PAR_AT, PAR_H, PAR_GAMMA = range(9)


def pack_tilted(spec: ModelSpec):
    """(kinds, params, pos_vals, pos_cum, neg_vals, neg_cum) for tilted sampling."""
    kinds = np.array([spec.tail.kind, spec.left.kind], dtype=np.int64)
    params = np.zeros(9)
    params[PAR_Q] = spec.left.weight
    params[PAR_SHIFT] = spec.shift
    params[PAR_ALPHA] = spec.alpha
    params[PAR_X0] = spec.tail.x0
    params[PAR_B] = spec.tail.b
    params[PAR_RATE] = spec.left.lam if spec.left.variant == "exponential" else 0.0
    params[PAR_AT] = spec.left.at if spec.left.variant == "point" else 0.0
    params[PAR_H] = spec.lattice if spec.lattice is not None else 0.0
    params[PAR_GAMMA] = spec.gamma
    empty = np.zeros(0)
    pos_vals = pos_cum = neg_vals = neg_cum = empty
    if spec.tail.variant == "atoms":
        pos_vals, pos_cum = _atoms_tables(spec.tail.atoms)
    if spec.left.variant == "atoms":
        neg_vals, neg_cum = _atoms_tables(spec.left.atoms)
    return kinds, params, pos_vals, pos_cum, neg_vals, neg_cum


def pack_original(spec: ModelSpec):
    """Same layout for original-measure sampling (crude Monte Carlo)."""
    kinds = np.array([spec.tail.kind, spec.left.kind], dtype=np.int64)
    params = np.zeros(9)
    qp, _ = p_part_weights(spec)
    params[PAR_Q] = qp
    params[PAR_SHIFT] = spec.shift
    params[PAR_ALPHA] = spec.alpha
    params[PAR_X0] = spec.tail.x0
    params[PAR_B] = spec.tail.b
    params[PAR_RATE] = (spec.left.lam - spec.gamma) if spec.left.variant == "exponential" else 0.0
    params[PAR_AT] = spec.left.at if spec.left.variant == "point" else 0.0
    params[PAR_H] = spec.lattice if spec.lattice is not None else 0.0
    params[PAR_GAMMA] = spec.gamma
    empty = np.zeros(0)
    pos, neg = original_tables(spec)
    pos_vals, pos_cum = pos if pos is not None else (empty, empty)
    neg_vals, neg_cum = neg if neg is not None else (empty, empty)
    return kinds, params, pos_vals, pos_cum, neg_vals, neg_cum


# ---------------------------------------------------------------------------
# serialization: flat key-value text, exact decimal round-trip via repr()

def spec_to_config(spec: ModelSpec) -> str:
    lines = [
        f"alpha = {spec.alpha!r}",
        f"gamma = {spec.gamma!r}",
        f"tail.variant = {spec.tail.variant}",
        f"tail.x0 = {spec.tail.x0!r}",
        f"tail.b = {spec.tail.b!r}",
        f"left.variant = {spec.left.variant}",
        f"left.weight = {spec.left.weight!r}",
    ]
    if spec.left.variant == "exponential":
        lines.append(f"left.lambda = {spec.left.lam!r}")
    if spec.left.variant == "point":
        lines.append(f"left.at = {spec.left.at!r}")
    if spec.lattice is not None:
        lines.append(f"lattice.h = {spec.lattice!r}")
    lines.append(f"shift = {spec.shift!r}")
    return "\n".join(lines) + "\n"


_CONFIG_KEYS = {"alpha", "gamma", "tail.variant", "tail.x0", "tail.b",
                "left.variant", "left.lambda", "left.at", "left.weight",
                "lattice.h", "shift"}


def parse_config(text: str) -> dict:
    entries = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {ln}: expected 'key = value', got {raw!r}", line_no=ln)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {ln}: unknown key {key!r}", line_no=ln)
        if key in ("tail.variant", "left.variant"):
            entries[key] = value
        else:
            try:
                entries[key] = float(value)
            except ValueError:
                raise ConfigError(f"line {ln}: bad numeric value {value!r}", line_no=ln)
    return entries


def spec_from_config(text: str, recalibrate: bool = False) -> ModelSpec:
    """Parse a config.  With recalibrate=True the shift/weight are solved
    afresh; otherwise they are taken from the file when present."""
    e = parse_config(text)
    for req in ("alpha", "gamma"):
        if req not in e:
            raise ConfigError(f"missing required key {req!r}")
    tail = TailFamily(
        variant=e.get("tail.variant", "pareto"),
        x0=e.get("tail.x0", 1.0),
        b=e.get("tail.b", 0.0),
    )
    left = LeftFamily(
        variant=e.get("left.variant", "exponential"),
        lam=e.get("left.lambda", 2.0),
        at=e.get("left.at", -1.0),
        weight=e.get("left.weight", 0.5),
    )
    lattice = e.get("lattice.h")
    if recalibrate or "shift" not in e:
        return calibrate(e["alpha"], e["gamma"], tail, left, lattice)
    return ModelSpec(e["alpha"], e["gamma"], tail, left, shift=e["shift"], lattice=lattice)


# ---------------------------------------------------------------------------
# shipped families and stubs

def pareto_spec(alpha=0.75, gamma=1.0, x0=1.0, left_rate=None, left_weight=0.5) -> ModelSpec:
    lam = left_rate if left_rate is not None else 2.0 * gamma
    return calibrate(alpha, gamma, TailFamily("pareto", x0=x0),
                     LeftFamily("exponential", lam=lam, weight=left_weight))


def log_pareto_spec(alpha=0.75, gamma=1.0, x0=1.0, b=1.0, left_rate=None,
                    left_weight=0.5) -> ModelSpec:
    lam = left_rate if left_rate is not None else 2.0 * gamma
    return calibrate(alpha, gamma, TailFamily("log_pareto", x0=x0, b=b),
                     LeftFamily("exponential", lam=lam, weight=left_weight))


def lattice_spec(alpha=0.75, gamma=math.log(2.0), h=1.0, x0=1.0, left_at=None) -> ModelSpec:
    at = left_at if left_at is not None else -h
    return calibrate(alpha, gamma, TailFamily("lattice_pareto", x0=x0),
                     LeftFamily("point", at=at, weight=0.5), lattice=h)


def gambler_spec(p: float, alpha: float = 0.75) -> ModelSpec:
    """Two-point walk: original law puts p at +1, 1-p at -1 (p < 1/2).

    gamma = ln((1-p)/p); calibration recovers the tilted weights exactly.
    """
    if not 0.0 < p < 0.5:
        raise ValueError("gambler family needs p in (0, 1/2)")
    gamma = math.log((1.0 - p) / p)
    return calibrate(alpha, gamma,
                     TailFamily("atoms", atoms=((1.0, 1.0),)),
                     LeftFamily("atoms", atoms=((-1.0, 1.0),), weight=0.5),
                     lattice=1.0)


def stub_spec(pos_atoms, neg_atoms=(), gamma=1.0, alpha=0.75, left_weight=0.0,
              lattice=None) -> ModelSpec:
    """Uncalibrated finite-support spec for mechanism tests."""
    tail = TailFamily("atoms", atoms=tuple(pos_atoms))
    if neg_atoms:
        left = LeftFamily("atoms", atoms=tuple(neg_atoms), weight=left_weight)
    else:
        left = LeftFamily("none", weight=0.0)
    return ModelSpec(alpha, gamma, tail, left, shift=0.0, lattice=lattice)
