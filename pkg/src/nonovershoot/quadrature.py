"""Quadrature helpers shared by the model, subordinator and limit-process code.

Three tools:

* :func:`adaptive_quad` - scipy QUADPACK with tight tolerances and an error
  check instead of a silent warning;
* :func:`alg_weighted_quad` - integrals with algebraic endpoint weights
  ``(x-a)^p (b-x)^q``, ``p, q > -1`` (QAWS), used for every ``x^{a-1}`` /
  ``(1-x)^{-a}`` endpoint singularity in the closed-form laws;
* :func:`cum_gl01` - vectorized cumulative integrals ``int_0^V h`` on [0, 1]
  for a whole array of upper limits at once (composite Gauss-Legendre on
  graded panels), used to evaluate distribution functions on Monte Carlo
  samples without a per-point adaptive call.
"""

import numpy as np
from scipy.integrate import quad

__all__ = ["adaptive_quad", "alg_weighted_quad", "cum_gl01", "QuadratureError"]


class QuadratureError(RuntimeError):
    pass


def adaptive_quad(f, a, b, *, epsabs=1e-13, epsrel=1e-11, points=None, limit=200):
    val, err = quad(f, a, b, epsabs=epsabs, epsrel=epsrel, points=points, limit=limit)
    if not np.isfinite(val):
        raise QuadratureError(f"integral of {f} on [{a}, {b}] is not finite")
    if err > max(epsabs, abs(val) * max(epsrel, 1e-10)) * 50:
        raise QuadratureError(f"quadrature error {err:.3e} too large for value {val:.6e}")
    return val


def alg_weighted_quad(g, a, b, pow_a, pow_b, *, epsabs=1e-13, epsrel=1e-11):
    """Integral of g(x) * (x-a)^pow_a * (b-x)^pow_b over (a, b)."""
    if pow_a <= -1 or pow_b <= -1:
        raise ValueError("endpoint powers must exceed -1")
    if pow_a == 0.0 and pow_b == 0.0:
        return adaptive_quad(g, a, b, epsabs=epsabs, epsrel=epsrel)
    val, err = quad(g, a, b, weight="alg", wvar=(pow_a, pow_b), epsabs=epsabs, epsrel=epsrel)
    if not np.isfinite(val):
        raise QuadratureError("weighted integral not finite")
    if err > max(epsabs, abs(val) * max(epsrel, 1e-10)) * 50:
        raise QuadratureError(f"weighted quadrature error {err:.3e} too large")
    return val


# Composite Gauss-Legendre machinery for cumulative integrals on [0, 1].
# Panels are quadratically graded toward 0 where the transformed integrands
# have their mildest-derivative point; 24 panels x 24 nodes is far below
# 1e-12 absolute for the smooth integrands used here.

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)
_N_PANELS = 24
_EDGES = (np.arange(_N_PANELS + 1) / _N_PANELS) ** 2


def cum_gl01(h, upper):
    """``int_0^V h(v) dv`` for every V in `upper` (values in [0, 1]).

    h must accept numpy arrays and be smooth on [0, 1].
    """
    upper = np.asarray(upper, dtype=np.float64)
    if upper.size and (upper.min() < -1e-12 or upper.max() > 1 + 1e-12):
        raise ValueError("upper limits must lie in [0, 1]")
    v = np.clip(upper, 0.0, 1.0)

    lo = _EDGES[:-1]
    hi = _EDGES[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    # panel_nodes[p, k]: k-th node of panel p
    panel_nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    panel_vals = h(panel_nodes.ravel()).reshape(panel_nodes.shape)
    panel_ints = (panel_vals * _GL_WEIGHTS[None, :]).sum(axis=1) * half
    prefix = np.concatenate([[0.0], np.cumsum(panel_ints)])

    idx = np.clip(np.searchsorted(_EDGES, v, side="right") - 1, 0, _N_PANELS - 1)
    a = _EDGES[idx]
    phalf = 0.5 * (v - a)
    pmid = 0.5 * (v + a)
    nodes = pmid[..., None] + phalf[..., None] * _GL_NODES
    vals = h(nodes.ravel()).reshape(nodes.shape)
    partial = (vals * _GL_WEIGHTS).sum(axis=-1) * phalf
    return prefix[idx] + partial
