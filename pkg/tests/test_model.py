import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import brentq

from nonovershoot import model, rng
from nonovershoot.errors import ConfigError, NoRootError


def test_shipped_families_calibrate_to_1e10():
    for spec in (model.pareto_spec(), model.log_pareto_spec(), model.lattice_spec()):
        assert abs(model.residual(spec)) <= 1e-10


def test_identity_case_zero_shift():
    # pick the left weight that already normalizes the unshifted mixture
    alpha, gamma = 0.75, 1.0
    tail = model.TailFamily("pareto", x0=1.0)
    left = model.LeftFamily("exponential", lam=2.0, weight=0.5)
    a = model._exp_moment_pos0(tail, alpha, 0.0, -gamma)
    b = model._exp_moment_left0(left, -gamma)
    w = (1.0 - a) / (b - a)
    spec = model.calibrate(alpha, gamma, tail,
                           model.LeftFamily("exponential", lam=2.0, weight=w))
    assert abs(spec.shift) < 1e-12


def test_shift_against_bisection_oracle():
    # independent oracle: adaptive quadrature of the density transform,
    # bisected over the shift
    alpha, gamma, lam, wq = 0.75, 1.0, 2.0, 0.5
    spec = model.pareto_spec(alpha=alpha, gamma=gamma, left_rate=lam, left_weight=wq)

    def transform(c):
        pos = quad(lambda y: math.exp(-gamma * (y + c)) * alpha * (1 + y) ** (-alpha - 1),
                   0, np.inf, epsabs=1e-13, epsrel=1e-12)[0]
        neg = quad(lambda y: lam * math.exp((lam - gamma) * y - gamma * c),
                   -np.inf, 0, epsabs=1e-13, epsrel=1e-12)[0]
        return (1 - wq) * pos + wq * neg - 1.0

    c_oracle = brentq(transform, -5.0, 5.0, xtol=1e-13)
    assert spec.shift == pytest.approx(c_oracle, abs=1e-10)


def test_lattice_weight_against_finite_sum_oracle():
    gamma, alpha, h, x0 = math.log(2.0), 0.75, 1.0, 1.0
    spec = model.lattice_spec(alpha=alpha, gamma=gamma, h=h, x0=x0)
    # exact finite-sum oracle for the positive transform
    ks = np.arange(4000)
    masses = (1 + ks * h / x0) ** (-alpha) - (1 + (ks + 1) * h / x0) ** (-alpha)
    a = float(np.sum(np.exp(-gamma * ks * h) * masses))
    b = math.exp(gamma * h)
    w_oracle = (1.0 - a) / (b - a)
    assert spec.left.weight == pytest.approx(w_oracle, abs=1e-12)
    total = (1 - spec.left.weight) * a + spec.left.weight * b
    assert total == pytest.approx(1.0, abs=1e-12)


def test_calibration_residual_over_random_parameters():
    # every constructible spec calibrates to 1e-10, not just the shipped ones
    s = rng.Stream.from_seed(2024)
    for _ in range(25):
        alpha = 0.1 + 0.8 * s.uniform()
        gamma = 0.2 + 2.0 * s.uniform()
        x0 = 0.3 + 3.0 * s.uniform()
        lam = gamma * (1.2 + 2.0 * s.uniform())
        wq = 0.05 + 0.9 * s.uniform()
        b = 2.0 * s.uniform()
        variant = "pareto" if s.uniform() < 0.5 else "log_pareto"
        spec = model.calibrate(alpha, gamma, model.TailFamily(variant, x0=x0, b=b),
                               model.LeftFamily("exponential", lam=lam, weight=wq))
        assert abs(model.residual(spec)) <= 1e-10
    for _ in range(10):
        alpha = 0.1 + 0.8 * s.uniform()
        gamma = 0.1 + 1.5 * s.uniform()
        h = 0.5 + 1.5 * s.uniform()
        spec = model.calibrate(alpha, gamma,
                               model.TailFamily("lattice_pareto", x0=0.5 + s.uniform()),
                               model.LeftFamily("point", at=-2 * h, weight=0.5),
                               lattice=h)
        assert abs(model.residual(spec)) <= 1e-10


def test_no_root_when_left_too_light():
    with pytest.raises(NoRootError) as err:
        model.calibrate(0.75, 1.0, model.TailFamily("pareto"),
                        model.LeftFamily("exponential", lam=0.5, weight=0.5))
    assert err.value.bracket is not None


def test_point_stub_always_same_value():
    spec = model.stub_spec(((0.5, 1.0),), gamma=1.0)
    s = rng.Stream.from_seed(3)
    draws = {model.sample_increment(spec, "Pstar", s) for _ in range(20)}
    assert draws == {0.5}


def test_infinite_mean_running_average_grows():
    spec = model.pareto_spec(alpha=0.75)
    s = rng.Stream.from_seed(12)
    draws = np.array([model.sample_increment(spec, "Pstar", s) for _ in range(100_000)])
    pos = np.maximum(draws, 0.0)
    early = pos[:1000].mean()
    late = pos.mean()
    assert late > 2.0 * early


def test_tilted_sampling_ks_against_analytic_cdf():
    spec = model.pareto_spec(alpha=0.75)
    s = rng.Stream.from_seed(5)
    kinds, P, pv, pc, nv, nc = model.pack_tilted(spec)
    from nonovershoot.kernels import _draw_tilted_np

    u = s.uniforms(100_000)
    draws = _draw_tilted_np(u, int(kinds[0]), int(kinds[1]), P, pv, pc, nv, nc)
    from nonovershoot.stats import ks_one_sample

    d = ks_one_sample(draws, lambda x: 1.0 - model.tail_F(spec, x))
    assert d < 0.006


def test_original_measure_truncated_martingale_property():
    # E[exp(gamma xi); xi <= M] = 1 - tail_F(M) under the original law
    # (the untruncated statistic has infinite variance, so truncate at M)
    big = 10.0
    for spec in (model.pareto_spec(alpha=0.6, gamma=0.8), model.lattice_spec()):
        s = rng.Stream.from_seed(21)
        draws = np.array([model.sample_increment(spec, "P", s) for _ in range(40_000)])
        vals = np.exp(spec.gamma * draws) * (draws <= big)
        target = 1.0 - float(model.tail_F(spec, big))
        z = (vals.mean() - target) / (vals.std(ddof=1) / math.sqrt(vals.size))
        assert abs(z) < 4.0


def test_gambler_original_law():
    g = model.gambler_spec(0.3)
    s = rng.Stream.from_seed(8)
    draws = np.array([model.sample_increment(g, "P", s) for _ in range(30_000)])
    p_up = (draws > 0).mean()
    assert abs(p_up - 0.3) < 4.0 * math.sqrt(0.3 * 0.7 / draws.size)


def test_tail_F_and_m_of_closed_forms():
    spec = model.ModelSpec(0.5, 1.0, model.TailFamily("pareto", x0=1.0),
                           model.LeftFamily("none", weight=0.0))
    assert model.tail_F(spec, 0.0) == 1.0
    for r in (0.5, 3.0, 42.0):
        assert model.m_of(spec, r) == pytest.approx(2 * (math.sqrt(1 + r) - 1), rel=1e-12)


def test_m_of_quadrature_cross_check_log_pareto():
    spec = model.log_pareto_spec(alpha=0.6, b=1.0)
    r = 37.0
    ref = quad(lambda u: float(model.tail_F(spec, u)), 0, r,
               epsabs=1e-13, epsrel=1e-12, points=[spec.shift])[0]
    assert model.m_of(spec, r) == pytest.approx(ref, rel=1e-9)


def test_karamata_ratio_of_m_of(pareto075):
    # convergence is slow (~ r^(alpha-1)); check monotone approach and the
    # asymptotic bound at the largest level
    target = 1.0 / (1.0 - pareto075.alpha)
    devs = [abs(model.m_of(pareto075, r) / (r * float(model.tail_F(pareto075, r))) - target)
            for r in (1e4, 1e6, 1e8)]
    assert devs[2] < devs[1] < devs[0]
    assert devs[2] < 0.05
    # at alpha = 1/2 the correction is square-root fast: tight check
    half = model.ModelSpec(0.5, 1.0, model.TailFamily("pareto", x0=1.0),
                           model.LeftFamily("none", weight=0.0))
    ratio = model.m_of(half, 1e6) / (1e6 * float(model.tail_F(half, 1e6)))
    assert ratio == pytest.approx(2.0, abs=2.1e-3)


def test_tail_F_monotone_and_m_of_increment_bound(pareto075):
    xs = np.sort(rng.u01_block(1, 0, 50) * 100.0)
    tails = model.tail_F(pareto075, xs)
    assert np.all(np.diff(tails) <= 1e-15)
    for r1, r2 in ((1.0, 2.0), (10.0, 30.0)):
        inc = model.m_of(pareto075, r2) - model.m_of(pareto075, r1)
        assert 0.0 <= inc <= (r2 - r1) * float(model.tail_F(pareto075, r1)) + 1e-12


def test_lattice_tail_right_continuous(lattice075):
    h = lattice075.lattice
    at = model.tail_F(lattice075, 2 * h)
    just_right = model.tail_F(lattice075, 2 * h + 1e-12)
    just_left = model.tail_F(lattice075, 2 * h - 1e-12)
    assert at == just_right
    assert just_left > at


def test_gamma_of_round_trip():
    for spec in (model.pareto_spec(gamma=1.0), model.log_pareto_spec(gamma=0.5),
                 model.lattice_spec()):
        est = model.gamma_of(spec)
        assert not est.degenerate
        assert est.value == pytest.approx(spec.gamma, abs=1e-8)


def test_gamma_of_symmetric_two_point_degenerate():
    sym = model.stub_spec(((1.0, 1.0),), ((-1.0, 1.0),), gamma=1.0, left_weight=0.5)
    est = model.gamma_of(sym)
    assert est.degenerate and est.value == 0.0


def test_gamma_of_gambler_closed_form():
    p = 0.2
    est = model.gamma_of(model.gambler_spec(p))
    assert est.value == pytest.approx(math.log((1 - p) / p), abs=1e-8)


def test_config_round_trip_exact():
    for spec in (model.pareto_spec(), model.log_pareto_spec(b=0.25),
                 model.lattice_spec()):
        text = model.spec_to_config(spec)
        back = model.spec_from_config(text)
        assert back == spec


def test_config_errors_carry_line_numbers():
    with pytest.raises(ConfigError) as err:
        model.parse_config("alpha = 0.75\nbogus_key = 1\n")
    assert err.value.line_no == 2
    with pytest.raises(ConfigError) as err:
        model.parse_config("alpha 0.75\n")
    assert err.value.line_no == 1
    with pytest.raises(ConfigError) as err:
        model.parse_config("alpha = abc\n")
    assert err.value.line_no == 1
