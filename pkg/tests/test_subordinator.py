import math

import numpy as np
import pytest
from scipy.integrate import quad

from nonovershoot import rng
from nonovershoot import subordinator as sub
from nonovershoot.errors import AttemptsExhausted
from nonovershoot.stats import aggregate, ks_one_sample, ks_two_sample


def test_config_validation():
    with pytest.raises(ValueError):
        sub.SubordinatorConfig(alpha=1.2)
    with pytest.raises(ValueError):
        sub.SubordinatorConfig(alpha=0.5, delta=0.0)
    cfg = sub.SubordinatorConfig(alpha=0.5, delta=1e-4)
    assert cfg.jump_rate == pytest.approx(100.0)
    assert cfg.drift == pytest.approx(sub.truncation_drift(0.5, 1e-4))


def test_jump_sizes_pareto_law():
    cfg = sub.SubordinatorConfig(alpha=0.7, delta=1e-2, drift_comp=False)
    rec = sub.sample_passage(cfg, 1, level=50.0, with_skeleton=True)
    sizes = rec.skeleton.sizes
    assert sizes.min() >= cfg.delta
    d = ks_one_sample(sizes, lambda x: 1.0 - (x / cfg.delta) ** (-cfg.alpha))
    assert d < 1.63 / math.sqrt(sizes.size)


def test_jump_rate_is_poissonian():
    cfg = sub.SubordinatorConfig(alpha=0.6, delta=1e-3, drift_comp=False)
    value, njumps = sub.value_batch(cfg, 4000, seed=2, horizon=1.0)
    est = aggregate(njumps.astype(float))
    rate = cfg.jump_rate
    assert abs(est.value - rate) <= 3.0 * est.stderr
    # Poisson variance check, loose
    assert np.var(njumps) == pytest.approx(rate, rel=0.1)


def test_no_creep_without_drift():
    cfg = sub.SubordinatorConfig(alpha=0.75, delta=1e-4, drift_comp=False)
    tau, chi, dcross, _, budget = sub.passage_batch(cfg, 5000, seed=3)
    assert int(dcross.sum()) == 0
    assert np.all(chi[budget == 0] > 0.0)


def test_creep_fraction_small_and_vanishing():
    # drift crossings must become rare as the truncation refines
    fracs = []
    for delta in (1e-3, 1e-4):
        cfg = sub.SubordinatorConfig(alpha=0.5, delta=delta, drift_comp=True)
        _, _, dcross, _, _ = sub.passage_batch(cfg, 20_000, seed=4)
        fracs.append(float(dcross.mean()))
    assert fracs[1] < fracs[0]
    assert fracs[1] < 0.01


def test_marginal_self_similarity():
    # X(2)/2^(1/alpha) should match X(1) in law
    alpha = 0.7
    cfg = sub.SubordinatorConfig(alpha=alpha, delta=1e-5, drift_comp=True)
    x1, _ = sub.value_batch(cfg, 4000, seed=5, horizon=1.0)
    x2, _ = sub.value_batch(cfg, 4000, seed=6, horizon=2.0)
    d, p = ks_two_sample(x2 / 2.0 ** (1.0 / alpha), x1)
    assert d < 1.63 * math.sqrt(2.0 / 4000.0)


def test_truncation_sensitivity_of_tail_probabilities():
    alpha, n = 0.75, 20_000
    cfg1 = sub.SubordinatorConfig(alpha=alpha, delta=1e-4, drift_comp=False)
    cfg2 = sub.SubordinatorConfig(alpha=alpha, delta=5e-5, drift_comp=False)
    _, chi1, _, _, _ = sub.passage_batch(cfg1, n, seed=7)
    _, chi2, _, _, _ = sub.passage_batch(cfg2, n, seed=8)
    for x in (0.1, 1.0, 10.0):
        p1, p2 = float(np.mean(chi1 > x)), float(np.mean(chi2 > x))
        se = math.sqrt(p1 * (1 - p1) / n + p2 * (1 - p2) / n)
        assert abs(p1 - p2) < 2.0 * se


def test_overshoot_cdf_values():
    assert sub.overshoot_cdf(0.6, 0.0) == 0.0
    assert sub.phi_alpha(0.5, 1.0) == pytest.approx(0.5, abs=1e-12)
    for alpha in (0.55, 0.6, 0.75, 0.9):
        assert sub.phi_alpha(alpha, np.inf) == pytest.approx(1.0, abs=1e-8)


def test_phi_alpha_against_quadrature_oracle():
    for alpha in (0.3, 0.6, 0.75):
        for y in (0.05, 0.7, 2.5, 40.0):
            ref = quad(lambda u: u ** (-alpha) / (1 + u), 0, y,
                       points=[0], limit=300)[0] * math.sin(math.pi * alpha) / math.pi
            assert sub.phi_alpha(alpha, y) == pytest.approx(ref, abs=2e-11)


def test_phi_alpha_small_y_limit():
    for alpha in (0.6, 0.75):
        lim = sub.phi_alpha_small_y_limit(alpha)
        for y in (1e-6, 1e-8):
            val = y ** (alpha - 1.0) * sub.phi_alpha(alpha, y)
            assert val == pytest.approx(lim, rel=1e-4)


def test_overshoot_pdf_formula():
    x = np.array([0.2, 1.0, 7.0])
    got = sub.overshoot_pdf(0.75, x)
    ref = math.sin(0.75 * math.pi) / math.pi * x ** -0.75 / (1 + x)
    assert np.allclose(got, ref, rtol=1e-14)


def test_phi_monotone_and_bounded():
    y = np.geomspace(1e-4, 1e4, 200)
    vals = sub.phi_alpha(0.75, y)
    assert np.all(np.diff(vals) > 0)
    assert vals[-1] < 1.0


def test_conditioned_sample_respects_epsilon():
    cfg = sub.SubordinatorConfig(alpha=0.6, delta=1e-3, drift_comp=True)
    rec = sub.sample_conditioned(cfg, epsilon=0.2, rng=9, max_attempts=5000)
    assert rec.hit and rec.chi <= 0.2
    assert "attempts" in rec.meta


def test_conditioned_attempts_exhausted():
    cfg = sub.SubordinatorConfig(alpha=0.75, delta=1e-3, drift_comp=False)
    with pytest.raises(AttemptsExhausted):
        sub.sample_conditioned(cfg, epsilon=1e-9, rng=10, max_attempts=20)


def test_conditioned_batch_acceptance_rate():
    alpha, eps = 0.6, 0.1
    cfg = sub.SubordinatorConfig(alpha=alpha, delta=1e-4, drift_comp=True)
    taus, chis, attempts = sub.conditioned_batch(cfg, eps, 3000, seed=11)
    assert np.all(chis <= eps)
    phi = sub.phi_alpha(alpha, eps)
    se = math.sqrt(phi * (1 - phi) / attempts)
    assert abs(3000 / attempts - phi) <= 3.0 * se


def test_passage_csv_shape():
    text = sub.passage_csv([1.0, 2.0], [0.1, 0.0], [1, 0])
    lines = text.splitlines()
    assert lines[0] == "replica,tau,chi,accepted"
    assert len(lines) == 3
