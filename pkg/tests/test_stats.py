import math

import numpy as np
import pytest

from nonovershoot import rng
from nonovershoot.errors import DegenerateWeights
from nonovershoot.stats import (Accumulator, aggregate, effective_sample_size,
                                ks_one_sample, ks_two_sample, weighted_ecdf)


def test_ecdf_equal_weights():
    e = weighted_ecdf([1.0, 2.0, 3.0])
    assert np.allclose(e.cum, [1 / 3, 2 / 3, 1.0])
    assert e(0.5) == 0.0
    assert e(1.0) == pytest.approx(1 / 3)
    assert e(np.inf) == 1.0


def test_ecdf_zero_weight_drops_to_point_mass():
    e = weighted_ecdf([1.0, 5.0], weights=[1.0, 0.0])
    assert e(1.0) == 1.0
    assert e(0.999) == 0.0


def test_ecdf_all_zero_weights_raises():
    with pytest.raises(DegenerateWeights):
        weighted_ecdf([1.0, 2.0], weights=[0.0, 0.0])


def test_ks_same_sample_is_zero():
    x = rng.Stream.from_seed(1).uniforms(500)
    d, p = ks_two_sample(x, x)
    assert d == 0.0 and p == pytest.approx(1.0)


def test_ks_disjoint_point_masses():
    d, _ = ks_two_sample([0.0], [1.0])
    assert d == 1.0


def test_ks_uniform_against_identity():
    u = rng.Stream.from_seed(3).uniforms(10_000)
    d = ks_one_sample(u, lambda x: np.clip(x, 0.0, 1.0))
    assert d < 1.63 / math.sqrt(u.size)  # 1% critical value


def test_ks_two_sample_p_value_calibration():
    # under the null, p should not be extreme at a fixed healthy seed
    s = rng.Stream.from_seed(9)
    a, b = s.uniforms(4000), s.uniforms(4000)
    d, p = ks_two_sample(a, b)
    assert p > 0.01


def test_aggregate_constant_has_zero_stderr():
    est = aggregate(np.full(10, 3.25))
    assert est.value == 3.25 and est.stderr == 0.0 and est.n == 10


def test_merge_matches_one_shot():
    s = rng.Stream.from_seed(4)
    x = s.uniforms(2000) * 3.0
    w = s.uniforms(2000)
    acc_a = Accumulator().add(x[:700], w[:700])
    acc_b = Accumulator().add(x[700:], w[700:])
    merged = acc_a.merge(acc_b).estimate(weighted=True)
    whole = aggregate(x, w)
    assert merged.value == pytest.approx(whole.value, rel=1e-13)
    assert merged.stderr == pytest.approx(whole.stderr, rel=1e-12)


def test_aggregation_permutation_invariant():
    s = rng.Stream.from_seed(6)
    x = s.uniforms(5000) * 100.0 - 50.0
    perm = np.argsort(s.uniforms(5000))
    a = aggregate(x)
    b = aggregate(x[perm])
    assert a.value == pytest.approx(b.value, rel=1e-12)
    assert a.stderr == pytest.approx(b.stderr, rel=1e-12)


def test_ratio_stderr_against_bootstrap():
    s = rng.Stream.from_seed(10)
    vals = s.uniforms(800) ** 2
    w = np.exp(-2.0 * s.uniforms(800))
    est = aggregate(vals, w)
    ratios = []
    for b in range(10_000):
        sub = rng.Stream(rng.derive_key(123, 8, b))
        idx = (sub.uniforms(800) * 800).astype(int)
        ratios.append(np.sum(w[idx] * vals[idx]) / np.sum(w[idx]))
    boot = float(np.std(ratios, ddof=1))
    assert est.stderr == pytest.approx(boot, rel=0.10)


def test_effective_sample_size_limits():
    assert effective_sample_size(np.ones(50)) == pytest.approx(50.0)
    w = np.zeros(50)
    w[0] = 1.0
    assert effective_sample_size(w) == pytest.approx(1.0)


def test_ks_metric_properties():
    s = rng.Stream.from_seed(15)
    for _ in range(10):
        a = s.uniforms(200) * 4.0
        b = s.uniforms(150) * 5.0 - 1.0
        wa = s.uniforms(200) + 0.1
        wb = s.uniforms(150) + 0.1
        d_ab, _ = ks_two_sample(a, b, wa, wb)
        d_ba, _ = ks_two_sample(b, a, wb, wa)
        assert 0.0 <= d_ab <= 1.0
        assert d_ab == pytest.approx(d_ba, abs=1e-15)
        # zero iff identical weighted supports
        d_same, _ = ks_two_sample(a, a, wa, wa)
        assert d_same == 0.0


def test_equal_weights_reduce_to_unweighted_ks():
    s = rng.Stream.from_seed(12)
    a, b = s.uniforms(1000), s.uniforms(1000) * 1.1
    d1, p1 = ks_two_sample(a, b)
    d2, p2 = ks_two_sample(a, b, weights_a=np.ones(1000), weights_b=np.ones(1000))
    assert d1 == pytest.approx(d2) and p1 == pytest.approx(p2)
