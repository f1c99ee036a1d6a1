import numpy as np
import pytest

from nonovershoot import rng
from nonovershoot.errors import ExhaustedError
from nonovershoot.paths import (JumpSkeleton, first_passage, scaled_walk_path,
                                sigma_inverse, sigma_of, skeleton_to_csv)


def test_right_continuity_and_left_limits():
    sk = JumpSkeleton(np.array([1.0, 2.0]), np.array([0.5, 0.25]), origin=1.0)
    assert sk.value(1.0) == 1.5          # includes the jump at t
    assert sk.left_limit(1.0) == 1.0     # excludes it
    assert sk.value(0.5) == 1.0
    assert sk.value(2.0) == 1.75
    assert sk.left_limit(2.0) == 1.5
    assert sk.value(10.0) == 1.75


def test_skeleton_validation():
    with pytest.raises(ValueError):
        JumpSkeleton(np.array([2.0, 1.0]), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        JumpSkeleton(np.array([1.0]), np.array([1.0, 2.0]))


def test_first_passage_deterministic_steps():
    sk = JumpSkeleton(np.arange(1.0, 6.0), np.full(5, 0.5))
    tau, chi, hit = first_passage(sk, 1.0)
    assert hit and tau == 2.0 and chi == 0.0


def test_first_passage_overshoot_arithmetic():
    sk = JumpSkeleton(np.array([1.0, 2.0]), np.array([0.4, 0.9]))
    tau, chi, hit = first_passage(sk, 1.0)
    assert hit and tau == 2.0 and chi == pytest.approx(0.3)


def test_first_passage_empty_skeleton():
    sk = JumpSkeleton(np.zeros(0), np.zeros(0))
    tau, chi, hit = first_passage(sk, 1.0)
    assert not hit and np.isnan(tau) and np.isnan(chi)


def test_time_change_identity_for_constant_path():
    sk = JumpSkeleton(np.zeros(0), np.zeros(0), origin=1.0)
    for t in (0.0, 0.3, 5.0):
        assert sigma_of(sk, 0.7, t) == pytest.approx(t, abs=1e-15)
        assert sigma_inverse(sk, 0.7, t) == pytest.approx(t, abs=1e-15)


def test_time_change_hand_example():
    # value 1 on [0,1), then 2^(-1/alpha): the clock slope halves, so
    # sigma(1.5) = 1 + 0.5/(1/2) = 2 for any alpha
    for alpha in (0.3, 0.5, 0.75):
        v = 2.0 ** (-1.0 / alpha)
        sk = JumpSkeleton(np.array([1.0]), np.array([v - 1.0]), origin=1.0)
        assert sigma_of(sk, alpha, 1.5) == pytest.approx(2.0, rel=1e-14)


def test_time_change_round_trip_random_skeletons():
    stream = rng.Stream.from_seed(77)
    for alpha in (0.4, 0.75):
        for _ in range(20):
            n = 30
            times = np.cumsum(stream.uniforms(n) * 0.5 + 1e-3)
            # multiplicative decay to values within [1e-9, 1]
            factors = 0.2 + 0.8 * stream.uniforms(n)
            vals = np.cumprod(factors)
            vals = np.maximum(vals, 1e-9)
            sizes = np.diff(np.concatenate([[1.0], vals]))
            sk = JumpSkeleton(times, sizes, origin=1.0)
            total = sigma_inverse(sk, alpha, times[-1] + 1.0)
            ts = stream.uniforms(16) * total
            back = sigma_inverse(sk, alpha, sigma_of(sk, alpha, ts))
            assert np.allclose(back, ts, rtol=1e-12, atol=1e-15)


def test_time_change_exhausted_when_path_hits_zero():
    sk = JumpSkeleton(np.array([1.0]), np.array([-1.0]), origin=1.0)
    assert sigma_inverse(sk, 0.5, 10.0) == pytest.approx(1.0)
    with pytest.raises(ExhaustedError):
        sigma_of(sk, 0.5, 1.0)


def test_scaled_walk_single_step():
    sk = scaled_walk_path(np.array([2.0]), r=2.0, tail_at_r=0.25, tau_steps=1)
    assert sk.times.tolist() == [0.25]
    assert sk.sizes.tolist() == [1.0]


def test_scaled_walk_truncates_at_passage():
    sk = scaled_walk_path(np.array([1.0, 1.0, 2.0]), r=2.0, tail_at_r=0.25,
                          tau_steps=2)
    assert sk.times.tolist() == [0.25, 0.5]
    assert sk.sizes.tolist() == [0.5, 0.5]


def test_scaled_walk_value_identity():
    stream = rng.Stream.from_seed(5)
    inc = stream.uniforms(50) - 0.3
    r, tail = 3.0, 0.125
    cum = np.cumsum(inc)
    tau = int(np.argmax(cum >= r) + 1) if np.any(cum >= r) else len(inc)
    sk = scaled_walk_path(inc, r, tail, tau_steps=tau)
    for t in (0.0, 0.1, 0.9, 3.0, 100.0):
        k = min(int(np.floor(t / tail)), tau)
        expected = (cum[k - 1] if k >= 1 else 0.0) / r
        assert sk.value(t) == pytest.approx(expected, abs=1e-15)


def test_csv_export():
    sk = JumpSkeleton(np.array([1.0]), np.array([0.5]), origin=0.25)
    text = skeleton_to_csv(sk)
    assert text.splitlines() == ["time,value", "0.0,0.25", "1.0,0.75"]
