"""Exact jump laws, path invariants, reproducibility, and estimator accuracy."""

import math
from fractions import Fraction

import numpy as np
import pytest

from bscoal.analytics import TimePoint, absorption_cdf, block_tail_via_duality, fixation_marginal
from bscoal.limits import sample_mittag_leffler
from bscoal.simulate import (
    PathSample,
    estimate_hitting,
    ks_distance,
    replicate_rng,
    sample_absorption_times,
    sample_block_marginal,
    sample_fixation_marginal,
    scaled_marginal_sample,
    simulate_block,
    simulate_fixation,
)
from bscoal.simulate import _block_decrement  # noqa: F401  (jump-law test below)

# chi-square critical value at p = 0.001, df = 9 (frozen table value)
CHI2_CRIT_9_999 = 27.877


def block_decrement_pmf(i: int) -> list[Fraction]:
    """Exact decrement law from state i: pmf over m = 1..i-1."""
    pmf = [Fraction(i, (i - 1) * m * (m + 1)) for m in range(1, i - 1)]
    pmf.append(Fraction(1, (i - 1) ** 2))  # residual mass straight to state 1
    return pmf


class TestJumpLaws:
    def test_block_pmf_sums_to_one_exactly(self):
        for i in range(2, 101):
            assert sum(block_decrement_pmf(i), Fraction(0)) == 1

    def test_block_inverse_transform_matches_pmf(self):
        # the closed-form inverse transform must send the midpoint of each
        # cdf interval to the matching decrement
        for i in range(2, 61):
            pmf = block_decrement_pmf(i)
            cdf = [Fraction(0)]
            for p in pmf:
                cdf.append(cdf[-1] + p)
            for m in range(1, i):
                mid = float((cdf[m - 1] + cdf[m]) / 2)
                assert int(_block_decrement(float(i), mid)) == m

    def test_fixation_increment_chi_square(self):
        rng = replicate_rng(11)
        u = 1.0 - rng.random(10**6)
        eta = np.floor(1.0 / u).astype(np.int64)
        # bins m = 1..9 plus the tail m >= 10; P(m) = 1/(m(m+1)), tail 1/10
        obs = np.array([(eta == m).sum() for m in range(1, 10)] + [(eta >= 10).sum()])
        p = np.array([1.0 / (m * (m + 1)) for m in range(1, 10)] + [0.1])
        exp = p * eta.size
        chi2 = float(((obs - exp) ** 2 / exp).sum())
        assert chi2 < CHI2_CRIT_9_999


class TestPaths:
    def test_block_path_invariants(self):
        rng = replicate_rng(12)
        path = simulate_block(40, horizon=100.0, rng=rng)
        states = path.states
        assert states[0] == 40 and states[-1] == 1
        assert all(b < a for a, b in zip(states, states[1:]))
        assert all(t2 > t1 for t1, t2 in zip(path.jump_times, path.jump_times[1:]))

    def test_block_initial_state_one(self):
        path = simulate_block(1, horizon=5.0, rng=replicate_rng(13))
        assert len(path.jump_times) == 0 and list(path.states) == [1]

    def test_block_two_jumps_to_one_at_exponential_time(self):
        times = [
            simulate_block(2, horizon=1e9, rng=replicate_rng(14, k)).jump_times[0]
            for k in range(4000)
        ]
        assert np.mean(times) == pytest.approx(1.0, abs=4 / math.sqrt(4000))

    def test_fixation_path_invariants(self):
        path = simulate_fixation(3, state_cap=500, rng=replicate_rng(15))
        states = path.states
        assert states[0] == 3 and states[-1] > 500
        assert all(b > a for a, b in zip(states, states[1:]))

    def test_path_sample_shape_check(self):
        with pytest.raises(ValueError):
            PathSample("block", 3, np.array([0.5]), np.array([3]))


class TestReproducibility:
    def test_paths_bitwise(self):
        a = simulate_block(30, 2.0, replicate_rng(99))
        b = simulate_block(30, 2.0, replicate_rng(99))
        assert np.array_equal(a.jump_times, b.jump_times)
        assert np.array_equal(a.states, b.states)

    def test_marginals_bitwise(self):
        a = sample_fixation_marginal(50, 0.5, 200, replicate_rng(98))
        b = sample_fixation_marginal(50, 0.5, 200, replicate_rng(98))
        assert np.array_equal(a, b)

    def test_substreams_differ(self):
        a = sample_block_marginal(30, 1.0, 100, replicate_rng(97, 0))
        b = sample_block_marginal(30, 1.0, 100, replicate_rng(97, 1))
        assert not np.array_equal(a, b)


class TestEstimators:
    def test_hitting_trivial(self):
        est = estimate_hitting(4, 4, 100, replicate_rng(16))
        assert est.value == 1.0 and est.std_error == 0.0

    def test_hitting_one_to_three(self):
        est = estimate_hitting(1, 3, 10**5, replicate_rng(17))
        assert abs(est.value - 5 / 12) < 3 * est.std_error

    def test_block_marginal_matches_duality(self):
        tp = TimePoint.from_time(1.0)
        s = sample_block_marginal(30, 1.0, 10**5, replicate_rng(18))
        p = block_tail_via_duality(30, 3, tp)
        se = math.sqrt(p * (1 - p) / s.size)
        assert abs((s <= 3).mean() - p) < 3 * se

    def test_absorption_times_match_cdf(self):
        taus = sample_absorption_times(50, 1, 10**5, replicate_rng(19))
        for t in (0.5, 1.0, 2.0):
            p = absorption_cdf(50, 1, t)
            se = math.sqrt(p * (1 - p) / taus.size)
            assert abs((taus <= t).mean() - p) < 3 * se

    def test_fixation_marginal_matches_exact_law(self):
        tp = TimePoint.from_time(0.7)
        s = sample_fixation_marginal(1, 0.7, 10**5, replicate_rng(20))
        for j in range(1, 11):
            p = fixation_marginal(tp, j)
            se = math.sqrt(p * (1 - p) / s.size)
            assert abs((s == j).mean() - p) < 3.5 * se

    def test_fixation_marginal_branching_mean(self):
        # mean of the state-1 marginal is 1/alpha, so from n it is n/alpha
        n, t = 200, 0.4
        s = sample_fixation_marginal(n, t, 20000, replicate_rng(21))
        alpha = math.exp(-t)
        se = s.std() / math.sqrt(s.size)
        assert abs(s.mean() - n / alpha) < 4 * se

    def test_scaled_block_time_zero(self):
        s = scaled_marginal_sample("block", 100, 0.0, 50, replicate_rng(22))
        assert np.all(s == 1.0)

    def test_scaled_domain(self):
        with pytest.raises(ValueError):
            scaled_marginal_sample("bogus", 10, 1.0, 10, replicate_rng(0))
        with pytest.raises(ValueError):
            scaled_marginal_sample("block", 1, 1.0, 10, replicate_rng(0))


class TestKsDistance:
    def test_point_mass(self):
        cdf = lambda x: np.where(np.asarray(x) >= 2.0, 1.0, 0.0)
        assert ks_distance([2.0] * 50, cdf) <= 1 / 50

    def test_uniform_samples(self):
        rng = replicate_rng(23)
        u = rng.random(10**4)
        d = ks_distance(u, lambda x: np.clip(x, 0.0, 1.0))
        assert d < 0.025

    def test_scalar_cdf_callable(self):
        d = ks_distance([0.2, 0.5, 0.9], lambda x: min(max(float(x), 0.0), 1.0))
        assert 0.0 <= d <= 1.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            ks_distance([], lambda x: 0.0)

    def test_scaled_block_converges_to_mittag_leffler(self):
        tp = TimePoint.from_time(1.0)
        ref = np.sort(sample_mittag_leffler(tp, replicate_rng(24), size=200000))
        cdf = lambda x: np.searchsorted(ref, x, side="right") / ref.size
        d_small = ks_distance(
            scaled_marginal_sample("block", 100, 1.0, 4000, replicate_rng(25)), cdf
        )
        d_large = ks_distance(
            scaled_marginal_sample("block", 10000, 1.0, 4000, replicate_rng(26)), cdf
        )
        assert d_large < d_small
