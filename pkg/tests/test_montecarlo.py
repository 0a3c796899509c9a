import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from familyplan import montecarlo as mc
from familyplan import series, share
from familyplan.errors import BirthCapError, DomainError

# allowance for series truncation when a band is otherwise zero-width
TRUNC = 1e-9


class _ForcedStream:
    def __init__(self, values):
        self._values = list(values)

    def random(self):
        return self._values.pop(0)


class _RecordingStream:
    def __init__(self, inner):
        self._inner = inner
        self.draws = []

    def random(self):
        u = self._inner.random()
        self.draws.append(u)
        return u


class TestSimulateFamily:
    def test_forced_boy_boy_stream(self):
        outcome = mc.simulate_family((2, 0), 0.7, _ForcedStream([0.0, 0.0]))
        assert (outcome.boys, outcome.girls, outcome.total) == (2, 0, 2)
        assert outcome.martingale_terminal == pytest.approx(2.0 / 0.7)
        assert outcome.girl_share == 0.0

    def test_single_boy_rule_always_has_one_boy(self):
        for index in range(200):
            outcome = mc.simulate_family((1, 0), 0.4, mc.FamilyStream(11, index))
            assert outcome.boys == 1
            assert outcome.girls == outcome.total - 1

    def test_one_each_rule_needs_at_least_two(self):
        for index in range(200):
            outcome = mc.simulate_family((1, 1), 0.6, mc.FamilyStream(5, index))
            assert outcome.total >= 2

    def test_rejects_zero_rule(self):
        with pytest.raises(DomainError):
            mc.simulate_family((0, 0), 0.5, mc.FamilyStream(0, 0))

    def test_birth_cap_reported(self):
        with pytest.raises(BirthCapError):
            mc.simulate_family((1, 0), 1e-12, mc.FamilyStream(0, 0), birth_cap=50)

    @settings(max_examples=60, deadline=None)
    @given(
        n=st.integers(0, 3),
        k=st.integers(0, 3),
        p=st.floats(0.2, 0.8),
        seed=st.integers(0, 2**64 - 1),
        index=st.integers(0, 1000),
    )
    def test_stops_at_first_satisfaction(self, n, k, p, seed, index):
        if n + k < 1:
            n = 1
        recorder = _RecordingStream(mc.FamilyStream(seed, index))
        outcome = mc.simulate_family((n, k), p, recorder)
        # closing birth pins the just-reached count exactly
        assert (outcome.boys == n and outcome.girls >= k) or (
            outcome.girls == k and outcome.boys >= n
        )
        # replay the recorded uniforms: no earlier prefix satisfies the rule
        boys = girls = 0
        for u in recorder.draws[:-1]:
            if u < p:
                boys += 1
            else:
                girls += 1
            assert not (boys >= n and girls >= k)


class TestSubstreams:
    def test_scalar_and_vector_paths_agree_bitwise(self):
        rule, p, seed = (2, 1), 0.37, 987654321
        boys, girls, totals = mc.sample_outcomes(rule, p, 400, seed)
        for index in range(400):
            outcome = mc.simulate_family(rule, p, mc.FamilyStream(seed, index))
            assert outcome.boys == boys[index]
            assert outcome.girls == girls[index]
            assert outcome.total == totals[index]

    def test_block_size_never_changes_results(self):
        a = mc.sample_outcomes((1, 1), 0.5, 1000, 3, block_size=64)
        b = mc.sample_outcomes((1, 1), 0.5, 1000, 3, block_size=1 << 16)
        for left, right in zip(a, b):
            assert np.array_equal(left, right)

    def test_streams_differ_across_indices(self):
        u0 = [mc.FamilyStream(0, 0).random() for _ in range(1)]
        u1 = [mc.FamilyStream(0, 1).random() for _ in range(1)]
        assert u0 != u1

    def test_vector_birth_cap(self):
        with pytest.raises(BirthCapError):
            mc.sample_outcomes((1, 0), 1e-12, 10, 0, birth_cap=50)


class TestRunSimulation:
    def test_identical_seeds_reproduce_identical_summaries(self):
        first = mc.run_simulation((1, 1), 0.5, 20_000, 42)
        second = mc.run_simulation((1, 1), 0.5, 20_000, 42)
        assert first == second

    def test_different_seeds_differ(self):
        first = mc.run_simulation((1, 1), 0.5, 20_000, 1)
        second = mc.run_simulation((1, 1), 0.5, 20_000, 2)
        assert first != second

    def test_summary_matches_raw_outcome_arrays(self):
        rule, p, samples, seed = (2, 0), 0.6, 50_000, 9
        summary = mc.run_simulation(rule, p, samples, seed)
        boys, girls, totals = mc.sample_outcomes(rule, p, samples, seed)
        assert summary.mean_boys == np.mean(boys.astype(np.float64))
        assert summary.mean_total == np.mean(totals.astype(np.float64))
        assert summary.ratio_estimate == summary.mean_boys / summary.mean_girls
        expected_se = np.std(totals.astype(np.float64), ddof=1) / math.sqrt(samples)
        assert summary.se_total == pytest.approx(expected_se, rel=1e-12)

    def test_seed_is_masked_to_64_bits(self):
        wide = mc.run_simulation((1, 1), 0.5, 1000, 2**64 + 5)
        narrow = mc.run_simulation((1, 1), 0.5, 1000, 5)
        assert wide.mean_total == narrow.mean_total
        assert wide.seed == narrow.seed

    def test_rejects_bad_sample_counts(self):
        with pytest.raises(DomainError):
            mc.run_simulation((1, 1), 0.5, 0, 0)


GRID = [
    (n, k, p)
    for n in range(4)
    for k in range(4)
    if 1 <= n + k
    for p in (0.3, 0.5, 0.7)
]


@pytest.mark.parametrize("n,k,p", GRID)
def test_estimates_track_series_values_at_four_sigma(n, k, p):
    samples = 1_000_000
    seed = 97 * n + 13 * k + int(p * 10)
    boys, girls, totals = mc.sample_outcomes((n, k), p, samples, seed)
    boys_f = boys.astype(np.float64)
    girls_f = girls.astype(np.float64)
    totals_f = totals.astype(np.float64)
    shares = girls_f / totals_f
    martingales = boys_f / p - girls_f / (1.0 - p)

    def band(values):
        return 4.0 * np.std(values, ddof=1) / math.sqrt(samples) + TRUNC

    tol = 1e-12
    assert abs(np.mean(boys_f) - series.expected_boys((n, k), p, tol).value) <= band(boys_f)
    assert abs(np.mean(girls_f) - series.expected_girls((n, k), p, tol).value) <= band(girls_f)
    assert abs(np.mean(totals_f) - series.expected_family_size((n, k), p, tol).value) <= band(
        totals_f
    )
    assert abs(np.mean(shares) - share.average_share((n, k), p, tol).value) <= band(shares)
    # optional-stopping check: the terminal martingale mean sits at zero
    assert abs(np.mean(martingales)) <= band(martingales)

    # delta-method band for the ratio-of-means estimator
    mean_boys, mean_girls = np.mean(boys_f), np.mean(girls_f)
    var_boys = np.var(boys_f, ddof=1)
    var_girls = np.var(girls_f, ddof=1)
    cov = np.cov(boys_f, girls_f, ddof=1)[0, 1]
    ratio = mean_boys / mean_girls
    ratio_var = (
        var_boys / mean_girls**2
        + mean_boys**2 * var_girls / mean_girls**4
        - 2.0 * mean_boys * cov / mean_girls**3
    ) / samples
    odds = p / (1.0 - p)
    assert abs(ratio - odds) <= 4.0 * math.sqrt(max(ratio_var, 0.0)) + TRUNC
