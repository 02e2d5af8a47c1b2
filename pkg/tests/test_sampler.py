"""Monte Carlo sampling: predicates, estimates, intervals."""

import pytest
import scipy.stats

from leinert import (
    SampleConfig,
    StringModel,
    estimate_bad_frequency,
    estimate_decay_rate,
    is_bad,
    parse_signature,
    wilson_interval,
    word_from_text,
)
from leinert.sampler import (
    adjacent_repeat_test,
    parity_test,
    reduce_reorder_test,
    sample_string,
    synthetic_normal_frequencies,
)
from leinert import rng

F2F2 = parse_signature("F2xF2")
KERNEL8 = "f1g1' f1g2 f2g1' f2g2 f1g2' f1g1 f2g2' f2g1"


def w(text):
    return word_from_text(F2F2, text)


class TestPredicates:
    def test_parity_necessary_for_bad(self):
        word = w(KERNEL8)
        assert is_bad(word) and parity_test(word)
        assert not parity_test(w("f1g1' f2g1"))

    def test_parity_not_sufficient(self):
        # balanced exponents but nontrivial in the factor free group
        word = w("f1g1' f1g2' f1g1 f1g2")
        assert parity_test(word) and not is_bad(word)

    def test_adjacent_repeat(self):
        assert adjacent_repeat_test(w(KERNEL8))
        assert not adjacent_repeat_test(w("f1g1 f1g1"))

    def test_reduce_reorder_exact(self):
        assert reduce_reorder_test(w(KERNEL8))
        assert not reduce_reorder_test(w("f1g1' f2g1"))

    def test_reduce_reorder_capped_misses_braided_cancellation(self):
        # the interleaved kernel only cancels through the factor stacks;
        # a string-adjacent scanner never fires on it
        word = w(KERNEL8)
        assert not reduce_reorder_test(word, max_passes=8)
        # but a plainly nested string is caught in one pass
        nested = w("f1g1 f2g1 f2g1' f1g1'")
        assert reduce_reorder_test(nested, max_passes=1)


class TestSampling:
    def test_sample_string_models(self):
        gen = rng.philox(1, 2)
        for model in (StringModel.VALID, StringModel.REDUCED):
            word = sample_string(F2F2, 8, model, gen)
            assert len(word) == 8
            if model is StringModel.VALID:
                assert all(
                    ell.exp == (-1 if k % 2 == 0 else 1)
                    for k, ell in enumerate(word.letters)
                )

    def test_deterministic_given_seed(self):
        config = SampleConfig(F2F2, 8, 2000, seed=5)
        a = estimate_bad_frequency(config)
        b = estimate_bad_frequency(config)
        assert a == b

    def test_seed_changes_draws(self):
        a = estimate_bad_frequency(SampleConfig(F2F2, 8, 2000, seed=5))
        b = estimate_bad_frequency(SampleConfig(F2F2, 8, 2000, seed=6))
        assert a != b

    def test_short_lengths_find_nothing(self):
        report = estimate_bad_frequency(SampleConfig(F2F2, 6, 5000, seed=1))
        assert report.bad_count == 0

    def test_interval_covers_truth_at_eight(self):
        truth = 16 / 8748
        report = estimate_bad_frequency(SampleConfig(F2F2, 8, 60_000, seed=0))
        lo, hi = report.wilson_interval_95
        assert lo < truth < hi

    def test_counts_match_interval_inputs(self):
        report = estimate_bad_frequency(SampleConfig(F2F2, 8, 4000, seed=9))
        assert report.wilson_interval_95 == wilson_interval(report.bad_count, 4000)

    def test_reduced_model_runs(self):
        report = estimate_bad_frequency(
            SampleConfig(F2F2, 8, 4000, seed=2, model=StringModel.REDUCED)
        )
        assert 0 <= report.bad_count <= 4000


class TestWilson:
    def test_matches_direct_formula(self):
        z = scipy.stats.norm.ppf(0.975)
        for k, n in ((0, 50), (3, 100), (17, 40), (100, 100)):
            lo, hi = wilson_interval(k, n)
            p = k / n
            center = (p + z * z / (2 * n)) / (1 + z * z / n)
            half = (
                z / (1 + z * z / n) * ((p * (1 - p) / n + z * z / (4 * n * n)) ** 0.5)
            )
            assert lo == pytest.approx(center - half, abs=1e-12)
            assert hi == pytest.approx(center + half, abs=1e-12)

    def test_bounds_and_ordering(self):
        lo, hi = wilson_interval(0, 30)
        assert 0 <= lo < hi < 1
        lo, hi = wilson_interval(30, 30)
        assert 0 < lo < hi <= 1

    def test_coverage_simulation(self):
        # 95 percent coverage for a fair coin, many repetitions
        gen = rng.philox(0, 77)
        n, p = 200, 0.3
        hits = 0
        reps = 400
        for _ in range(reps):
            k = int(gen.binomial(n, p))
            lo, hi = wilson_interval(k, n)
            hits += lo <= p <= hi
        assert hits / reps > 0.9


class TestDecayRate:
    def test_fits_census_scale(self):
        est = estimate_decay_rate(F2F2, [8, 10, 12], 40_000, seed=4)
        assert len(est.lengths) == 3
        assert 0 < est.rate < 1

    def test_synthetic_is_labeled_synthetic(self):
        assert "non-physical" in synthetic_normal_frequencies.__doc__

    def test_synthetic_shape_and_determinism(self):
        a = synthetic_normal_frequencies([4, 6, 8], 50, seed=3)
        b = synthetic_normal_frequencies([4, 6, 8], 50, seed=3)
        assert a.shape == (3, 50)
        assert (a == b).all()
