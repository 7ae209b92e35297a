"""Tests for summaries, the Jarque-Bera test, alarming levels and histograms."""

import io
import math

import numpy as np
import pytest
from scipy import stats

from gini_alarm.engine.errors import DegenerateSample, TooFewSamples
from gini_alarm.engine.inference import (
    alarm_level,
    expected_counts,
    fit_normal,
    histogram,
    jarque_bera,
    render_ascii_histogram,
    summary,
    tail_probability,
    write_histogram_csv,
)

ALTERNATING = [1.0, -1.0] * 5


class TestSummary:
    def test_two_points(self):
        s = summary([0.3, 0.5])
        assert s.mean == pytest.approx(0.4)
        assert s.std_dev == pytest.approx(0.141421, abs=1e-6)
        assert s.median == pytest.approx(0.4)

    def test_alternating_moments(self):
        s = summary(ALTERNATING)
        assert s.skewness == pytest.approx(0.0, abs=1e-12)
        assert s.kurtosis == pytest.approx(1.0, abs=1e-12)

    def test_constant_sample_is_degenerate(self):
        s = summary([0.4] * 10)
        assert s.degenerate
        assert s.skewness is None and s.kurtosis is None
        assert s.std_dev == pytest.approx(0.0, abs=1e-15)

    def test_too_few(self):
        with pytest.raises(TooFewSamples):
            summary([1.0])


class TestJarqueBera:
    def test_alternating_fixture(self):
        result = jarque_bera(ALTERNATING)
        assert result.statistic == pytest.approx(5 / 3, abs=1e-12)
        assert result.p_value == pytest.approx(math.exp(-5 / 6), abs=1e-12)
        assert not result.reject_at_5pct

    def test_matches_scipy(self):
        data = np.random.default_rng(8).gamma(2.0, size=500)
        ours = jarque_bera(data)
        reference = stats.jarque_bera(data)
        assert ours.statistic == pytest.approx(reference.statistic, rel=1e-10)
        assert ours.p_value == pytest.approx(reference.pvalue, rel=1e-8)

    def test_significance_is_configurable(self):
        result = jarque_bera(ALTERNATING, significance=0.5)
        assert result.rejected
        assert not result.reject_at_5pct

    def test_too_few(self):
        with pytest.raises(TooFewSamples):
            jarque_bera([1, 2, 3, 4, 5, 6, 7])

    def test_degenerate(self):
        with pytest.raises(DegenerateSample):
            jarque_bera([0.4] * 20)

    @pytest.mark.slow
    def test_normal_samples_rarely_rejected(self):
        kept = sum(
            not jarque_bera(np.random.default_rng(seed).normal(0.4, 0.08, 10_000)).reject_at_5pct
            for seed in range(100)
        )
        assert kept >= 94

    @pytest.mark.slow
    def test_exponential_samples_rejected(self):
        rejected = sum(
            jarque_bera(np.random.default_rng(seed).exponential(1.0, 10_000)).reject_at_5pct
            for seed in range(100)
        )
        assert rejected >= 99


class TestAlarmLevel:
    def test_two_sigma_rule(self):
        data = [0.3] * 4 + [0.5] * 4
        result = alarm_level(data)
        sigma = math.sqrt(8 * 0.1**2 / 7)
        assert result.mean == pytest.approx(0.4)
        assert result.std_dev == pytest.approx(sigma)
        assert result.alarm_level == pytest.approx(0.4 + 2 * sigma)
        assert result.alarm_level == result.mean + 2 * result.std_dev

    def test_three_sigma_variant(self):
        data = np.random.default_rng(1).normal(size=50)
        result = alarm_level(data, sigmas=3.0)
        assert result.alarm_level == result.mean + 3.0 * result.std_dev
        assert result.tail_probability == pytest.approx(0.00135, abs=1e-5)

    def test_constant_sample(self):
        result = alarm_level([0.4] * 10)
        assert result.alarm_level == pytest.approx(0.4)
        assert result.normality is None
        assert not result.valid
        assert any("DegenerateSample" in note for note in result.notes)

    def test_rejected_normality_invalidates(self):
        data = np.random.default_rng(2).exponential(size=2000)
        result = alarm_level(data)
        assert result.normality.rejected
        assert not result.valid
        assert result.notes

    def test_normal_sample_is_valid(self):
        data = np.random.default_rng(4).normal(0.4, 0.08, size=2000)
        result = alarm_level(data)
        assert result.valid == (not result.normality.rejected)

    def test_affine_equivariance(self):
        data = np.random.default_rng(3).normal(size=200)
        base = alarm_level(data)
        moved = alarm_level(2.5 * data + 7.0)
        assert moved.alarm_level == pytest.approx(2.5 * base.alarm_level + 7.0, rel=1e-12)
        assert moved.normality.statistic == pytest.approx(base.normality.statistic, rel=1e-9)

    @pytest.mark.slow
    def test_right_tail_exceedance(self):
        data = np.random.default_rng(10).normal(size=100_000)
        result = alarm_level(data)
        exceed = float(np.mean(data > result.alarm_level))
        assert exceed == pytest.approx(0.0228, abs=0.003)

    def test_too_few(self):
        with pytest.raises(TooFewSamples):
            alarm_level([0.1, 0.2])


def test_tail_probability():
    assert tail_probability(2.0) == pytest.approx(0.02275, abs=1e-5)
    assert tail_probability(2.0, two_sided=True) == pytest.approx(0.0455, abs=1e-4)


class TestHistogram:
    def test_equal_split(self):
        bins = histogram([0, 1, 2, 3], 2)
        assert [(b.start, b.end, b.count) for b in bins] == [(0, 1.5, 2), (1.5, 3, 2)]

    def test_single_point(self):
        bins = histogram([0.4], 3)
        assert [b.count for b in bins] == [1, 0, 0]

    def test_counts_follow_the_normal_law(self):
        data = np.random.default_rng(6).normal(size=10_000)
        bins = histogram(data, 30)
        assert sum(b.count for b in bins) == 10_000
        expected = expected_counts(fit_normal(data), bins, len(data))
        for b, e in zip(bins, expected):
            assert abs(b.count - e) <= 5 * math.sqrt(max(e, 1.0))

    def test_fit_normal_uses_ml_sigma(self):
        fit = fit_normal([0.3, 0.5])
        assert fit.mu == pytest.approx(0.4)
        assert fit.sigma == pytest.approx(0.1)

    def test_rendering(self):
        bins = histogram([0, 1, 2, 3, 3], 3)
        buffer = io.StringIO()
        write_histogram_csv(bins, buffer)
        assert buffer.getvalue().splitlines()[0] == "bin_start,bin_end,count"
        text = render_ascii_histogram(bins)
        assert len(text.splitlines()) == 3
        assert "#" in text
