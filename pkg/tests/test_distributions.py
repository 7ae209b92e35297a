"""Tests for density models, Gini closed forms, quadrature and Lorenz curves."""

import io
import math

import numpy as np
import pytest
from scipy import integrate

from gini_alarm.engine.distributions import (
    ExponentialModel,
    ParetoModel,
    classify_gini,
    gini_exponential,
    gini_from_lorenz,
    gini_numeric,
    gini_pareto,
    gini_samples,
    lorenz_curve,
    model_gini_numeric,
    write_lorenz_csv,
)
from gini_alarm.engine.errors import (
    DataError,
    InvalidAlpha,
    InvalidGamma,
    NonFiniteMean,
    NotNormalized,
)


class TestModels:
    def test_exponential_support_and_density(self):
        model = ExponentialModel(alpha=-1.0, beta=2.0)
        assert model.support_start == 0.5
        assert model.pdf(0.25) == 0.0
        assert model.pdf(0.5) == pytest.approx(2.0)
        assert model.cdf(0.5) == 0.0
        assert model.mean() == pytest.approx(1.0)

    def test_pareto_support_and_density(self):
        model = ParetoModel(gamma=2.0, scale_a=1.0)
        assert model.pdf(0.5) == 0.0
        assert model.pdf(2.0) == pytest.approx(2.0 / 8.0)
        assert model.cdf(2.0) == pytest.approx(0.75)
        assert model.mean() == pytest.approx(2.0)
        assert ParetoModel(gamma=1.0, scale_a=1.0).mean() == math.inf

    def test_quantile_inverts_cdf(self):
        model = ExponentialModel(alpha=-0.5, beta=1.5)
        p = np.array([0.1, 0.5, 0.9])
        assert model.cdf(model.quantile(p)) == pytest.approx(p)
        with pytest.raises(DataError):
            model.quantile(1.5)

    def test_sampling_is_seeded(self):
        model = ExponentialModel(alpha=0.0, beta=1.0)
        first = model.sample(seed=3, count=100_000)
        assert np.array_equal(first, model.sample(seed=3, count=100_000))
        assert first.mean() == pytest.approx(1.0, abs=0.02)

    def test_parameter_validation(self):
        with pytest.raises(InvalidAlpha):
            ExponentialModel(alpha=0.5, beta=1.0)
        with pytest.raises(InvalidGamma):
            ParetoModel(gamma=0.9, scale_a=1.0)


def integrate_tail(fn, start, width):
    """∫ fn over [start, ∞), split so quad sees the bulk on a finite interval."""
    bulk, _ = integrate.quad(fn, start, start + width, epsabs=1e-13, epsrel=1e-12, limit=200)
    tail, _ = integrate.quad(fn, start + width, math.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
    return bulk + tail


def random_exponential_params(count, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield -float(rng.uniform(0, 10)), float(10 ** rng.uniform(-2, 2))


class TestNormalization:
    def test_exponential_density_integrates_to_one(self):
        for alpha, beta in random_exponential_params(20, seed=23):
            model = ExponentialModel(alpha=alpha, beta=beta)
            mass = integrate_tail(model.pdf, model.support_start, 50 / beta)
            assert mass == pytest.approx(1.0, abs=1e-8), (alpha, beta)

    @pytest.mark.parametrize("gamma, scale_a", [(1.0, 1.0), (1.5, 2.0), (2.0, 1.0), (3.0, 0.5), (10.0, 7.0)])
    def test_pareto_density_integrates_to_one(self, gamma, scale_a):
        model = ParetoModel(gamma=gamma, scale_a=scale_a)
        mass = integrate_tail(model.pdf, scale_a, 10 * scale_a)
        assert mass == pytest.approx(1.0, abs=1e-8)

    def test_exponential_mean_matches_first_moment(self):
        for alpha, beta in random_exponential_params(20, seed=29):
            model = ExponentialModel(alpha=alpha, beta=beta)
            moment = integrate_tail(lambda x: x * model.pdf(x), model.support_start, 60 / beta)
            assert moment == pytest.approx((1 - alpha) / beta, rel=1e-8), (alpha, beta)
            assert model.mean() == pytest.approx(moment, rel=1e-8)

    @pytest.mark.parametrize("gamma, scale_a", [(2.5, 1.0), (3.0, 3.0), (4.0, 0.2)])
    def test_pareto_mean_matches_first_moment(self, gamma, scale_a):
        model = ParetoModel(gamma=gamma, scale_a=scale_a)
        moment = integrate_tail(lambda x: x * model.pdf(x), scale_a, 10 * scale_a)
        assert moment == pytest.approx(model.mean(), rel=1e-6)

class TestClosedForms:
    @pytest.mark.parametrize("alpha, expected", [(0.0, 0.5), (-1.0, 0.25), (-4.0, 0.1)])
    def test_exponential(self, alpha, expected):
        assert gini_exponential(alpha) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize("gamma, expected", [(1.0, 1.0), (1.5, 0.5), (3.0, 0.2)])
    def test_pareto(self, gamma, expected):
        assert gini_pareto(gamma) == pytest.approx(expected, abs=1e-15)

    def test_invalid_parameters(self):
        with pytest.raises(InvalidAlpha):
            gini_exponential(0.1)
        with pytest.raises(InvalidGamma):
            gini_pareto(0.99)

    def test_bounds_hold_exactly(self):
        rng = np.random.default_rng(5)
        for alpha in np.concatenate(([0.0], -rng.uniform(0, 1000, 500))):
            assert 0.0 <= gini_exponential(alpha) <= 0.5
        for gamma in np.concatenate(([1.0], rng.uniform(1, 1000, 500))):
            assert 0.0 < gini_pareto(gamma) <= 1.0


class TestQuadrature:
    def test_uniform_density(self):
        assert gini_numeric(lambda x: 1.0, 0.0, 1.0) == pytest.approx(1 / 3, abs=1e-7)

    def test_rescaled_uniform_density(self):
        assert gini_numeric(lambda x: 1e-3, 0.0, 1000.0) == pytest.approx(1 / 3, abs=1e-7)

    def test_narrow_uniform_approaches_equality(self):
        values = [gini_numeric(lambda x, d=d: 1 / (2 * d), 1 - d, 1 + d) for d in (0.1, 0.01, 0.001)]
        assert values == sorted(values, reverse=True)
        assert values[-1] < 1e-3

    def test_exponential_density_without_hints(self):
        model = ExponentialModel(alpha=0.0, beta=1.0)
        assert gini_numeric(model.pdf, 0.0, math.inf) == pytest.approx(0.5, abs=1e-6)

    def test_full_output(self):
        value, abserr = gini_numeric(lambda x: 1.0, 0.0, 1.0, full_output=True)
        assert value == pytest.approx(1 / 3, abs=1e-7)
        assert 0 <= abserr < 1e-6

    def test_not_normalized(self):
        with pytest.raises(NotNormalized):
            gini_numeric(lambda x: 2.0, 0.0, 1.0)

    def test_pareto_with_unit_exponent_has_no_mean(self):
        model = ParetoModel(gamma=1.0, scale_a=1.0)
        with pytest.raises(NonFiniteMean):
            gini_numeric(model.pdf, 1.0, math.inf)
        with pytest.raises(NonFiniteMean):
            model_gini_numeric(model)

    def test_exponential_closed_form_matches_quadrature(self):
        rng = np.random.default_rng(17)
        for alpha in -rng.uniform(0, 10, 50):
            model = ExponentialModel(alpha=float(alpha), beta=1.0)
            assert abs(model.gini() - model_gini_numeric(model)) <= 1e-6

    def test_closed_form_matches_quadrature_over_alpha_and_beta(self):
        for alpha, beta in random_exponential_params(50, seed=31):
            model = ExponentialModel(alpha=alpha, beta=beta)
            assert abs(gini_exponential(alpha) - model_gini_numeric(model)) <= 1e-6, (alpha, beta)

    def test_pareto_closed_form_matches_truncated_quadrature(self):
        rng = np.random.default_rng(19)
        for gamma in rng.uniform(1.2, 10, 50):
            model = ParetoModel(gamma=float(gamma), scale_a=1.0)
            assert abs(model.gini() - model_gini_numeric(model)) <= 1e-4

    def test_pareto_with_fixed_truncation(self):
        model = ParetoModel(gamma=3.0, scale_a=1.0)
        assert model_gini_numeric(model, support_end=1e6) == pytest.approx(0.2, abs=1e-4)

    @pytest.mark.parametrize("beta", [0.01, 1.0, 100.0])
    def test_scale_invariance(self, beta):
        model = ExponentialModel(alpha=-2.0, beta=beta)
        assert model_gini_numeric(model) == pytest.approx(gini_exponential(-2.0), abs=1e-7)


class TestSampleGini:
    def test_equality_and_concentration(self):
        assert gini_samples([3, 3, 3]) == 0.0
        assert gini_samples([0, 0, 1]) == pytest.approx(2 / 3)

    def test_invalid(self):
        with pytest.raises(DataError):
            gini_samples([])
        with pytest.raises(DataError):
            gini_samples([-1, 2])
        with pytest.raises(DataError):
            gini_samples([0, 0])

    def test_large_exponential_sample(self):
        samples = ExponentialModel(0.0, 1.0).sample(seed=1, count=200_000)
        assert gini_samples(samples) == pytest.approx(0.5, abs=0.01)

    def test_million_exponential_samples(self):
        samples = ExponentialModel(0.0, 1.0).sample(seed=2, count=1_000_000)
        assert gini_samples(samples) == pytest.approx(0.5, abs=0.002)


class TestLorenz:
    def test_equality_gives_the_diagonal(self):
        curve = lorenz_curve([2.0, 2.0, 2.0, 2.0], 5)
        for p, share in curve:
            assert share == pytest.approx(p)

    def test_exponential_area(self):
        curve = lorenz_curve(ExponentialModel(0.0, 1.0), 10_000)
        assert gini_from_lorenz(curve) == pytest.approx(0.5, abs=1e-3)

    def test_pareto_area(self):
        curve = lorenz_curve(ParetoModel(2.0, 1.0), 10_000)
        assert gini_from_lorenz(curve) == pytest.approx(1 / 3, abs=1e-3)

    def test_shifted_exponential_matches_closed_form(self):
        model = ExponentialModel(-1.0, 0.5)
        curve = lorenz_curve(model, 10_000)
        assert gini_from_lorenz(curve) == pytest.approx(model.gini(), abs=1e-3)

    def test_sample_curve_matches_sample_gini(self):
        samples = np.array([1.0, 2.0, 4.0, 8.0, 16.0])
        curve = lorenz_curve(samples, len(samples) + 1)
        assert gini_from_lorenz(curve) == pytest.approx(gini_samples(samples), abs=1e-12)

    def test_endpoints_and_monotonicity(self):
        curve = lorenz_curve(ParetoModel(1.5, 2.0), 101)
        shares = [share for _, share in curve]
        assert shares[0] == 0.0 and shares[-1] == 1.0
        assert all(b >= a for a, b in zip(shares, shares[1:]))

    def test_unit_exponent_pareto_has_no_curve(self):
        with pytest.raises(NonFiniteMean):
            lorenz_curve(ParetoModel(1.0, 1.0), 11)

    def test_csv_output(self):
        buffer = io.StringIO()
        write_lorenz_csv(lorenz_curve(ExponentialModel(0.0, 1.0), 3), buffer)
        lines = buffer.getvalue().splitlines()
        assert lines[0] == "population_share,income_share"
        assert len(lines) == 4
        assert lines[-1] == "1.0000000000,1.0000000000"


@pytest.mark.parametrize(
    "gini, label",
    [(0.3, "below_conventional"), (0.4, "between"), (0.5, "between"), (0.58, "above_fair_bound")],
)
def test_classify_gini(gini, label):
    assert classify_gini(gini) == label
