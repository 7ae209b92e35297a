"""Tests for the exchange simulators and tail estimators."""

import io
import math

import numpy as np
import pytest

from gini_alarm.config import SimConfig
from gini_alarm.engine.distributions import ExponentialModel, ParetoModel
from gini_alarm.engine.errors import (
    BadConfig,
    DataError,
    DegenerateSample,
    TooFewTailPoints,
)
from gini_alarm.engine.exchange import (
    ccdf_tail_slope,
    exponential_shape_fit,
    hill_tail_exponent,
    read_incomes_csv,
    run_fair_exchange,
    run_rich_get_richer,
    run_simulation,
    stationary_gini,
    write_incomes_csv,
    write_snapshots_csv,
)
from gini_alarm.engine.models import BoltzmannParams


def fair(**kwargs) -> SimConfig:
    values = {"agents": 100, "total_income": 100.0, "steps": 10_000, "seed": 1}
    values.update(kwargs)
    return SimConfig(regime="fair_exchange", **values)


def rich(base_weight=1.0, entry="staggered", **kwargs) -> SimConfig:
    values = {"agents": 100, "total_income": 1000.0, "steps": 10_000, "seed": 1}
    values.update(kwargs)
    return SimConfig(
        regime="rich_get_richer",
        regime_params={"base_weight": base_weight, "entry": entry},
        **values,
    )


class TestFairExchange:
    def test_single_exchange_conserves_income(self):
        snapshots = run_fair_exchange(fair(agents=2, total_income=1.0, steps=1, seed=42))
        final = snapshots[-1].incomes.incomes
        assert final[0] + final[1] == 1.0
        assert final != (0.5, 0.5)

    def test_conservation_over_many_steps(self):
        config = fair(steps=200_000, snapshot_every=20_000)
        final = run_fair_exchange(config)[-1]
        assert abs(math.fsum(final.incomes.incomes) - config.total_income) <= 1e-9 * config.total_income
        assert min(final.incomes.incomes) >= 0.0

    def test_determinism(self):
        assert run_fair_exchange(fair(seed=9)) == run_fair_exchange(fair(seed=9))
        assert run_fair_exchange(fair(seed=9)) != run_fair_exchange(fair(seed=10))

    def test_snapshot_cadence(self):
        snapshots = run_fair_exchange(fair(steps=1000, snapshot_every=300))
        assert [s.step for s in snapshots] == [300, 600, 900, 1000]

    def test_default_cadence_is_one_percent(self):
        snapshots = run_fair_exchange(fair(steps=1000))
        assert len(snapshots) == 100
        assert snapshots[0].step == 10

    def test_zero_steps(self):
        snapshots = run_fair_exchange(fair(steps=0))
        assert len(snapshots) == 1
        assert snapshots[0].gini == 0.0

    def test_final_snapshot_carries_boltzmann_fit(self):
        final = run_fair_exchange(fair(steps=50_000))[-1]
        assert isinstance(final.fitted_params, BoltzmannParams)
        assert final.fitted_params.beta > 0

    def test_wrong_regime(self):
        with pytest.raises(BadConfig):
            run_fair_exchange(rich())

    @pytest.mark.slow
    def test_stationary_law_is_exponential(self):
        config = fair(agents=1000, total_income=1000.0, steps=1_000_000, seed=3)
        snapshots = run_fair_exchange(config)
        assert stationary_gini(snapshots, config.burn_in_fraction) == pytest.approx(0.5, abs=0.02)

        kept = snapshots[len(snapshots) // 2:]
        pooled = np.concatenate([s.incomes.as_array() for s in kept])
        fit = exponential_shape_fit(pooled)
        assert fit.r_squared >= 0.98
        assert fit.beta == pytest.approx(1.0, abs=0.1)


class TestRichGetRicher:
    def test_first_award_is_uniform_when_everyone_starts_active(self):
        agents, trials = 5, 5000
        winners = np.zeros(agents, dtype=int)
        for seed in range(trials):
            config = rich(entry="all", agents=agents, steps=1, total_income=1.0, seed=seed)
            incomes = run_rich_get_richer(config)[-1].incomes.incomes
            winners[int(np.argmax(incomes))] += 1
        p = 1 / agents
        sigma = math.sqrt(trials * p * (1 - p))
        assert np.all(np.abs(winners - trials * p) <= 3 * sigma)

    def test_total_grows_by_one_unit_per_step(self):
        config = rich(steps=1000, snapshot_every=100)
        snapshots = run_rich_get_richer(config)
        unit = config.total_income / config.steps
        for s in snapshots:
            assert math.fsum(s.incomes.incomes) == pytest.approx(s.step * unit)
            assert min(s.incomes.incomes) >= 0.0
        assert snapshots[-1].incomes.total == pytest.approx(config.total_income)

    def test_determinism(self):
        assert run_rich_get_richer(rich(seed=5)) == run_rich_get_richer(rich(seed=5))

    def test_dispatch(self):
        assert run_simulation(rich(seed=2)) == run_rich_get_richer(rich(seed=2))
        assert run_simulation(fair(seed=2)) == run_fair_exchange(fair(seed=2))

    def test_wrong_regime(self):
        with pytest.raises(BadConfig):
            run_rich_get_richer(fair())

    @pytest.mark.slow
    def test_preferential_growth_exceeds_the_fair_bound(self):
        config = rich(agents=10_000, steps=1_000_000, total_income=1e6, seed=1)
        final = run_rich_get_richer(config)[-1]
        assert final.gini > 0.55
        slope = ccdf_tail_slope(final.incomes.as_array(), 0.1)
        # staggered entry: tail exponent about 1 + base_weight * agents / steps
        assert -1.5 <= slope <= -0.6
        assert final.fitted_params is not None

    @pytest.mark.slow
    def test_tail_steepens_with_base_weight(self):
        config = rich(agents=10_000, steps=100_000, base_weight=10.0, seed=4)
        final = run_rich_get_richer(config)[-1]
        slope = ccdf_tail_slope(final.incomes.as_array(), 0.01)
        assert -3.5 <= slope <= -1.5

    @pytest.mark.slow
    def test_regime_separation(self):
        for seed in range(20):
            fair_run = run_fair_exchange(fair(agents=1000, total_income=1000.0, steps=100_000, seed=seed))
            rich_run = run_rich_get_richer(rich(agents=1000, steps=100_000, seed=seed))
            assert stationary_gini(fair_run) < 0.55
            assert rich_run[-1].gini > 0.55


class TestTailEstimators:
    def test_hill_recovers_pareto_index(self):
        samples = ParetoModel(gamma=2.0, scale_a=1.0).sample(seed=11, count=100_000)
        assert hill_tail_exponent(samples, 0.1) == pytest.approx(2.0, abs=0.15)

    def test_hill_drifts_upward_on_exponential_tails(self):
        samples = ExponentialModel(0.0, 1.0).sample(seed=12, count=100_000)
        estimates = [hill_tail_exponent(samples, f) for f in (0.2, 0.05, 0.01)]
        assert estimates == sorted(estimates)

    def test_ccdf_slope_on_pareto(self):
        samples = ParetoModel(gamma=2.0, scale_a=1.0).sample(seed=13, count=100_000)
        assert ccdf_tail_slope(samples, 0.1) == pytest.approx(-2.0, abs=0.2)

    def test_constant_samples(self):
        with pytest.raises((TooFewTailPoints, DegenerateSample)):
            hill_tail_exponent(np.ones(1000), 0.1)

    def test_too_few_tail_points(self):
        with pytest.raises(TooFewTailPoints):
            hill_tail_exponent(np.arange(1, 100, dtype=float), 0.1)

    def test_tail_fraction_range(self):
        with pytest.raises(DataError):
            hill_tail_exponent(np.arange(1, 1000, dtype=float), 0.6)


class TestSummaries:
    def test_stationary_gini_drops_burn_in(self):
        snapshots = run_fair_exchange(fair(steps=1000, snapshot_every=250))
        expected = np.mean([s.gini for s in snapshots[2:]])
        assert stationary_gini(snapshots, 0.5) == pytest.approx(expected)

    def test_shape_fit_on_exponential_sample(self):
        samples = ExponentialModel(0.0, 2.0).sample(seed=14, count=200_000)
        fit = exponential_shape_fit(samples)
        assert fit.r_squared >= 0.99
        assert fit.beta == pytest.approx(2.0, rel=0.05)

    def test_snapshot_csv(self):
        buffer = io.StringIO()
        snapshots = run_fair_exchange(fair(steps=1000, snapshot_every=500))
        write_snapshots_csv(snapshots, buffer)
        lines = buffer.getvalue().splitlines()
        assert lines[0] == "step,gini,total,alpha,beta,tail_exponent"
        assert len(lines) == 3
        assert lines[2].startswith("1000,")
        assert lines[2].split(",")[4] != ""

    def test_incomes_csv_keeps_every_agent(self):
        final = run_fair_exchange(fair(agents=25, steps=500))[-1]
        buffer = io.StringIO()
        write_incomes_csv(final, buffer)
        lines = buffer.getvalue().splitlines()
        assert lines[0] == "agent,income"
        assert [int(line.split(",")[0]) for line in lines[1:]] == list(range(25))
        buffer.seek(0)
        assert np.array_equal(read_incomes_csv(buffer), final.incomes.as_array())

    def test_incomes_csv_rejects_bad_values(self):
        with pytest.raises(DataError, match="line 3"):
            read_incomes_csv(io.StringIO("agent,income\n0,1.5\n1,lots\n"))
        with pytest.raises(DataError, match="income"):
            read_incomes_csv(io.StringIO("agent,wealth\n0,1.5\n"))
