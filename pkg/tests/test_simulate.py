import json

import numpy as np
import pytest

from pda_pow.chain.stationary import consecutive_winning_probability
from pda_pow.model.config import SystemConfig
from pda_pow.simulate.config import SimulationConfig
from pda_pow.simulate.simulator import (
    GENERATOR_NAME,
    SimulationLengthError,
    SimulationReport,
    create_generator,
    empirical_consecutive_rate,
    goodness_of_fit,
    mine_block,
    mine_blocks,
    run_configured_simulation,
    run_simulation,
    run_simulations,
    standard_error,
    z_score,
)
from pda_pow.utils import Assert

# Significance level of the goodness of fit tests.
SIGNIFICANCE = 0.01


@pytest.mark.parametrize("race_mode", [False, True])
@pytest.mark.parametrize(
    ("config", "history", "draws", "expected"),
    [
        (SystemConfig(n=3), (0,), 300_000, (1 / 3, 1 / 3, 1 / 3)),
        (SystemConfig(n=3, powers=[1, 2, 3]), (2,), 600_000, (1 / 6, 1 / 3, 1 / 2)),
        (SystemConfig(n=3, k=3, alpha=2.0), (0, 2, 0), 700_000, (1 / 7, 4 / 7, 2 / 7)),
    ],
)
def test_mine_blocks(config, history, draws, expected, race_mode):
    winners = mine_blocks(history, config, create_generator(1234), draws, race_mode=race_mode)
    frequencies = np.bincount(winners, minlength=config.n) / draws
    Assert.all_close(frequencies, expected, atol=0.005)
    assert goodness_of_fit(winners, expected) > SIGNIFICANCE


def test_mine_block():
    config = SystemConfig(n=3, k=3, alpha=2.0)
    rng = create_generator(5)
    winners = [mine_block((0, 2, 0), config, rng) for _ in range(100)]
    assert all(isinstance(winner, int) and 0 <= winner < 3 for winner in winners)


def test_goodness_of_fit():
    assert goodness_of_fit(np.array([0] * 10 + [1] * 20 + [2] * 30), [1 / 6, 1 / 3, 1 / 2]) == pytest.approx(1.0)
    assert goodness_of_fit(np.array([0] * 60), [1 / 3, 1 / 3, 1 / 3]) < 1e-6


def test_standard_error():
    rng = create_generator(0)
    independent = rng.random(100_000) < 0.2
    Assert.close(standard_error(independent), np.sqrt(0.2 * 0.8 / 100_000), rtol=0.3)
    # Long runs of identical values make the batch means spread more than independent draws would.
    correlated = np.repeat(rng.random(1000) < 0.2, 100)
    assert standard_error(correlated) > 3 * np.sqrt(correlated.mean() * (1 - correlated.mean()) / correlated.size)
    assert standard_error(np.ones(1000, dtype=bool)) == 0.0
    assert standard_error(np.array([], dtype=bool)) == 0.0


def test_single_player():
    report = run_simulation(SystemConfig(n=1, k=3, alpha=2.0), 100, seed=1)
    assert report.win_counts == [100]
    assert report.run_counts == [100, 99, 98]
    assert empirical_consecutive_rate(report, 3) == 1.0
    assert z_score(report, 3, 1.0) == 0.0


def test_simulation_too_short():
    with pytest.raises(SimulationLengthError):
        run_simulation(SystemConfig(n=2, k=3), 2)


def test_simulation_invalid_player():
    with pytest.raises(ValueError):
        run_simulation(SystemConfig(n=2, k=1), 10, tracked_player=2)


@pytest.mark.parametrize("race_mode", [False, True])
def test_determinism(race_mode):
    config = SystemConfig(n=3, k=2, alpha=5.0)
    reports = [run_simulation(config, 20_000, seed=11, race_mode=race_mode) for _ in range(2)]
    assert reports[0].to_dict() == reports[1].to_dict()
    assert reports[0].to_dict() != run_simulation(config, 20_000, seed=12, race_mode=race_mode).to_dict()


def test_report():
    config = SystemConfig(n=4, k=3, alpha=2.0)
    report = run_simulation(config, 50_000, seed=3, tracked_player=2)
    assert sum(report.win_counts) == 50_000
    assert report.run_counts[0] == report.win_counts[2]
    assert report.run_counts[0] >= report.run_counts[1] >= report.run_counts[2]
    assert report.burn_in == 30
    assert report.generator == GENERATOR_NAME
    assert SimulationReport.from_dict(json.loads(report.to_json())) == report


def _report(win_counts: list[int], run_counts: list[int]) -> SimulationReport:
    return SimulationReport(
        n=2,
        k=2,
        blocks=10,
        seed=0,
        tracked_player=0,
        win_counts=win_counts,
        run_counts=run_counts,
        standard_errors=[0.0, 0.0],
        burn_in=0,
    )


def test_report_invariants():
    _report([5, 5], [5, 2])
    with pytest.raises(AssertionError):
        _report([5, 4], [5, 2])
    with pytest.raises(AssertionError):
        _report([5, 5], [2, 5])


def test_empirical_consecutive_rate():
    report = SimulationReport(
        n=5,
        k=2,
        blocks=1_000_001,
        seed=0,
        tracked_player=0,
        win_counts=[200_001, 200_000, 200_000, 200_000, 200_000],
        run_counts=[200_001, 40_000],
        standard_errors=[4e-4, 2e-4],
        burn_in=20,
    )
    assert empirical_consecutive_rate(report, 2) == 0.04
    Assert.close(z_score(report, 2, 0.0396), 2.0, atol=1e-9)
    with pytest.raises(ValueError):
        empirical_consecutive_rate(report, 3)
    with pytest.raises(ValueError):
        empirical_consecutive_rate(report, 0)


def test_run_configured_simulation():
    config = SystemConfig(n=2, k=2, alpha=2.0)
    simulation_config = SimulationConfig(blocks=10_000, seed=4, burn_in=0, race_mode=True)
    report = run_configured_simulation(config, simulation_config)
    assert report.burn_in == 0
    assert report.race_mode
    assert report.to_dict() == run_simulation(config, 10_000, 4, race_mode=True, burn_in=0).to_dict()


def test_run_simulations_parallel():
    config = SystemConfig(n=3, k=2, alpha=2.0)
    simulation_config = SimulationConfig(blocks=10_000)
    sequential = run_simulations(config, simulation_config, range(3))
    parallel = run_simulations(config, simulation_config, range(3), workers=2)
    assert [report.seed for report in parallel] == [0, 1, 2]
    assert [report.to_dict() for report in sequential] == [report.to_dict() for report in parallel]


@pytest.mark.parametrize("race_mode", [False, True])
def test_agreement_with_chain(race_mode):
    config = SystemConfig(n=2, k=2, alpha=2.0)
    report = run_simulation(config, 200_000, seed=7, race_mode=race_mode)
    assert abs(z_score(report, 2, 5 / 26)) < 4


@pytest.mark.slow
@pytest.mark.parametrize(
    ("config", "blocks", "seed", "expected"),
    [
        (SystemConfig(n=5, k=2, alpha=1.0), 10**6, 3, 0.04),
        (SystemConfig(n=2, k=2, alpha=2.0), 10**6, 7, 5 / 26),
        (SystemConfig(n=5, k=3, alpha=2.0), 10**7, 0, None),
        (SystemConfig(n=3, k=2, alpha=5.0), 10**6, 0, None),
    ],
)
def test_consecutive_rate(config, blocks, seed, expected):
    if expected is None:
        expected = consecutive_winning_probability(config)
    report = run_simulation(config, blocks, seed)
    assert abs(z_score(report, config.k, expected)) < 3


@pytest.mark.slow
def test_exponential_race():
    # Single block winners in race mode follow the ratio of computing power to difficulty.
    winners = mine_blocks((0,), SystemConfig(n=3, powers=[1, 2, 3]), create_generator(0), 10**6, race_mode=True)
    assert goodness_of_fit(winners, [1 / 6, 1 / 3, 1 / 2]) > SIGNIFICANCE
    run = run_simulation(SystemConfig(n=3, powers=[1, 2, 3]), 6 * 10**5, seed=0, race_mode=True)
    expected = np.array([1, 2, 3]) / 6
    observed = np.repeat(np.arange(3), run.win_counts)
    assert goodness_of_fit(observed, expected) > SIGNIFICANCE


@pytest.mark.slow
def test_simulation_grid():
    outcomes = []
    for n in (2, 3, 5):
        for k in (2, 3):
            for alpha in (1.0, 2.0, 5.0):
                config = SystemConfig(n=n, k=k, alpha=alpha)
                expected = consecutive_winning_probability(config)
                reports = run_simulations(config, SimulationConfig(blocks=10**6), range(10), workers=4)
                outcomes.extend(abs(z_score(report, k, expected)) < 3 for report in reports)
    assert sum(outcomes) >= 0.95 * len(outcomes)
