import bisect
import dataclasses
import json
import logging
import math
import multiprocessing
import typing

import numpy as np
import scipy.stats

from pda_pow.chain.states import decode_state, encode_state
from pda_pow.model.config import SystemConfig
from pda_pow.model.difficulty import HistoryState, check_history, check_player, difficulty_vector, win_probabilities
from pda_pow.simulate.config import SimulationConfig
from pda_pow.utils import Assert

logger = logging.getLogger(__name__)

GENERATOR_NAME = "PCG64"


class SimulationLengthError(ValueError):
    pass


def create_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclasses.dataclass()
class SimulationReport:
    """
    The outcome of one seeded simulation. Entry `m - 1` of `run_counts` and `standard_errors`
    is for runs of length m, counted over the `blocks - m + 1` overlapping windows of measured blocks.
    """

    n: int
    k: int
    blocks: int
    seed: int
    tracked_player: int
    win_counts: list[int]
    run_counts: list[int]
    standard_errors: list[float]
    burn_in: int
    race_mode: bool = False
    generator: str = GENERATOR_NAME

    def __post_init__(self):
        Assert.eq(len(self.win_counts), self.n)
        Assert.eq(sum(self.win_counts), self.blocks)
        Assert.eq(len(self.run_counts), len(self.standard_errors), self.k)
        for shorter, longer in zip(self.run_counts[:-1], self.run_counts[1:]):
            Assert.geq(shorter, longer)

    def windows(self, m: int) -> int:
        return self.blocks - m + 1

    def to_dict(self) -> dict[str, typing.Any]:
        return dataclasses.asdict(self)

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict[str, typing.Any]) -> "SimulationReport":
        return cls(**data)


class _WinnerSampler:
    """
    Draws successive winners for a system, caching the win probabilities of each visited state.
    Random numbers are generated in chunks, in a fixed order, so a run only depends on its seed.
    """

    def __init__(self, config: SystemConfig, rng: np.random.Generator, race_mode: bool, chunk_size: int):
        self._config = config
        self._rng = rng
        self._race_mode = race_mode
        self._chunk_size = chunk_size
        self._powers = config.computing_powers
        self._rows: dict[int, typing.Any] = {}
        self._draws = None
        self._position = chunk_size

    def _next_draw(self):
        if self._position >= self._chunk_size:
            if self._race_mode:
                self._draws = self._rng.standard_exponential((self._chunk_size, self._config.n))
            else:
                self._draws = self._rng.random(self._chunk_size).tolist()
            self._position = 0
        draw = self._draws[self._position]
        self._position += 1
        return draw

    def _get_row(self, state: int | None):
        if state not in self._rows:
            if state is None:
                # No history yet: the difficulty is the same for everyone.
                probabilities = win_probabilities(self._powers, np.ones(self._config.n))
            else:
                history = decode_state(state, self._config.n, self._config.k)
                probabilities = win_probabilities(self._powers, difficulty_vector(history, self._config))
            if self._race_mode:
                # The winning rate of a player is its computing power over its difficulty, up to a common scale.
                self._rows[state] = probabilities
            else:
                self._rows[state] = np.cumsum(probabilities).tolist()
        return self._rows[state]

    def sample(self, state: int | None) -> int:
        row = self._get_row(state)
        draw = self._next_draw()
        if self._race_mode:
            return int(np.argmin(draw / row))
        return min(bisect.bisect_right(row, draw), self._config.n - 1)


def mine_block(
    history: HistoryState, config: SystemConfig, rng: np.random.Generator, race_mode: bool = False
) -> int:
    """
    Pick the winner of the block following `history`.
    """
    return int(mine_blocks(history, config, rng, 1, race_mode)[0])


def mine_blocks(
    history: HistoryState, config: SystemConfig, rng: np.random.Generator, size: int, race_mode: bool = False
) -> np.ndarray:
    """
    Independent winners of `size` blocks all following the same `history`, i.e. repeated draws from one state.
    In race mode, each player solves the puzzle after an exponential time with rate C_i / D_i,
    and the first one wins.
    """
    history = check_history(history, config)
    difficulties = difficulty_vector(history, config)
    if race_mode:
        rates = config.computing_powers / difficulties
        waiting_times = rng.standard_exponential((size, config.n)) / rates
        return waiting_times.argmin(axis=-1)
    return rng.choice(config.n, size=size, p=win_probabilities(config.computing_powers, difficulties))


def standard_error(indicators: np.ndarray, batches: int = 50) -> float:
    """
    Standard error of the mean of correlated indicators, from the spread of the means of contiguous batches.
    Never smaller than the error for independent indicators.
    """
    indicators = np.asarray(indicators, dtype=np.float64)
    if indicators.size == 0:
        return 0.0
    rate = indicators.mean()
    independent = math.sqrt(rate * (1 - rate) / indicators.size)
    if indicators.size < 2 * batches:
        return independent
    batch_means = np.array([batch.mean() for batch in np.array_split(indicators, batches)])
    return max(float(batch_means.std(ddof=1) / math.sqrt(batches)), independent)


def _run_indicators(winners: np.ndarray, player: int, m: int) -> np.ndarray:
    # One entry per window of m consecutive blocks, true if the player won all of them.
    wins = np.concatenate([[0], np.cumsum(winners == player)])
    return wins[m:] - wins[:-m] == m


def run_simulation(
    config: SystemConfig,
    blocks: int,
    seed: int = 0,
    tracked_player: int = 0,
    *,
    race_mode: bool = False,
    burn_in: int | None = None,
    batches: int = 50,
    chunk_size: int = 2**16,
) -> SimulationReport:
    """
    Mine a chain of blocks and count the consecutive wins of `tracked_player`.
    The first k blocks are mined with equal difficulties since there is no history yet,
    then `burn_in` more blocks (default 10 * k) are mined. Both are excluded from the counts.
    """
    check_player(tracked_player, config.n)
    n, k = config.n, config.k
    if blocks < k:
        raise SimulationLengthError(f"Cannot measure runs of length {k} over {blocks} blocks.")
    if burn_in is None:
        burn_in = 10 * k
    Assert.geq(burn_in, 0)
    sampler = _WinnerSampler(config, create_generator(seed), race_mode, chunk_size)
    logger.info(
        f"Simulating {blocks} blocks for n={n}, k={k}, alpha={config.alpha}"
        f" ({'race' if race_mode else 'categorical'} sampling, seed {seed})."
    )

    history = []
    for _ in range(k):
        history.insert(0, sampler.sample(None))
    state = encode_state(tuple(history), n)
    place = n ** (k - 1)
    for _ in range(burn_in):
        state = sampler.sample(state) * place + state // n

    winners = np.empty(blocks, dtype=np.int64)
    for block in range(blocks):
        winner = sampler.sample(state)
        winners[block] = winner
        state = winner * place + state // n

    run_counts, standard_errors = [], []
    for m in range(1, k + 1):
        indicators = _run_indicators(winners, tracked_player, m)
        run_counts.append(int(indicators.sum()))
        standard_errors.append(standard_error(indicators, batches))
    return SimulationReport(
        n=n,
        k=k,
        blocks=blocks,
        seed=seed,
        tracked_player=tracked_player,
        win_counts=np.bincount(winners, minlength=n).tolist(),
        run_counts=run_counts,
        standard_errors=standard_errors,
        burn_in=burn_in,
        race_mode=race_mode,
    )


def run_configured_simulation(config: SystemConfig, simulation_config: SimulationConfig) -> SimulationReport:
    return run_simulation(
        config,
        simulation_config.blocks,
        simulation_config.seed,
        simulation_config.tracked_player,
        race_mode=simulation_config.race_mode,
        burn_in=simulation_config.get_burn_in(config.k),
        batches=simulation_config.batches,
        chunk_size=simulation_config.chunk_size,
    )


def _run_serialized(args: tuple[dict[str, typing.Any], dict[str, typing.Any]]) -> dict[str, typing.Any]:
    config, simulation_config = args
    return run_configured_simulation(
        SystemConfig.from_dict(config), SimulationConfig.from_dict(simulation_config)
    ).to_dict()


def run_simulations(
    config: SystemConfig, simulation_config: SimulationConfig, seeds: typing.Iterable[int], workers: int = 1
) -> list[SimulationReport]:
    """
    Independent runs with different seeds, in parallel processes if `workers > 1`.
    """
    Assert.gt(workers, 0)
    tasks = [
        (config.to_serialized(verbose=None), simulation_config.to_copy({"seed": seed}).to_serialized(verbose=None))
        for seed in seeds
    ]
    if workers == 1 or len(tasks) <= 1:
        results = [_run_serialized(task) for task in tasks]
    else:
        with multiprocessing.Pool(min(workers, len(tasks))) as pool:
            results = pool.map(_run_serialized, tasks)
    return [SimulationReport.from_dict(result) for result in results]


def empirical_consecutive_rate(report: SimulationReport, m: int) -> float:
    """
    Fraction of the windows of m measured blocks won entirely by the tracked player.
    """
    if not 1 <= m <= report.k:
        raise ValueError(f"Run length {m} out of range [1, {report.k}].")
    if report.blocks < m:
        raise SimulationLengthError(f"Cannot measure runs of length {m} over {report.blocks} blocks.")
    return report.run_counts[m - 1] / report.windows(m)


def z_score(report: SimulationReport, m: int, expected: float) -> float:
    """
    Distance between the empirical and expected rates, in standard errors.
    """
    difference = empirical_consecutive_rate(report, m) - expected
    error = report.standard_errors[m - 1]
    if error == 0:
        # Only happens for degenerate rates (0 or 1), where any difference is significant.
        return 0.0 if abs(difference) <= 1e-12 else math.copysign(math.inf, difference)
    return difference / error


def goodness_of_fit(winners: np.ndarray, probabilities: np.ndarray) -> float:
    """
    P-value of Pearson's chi-squared test of the observed winners against the expected winning probabilities.
    """
    probabilities = np.asarray(probabilities, dtype=np.float64)
    observed = np.bincount(np.asarray(winners, dtype=np.int64), minlength=probabilities.size)
    Assert.eq(observed.size, probabilities.size)
    return float(scipy.stats.chisquare(observed, probabilities * observed.sum()).pvalue)
