import collections
import dataclasses
import functools
import itertools
import logging
import typing

import numpy as np

from pda_pow.chain.chain import SparseChain
from pda_pow.chain.config import ChainConfig
from pda_pow.chain.stationary import solve_stationary
from pda_pow.chain.states import decode_all_states
from pda_pow.model.config import SystemConfig
from pda_pow.model.difficulty import HistoryState, win_probabilities
from pda_pow.reduction.config import ReductionConfig
from pda_pow.utils import Assert, falling_factorial

logger = logging.getLogger(__name__)

# A canonical history: labels ordered by decreasing win count, ties broken by first appearance.
ReducedState = HistoryState


class LumpabilityError(ValueError):
    pass


class ImpossibleStateError(ValueError):
    pass


def canonicalize(state: typing.Sequence[int]) -> ReducedState:
    """
    The canonical representative of a history under player relabeling.
    The most frequent player becomes 0, the next one 1, etc., with ties going to the player appearing first,
    so the equality pattern of the history is preserved.
    """
    counts = collections.Counter(state)
    first_position = {}
    for position, player in enumerate(state):
        first_position.setdefault(player, position)
    order = sorted(counts, key=lambda player: (-counts[player], first_position[player]))
    labels = {player: label for label, player in enumerate(order)}
    return tuple(labels[player] for player in state)


def is_canonical(state: typing.Sequence[int]) -> bool:
    return tuple(state) == canonicalize(state)


def _restricted_growth_strings(k: int, max_blocks: int) -> typing.Iterator[tuple[int, ...]]:
    # Each set partition of the k positions into at most `max_blocks` blocks, labelled by first appearance.
    def extend(prefix: list[int], num_blocks: int):
        if len(prefix) == k:
            yield tuple(prefix)
            return
        for label in range(min(num_blocks + 1, max_blocks)):
            prefix.append(label)
            yield from extend(prefix, max(num_blocks, label + 1))
            prefix.pop()

    yield from extend([], 0)


@functools.lru_cache(maxsize=64)
def enumerate_reduced(n: int, k: int) -> tuple[ReducedState, ...]:
    """
    All the reduced states for n players and a window of k, in sorted order.
    There is one per set partition of the k positions into at most n blocks.
    """
    Assert.gt(n, 0)
    Assert.gt(k, 0)
    states = {canonicalize(partition) for partition in _restricted_growth_strings(k, n)}
    return tuple(sorted(states))


@functools.lru_cache(maxsize=64)
def count_preimages(n: int, k: int) -> dict[ReducedState, int]:
    """
    Brute-force count of the standard states mapping to each reduced state.
    """
    return dict(collections.Counter(canonicalize(state) for state in itertools.product(range(n), repeat=k)))


def orbit_size(reduced_state: ReducedState, n: int) -> int:
    """
    Number of standard states mapping to `reduced_state`: each injective assignment of players to its labels.
    """
    num_labels = len(set(reduced_state))
    if num_labels > n:
        raise ImpossibleStateError(f"State {reduced_state} has {num_labels} distinct players, more than {n}.")
    return falling_factorial(n, num_labels)


def iterate_preimages(reduced_state: ReducedState, n: int) -> typing.Iterator[HistoryState]:
    num_labels = len(set(reduced_state))
    for assignment in itertools.permutations(range(n), num_labels):
        yield tuple(assignment[label] for label in reduced_state)


@dataclasses.dataclass()
class ReducedChain(SparseChain):
    """
    The chain lumped over player relabelings. Row `i` holds the transitions out of `states[i]`,
    which is itself one of the standard states in its class.
    """

    states: tuple[ReducedState, ...] = ()
    # Python ints, since n!/(n-d)! overflows int64 for large n.
    orbit_sizes: tuple[int, ...] = ()

    def __post_init__(self):
        super().__post_init__()
        Assert.eq(len(self.states), self.num_states)
        Assert.eq(len(self.orbit_sizes), self.num_states)
        Assert.eq(sum(self.orbit_sizes), self.n**self.k)

    @functools.cached_property
    def state_indices(self) -> dict[ReducedState, int]:
        return {state: index for index, state in enumerate(self.states)}

    def state(self, index: int) -> ReducedState:
        return self.states[index]

    def index(self, state: typing.Sequence[int]) -> int:
        return self.state_indices[canonicalize(state)]


def _check_lumpable(config: SystemConfig):
    if not config.equal_powers:
        raise LumpabilityError(
            "The reduced chain requires every player to have the same computing power. Use the full chain instead."
        )


def aggregated_row(state: HistoryState, config: SystemConfig) -> dict[ReducedState, float]:
    """
    Probability of moving from the standard state `state` into each reduced class.
    """
    counts = np.bincount(np.asarray(state, dtype=np.int64), minlength=config.n)
    probabilities = win_probabilities(config.computing_powers, config.difficulty_function(counts))
    row = collections.defaultdict(float)
    for winner, probability in enumerate(probabilities.tolist()):
        row[canonicalize((winner,) + tuple(state[:-1]))] += probability
    return dict(row)


def check_lumpability(reduced_state: ReducedState, config: SystemConfig, max_preimages: int | None = None) -> float:
    """
    Largest deviation, over the preimages of `reduced_state`, of the probability of moving into each reduced class.
    Zero (up to rounding) means the preimage average in the reduced transition function is exact.
    """
    reference = aggregated_row(reduced_state, config)
    deviation = 0.0
    for preimage in itertools.islice(iterate_preimages(reduced_state, config.n), max_preimages):
        row = aggregated_row(preimage, config)
        Assert.eq(row.keys(), reference.keys())
        deviation = max(deviation, max(abs(row[key] - reference[key]) for key in reference))
    return deviation


def build_reduced_chain(config: SystemConfig, reduction_config: ReductionConfig | None = None) -> ReducedChain:
    _check_lumpable(config)
    if reduction_config is None:
        reduction_config = ReductionConfig()
    n, k = config.n, config.k
    states = enumerate_reduced(n, k)
    indices = {state: index for index, state in enumerate(states)}
    state_array = np.array(states, dtype=np.int64).reshape(len(states), k)
    counts = np.zeros((len(states), n), dtype=np.int64)
    for position in range(k):
        counts[np.arange(len(states)), state_array[:, position]] += 1
    probabilities = win_probabilities(config.computing_powers, config.difficulty_function(counts))
    successors = np.array(
        [[indices[canonicalize((winner,) + state[:-1])] for winner in range(n)] for state in states],
        dtype=np.int64,
    ).reshape(len(states), n)

    orbit_sizes = tuple(orbit_size(state, n) for state in states)
    if k <= reduction_config.orbit_check_max_k and config.num_states <= reduction_config.orbit_check_states:
        preimage_counts = count_preimages(n, k)
        Assert.eq(len(preimage_counts), len(states))
        for state, size in zip(states, orbit_sizes):
            Assert.eq(preimage_counts[state], size)

    if reduction_config.lumpability_samples > 0:
        rng = np.random.default_rng(reduction_config.seed)
        sample = rng.choice(len(states), size=min(reduction_config.lumpability_samples, len(states)), replace=False)
        for index in sample.tolist():
            deviation = check_lumpability(states[index], config, max_preimages=64)
            if deviation > reduction_config.lumpability_tolerance:
                raise LumpabilityError(f"Rows of the preimages of {states[index]} differ by {deviation:.3e}.")

    logger.debug(f"Built the reduced chain for n={n}, k={k}: {len(states)} states instead of {config.num_states}.")
    return ReducedChain(
        n=n, k=k, successors=successors, probabilities=probabilities, states=states, orbit_sizes=orbit_sizes
    )


def reduced_stationary_distribution(chain: ReducedChain, chain_config: ChainConfig | None = None) -> np.ndarray:
    return solve_stationary(chain, ChainConfig() if chain_config is None else chain_config)


def reduced_consecutive_probability(
    config: SystemConfig,
    chain_config: ChainConfig | None = None,
    reduction_config: ReductionConfig | None = None,
) -> float:
    """
    Stationary probability that a given player won each of the last k blocks, from the reduced chain.
    The all-same class holds the runs of every player, which are equally likely.
    """
    chain = build_reduced_chain(config, reduction_config)
    distribution = reduced_stationary_distribution(chain, chain_config)
    return float(distribution[chain.index((0,) * config.k)]) / config.n


def aggregate_distribution(distribution: np.ndarray, n: int, k: int) -> np.ndarray:
    """
    Sum a distribution over the standard states into the reduced states, in `enumerate_reduced` order.
    """
    states = enumerate_reduced(n, k)
    indices = {state: index for index, state in enumerate(states)}
    Assert.eq(len(distribution), n**k)
    classes = np.array([indices[canonicalize(state)] for state in map(tuple, decode_all_states(n, k).tolist())])
    return np.bincount(classes, weights=distribution, minlength=len(states))


def reduction_info(n: int, k: int) -> dict[str, typing.Any]:
    num_reduced = len(enumerate_reduced(n, k))
    return {
        "n": n,
        "k": k,
        "standard_states": n**k,
        "reduced_states": num_reduced,
        "reduction_factor": n**k / num_reduced,
    }
