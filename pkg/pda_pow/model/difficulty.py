import abc
import dataclasses
import typing

import numpy as np

from pda_pow.model.config import DifficultyFunctionType, SystemConfig
from pda_pow.utils import Assert, normalize_probabilities

# The last k winners, most recent first: `history[0]` won the previous block.
HistoryState = tuple[int, ...]

# Tolerance on the normalization of difficulty vectors and distributions.
NORMALIZATION_TOLERANCE = 1e-12


class PlayerIndexError(ValueError):
    pass


class SingularDifficultyError(ValueError):
    pass


def check_player(player: int, n: int) -> int:
    if not 0 <= player < n:
        raise PlayerIndexError(f"Player {player} out of range for {n} players.")
    return player


def check_history(history: typing.Sequence[int], config: SystemConfig) -> HistoryState:
    history = tuple(int(winner) for winner in history)
    if len(history) != config.k:
        raise ValueError(f"Expected a history of length {config.k}, got {history}")
    for winner in history:
        check_player(winner, config.n)
    return history


def win_counts(history: HistoryState, player: int, n: int) -> int:
    """
    Number of blocks won by `player` in the history window.
    """
    check_player(player, n)
    return sum(winner == player for winner in history)


def win_count_vector(history: HistoryState, n: int) -> np.ndarray:
    return np.bincount(np.asarray(history, dtype=np.int64), minlength=n)


@dataclasses.dataclass(frozen=True)
class DifficultyFunction(abc.ABC):
    """
    A non-ordered difficulty function, mapping the win counts of each player to a normalized difficulty vector.
    Works on arrays of counts, with players along the last axis.
    """

    def __call__(self, counts: np.ndarray) -> np.ndarray:
        return normalize_probabilities(self._get_weights(np.asarray(counts)))

    @abc.abstractmethod
    def _get_weights(self, counts: np.ndarray) -> np.ndarray:
        pass


@dataclasses.dataclass(frozen=True)
class UniformDifficulty(DifficultyFunction):
    def _get_weights(self, counts: np.ndarray) -> np.ndarray:
        return np.ones(counts.shape, dtype=np.float64)


@dataclasses.dataclass(frozen=True)
class ExponentialDifficulty(DifficultyFunction):
    """
    The alpha-exponential non-ordered difficulty function, D_i = alpha^w_i / sum_j alpha^w_j.
    """

    alpha: float

    def __post_init__(self):
        Assert.gt(self.alpha, 0)

    def _get_weights(self, counts: np.ndarray) -> np.ndarray:
        # Shifting the exponents doesn't change the normalized result, and keeps the weights in range.
        shifted = counts - counts.max(axis=-1, keepdims=True)
        return np.power(float(self.alpha), shifted.astype(np.float64))


def create_difficulty_function(config: SystemConfig) -> DifficultyFunction:
    if config.difficulty_type == DifficultyFunctionType.uniform or config.alpha == 1:
        return UniformDifficulty()
    return ExponentialDifficulty(alpha=config.alpha)


def difficulty_vector(history: HistoryState, config: SystemConfig) -> np.ndarray:
    history = check_history(history, config)
    difficulties = config.difficulty_function(win_count_vector(history, config.n))
    Assert.close(difficulties.sum(), 1.0, atol=NORMALIZATION_TOLERANCE)
    return difficulties


def win_probabilities(powers: np.ndarray, difficulties: np.ndarray) -> np.ndarray:
    """
    Winning probability of each player in an exponential race, proportional to computing power over difficulty.
    Accepts stacked difficulty vectors, with players along the last axis.
    """
    powers = np.asarray(powers, dtype=np.float64)
    difficulties = np.asarray(difficulties, dtype=np.float64)
    Assert.eq(powers.shape[-1], difficulties.shape[-1])
    if not np.all(powers > 0):
        raise ValueError(f"Computing powers must be positive, got {powers}")
    if not np.all(difficulties > 0):
        raise SingularDifficultyError(f"Difficulties must be positive, got {difficulties}")
    return normalize_probabilities(powers / difficulties)


@dataclasses.dataclass(frozen=True)
class RuntimeState:
    """
    The dynamic parameters of the system at a block: the winning history and the difficulties derived from it.
    """

    history: HistoryState
    difficulties: np.ndarray

    @classmethod
    def from_history(cls, history: typing.Sequence[int], config: SystemConfig) -> "RuntimeState":
        history = check_history(history, config)
        return cls(history=history, difficulties=difficulty_vector(history, config))

    def win_probabilities(self, config: SystemConfig) -> np.ndarray:
        return win_probabilities(config.computing_powers, self.difficulties)
