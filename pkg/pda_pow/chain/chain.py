import csv
import dataclasses
import io
import logging
import pathlib
import typing

import numpy as np

from pda_pow.chain.config import ChainConfig
from pda_pow.chain.states import decode_all_states, decode_state
from pda_pow.model.config import SystemConfig
from pda_pow.model.difficulty import HistoryState, RuntimeState, win_probabilities
from pda_pow.utils import Assert

logger = logging.getLogger(__name__)


class StateBudgetError(ValueError):
    pass


@dataclasses.dataclass()
class SparseChain:
    """
    A row-stochastic transition structure where every state has exactly `n` (successor, probability) entries,
    one per candidate winner of the next block. Successors may repeat within a row (ex. in the reduced chain),
    their probabilities then add up.
    """

    n: int
    k: int
    # Shape (num_states, n).
    successors: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        Assert.eq(self.successors.shape, self.probabilities.shape, (self.num_states, self.n))

    @property
    def num_states(self) -> int:
        return self.successors.shape[0]

    def state(self, index: int) -> HistoryState:
        return decode_state(index, self.n, self.k)

    def row(self, index: int) -> list[tuple[int, float]]:
        """
        The transitions out of a state, with repeated successors merged.
        """
        row = {}
        for successor, probability in zip(self.successors[index].tolist(), self.probabilities[index].tolist()):
            row[successor] = row.get(successor, 0.0) + probability
        return list(row.items())

    def step(self, distribution: np.ndarray) -> np.ndarray:
        """
        One step of the chain for a row distribution, i.e. the product pP.
        """
        return np.bincount(
            self.successors.ravel(),
            weights=(distribution[:, None] * self.probabilities).ravel(),
            minlength=self.num_states,
        )

    def to_dense(self) -> np.ndarray:
        matrix = np.zeros((self.num_states, self.num_states))
        np.add.at(matrix, (np.arange(self.num_states)[:, None], self.successors), self.probabilities)
        return matrix

    def export_csv(self, output: pathlib.Path | typing.TextIO | None = None) -> str | None:
        """
        Write the nonzero transitions as csv with columns state, successor, probability.
        States are rendered as comma-joined winner tuples. Returns the text if no output is given.
        """
        stream = io.StringIO() if output is None else output
        if isinstance(stream, pathlib.Path):
            with stream.open("w", newline="") as file:
                self._write_csv(file)
            return None
        self._write_csv(stream)
        return stream.getvalue() if output is None else None

    def _write_csv(self, stream: typing.TextIO):
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(("state", "successor", "probability"))
        for index in range(self.num_states):
            state = ",".join(map(str, self.state(index)))
            for successor, probability in self.row(index):
                writer.writerow((state, ",".join(map(str, self.state(successor))), repr(probability)))


def transition_row(state: typing.Sequence[int], config: SystemConfig) -> list[tuple[int, float]]:
    """
    The (winner, probability) pairs for the block following the history `state`.
    """
    runtime_state = RuntimeState.from_history(state, config)
    return list(enumerate(runtime_state.win_probabilities(config).tolist()))


def build_chain(config: SystemConfig, chain_config: ChainConfig | None = None) -> SparseChain:
    """
    The full k-th order chain over the n^k winning histories.
    """
    if chain_config is None:
        chain_config = ChainConfig()
    n, k = config.n, config.k
    num_states = config.num_states
    if num_states > chain_config.state_budget:
        raise StateBudgetError(
            f"The full chain for n={n}, k={k} has {num_states} states,"
            f" over the budget of {chain_config.state_budget}."
            f" Use the reduced chain, or increase `state_budget`."
        )
    histories = decode_all_states(n, k)
    counts = np.zeros((num_states, n), dtype=np.int64)
    for position in range(k):
        counts[np.arange(num_states), histories[:, position]] += 1
    probabilities = win_probabilities(config.computing_powers, config.difficulty_function(counts))
    # The winner becomes the most significant digit and the oldest winner is dropped.
    successors = np.arange(n, dtype=np.int64)[None, :] * n ** (k - 1) + (
        np.arange(num_states, dtype=np.int64) // n
    )[:, None]
    logger.info(f"Built the full chain for n={n}, k={k}: {num_states} states, {num_states * n} transitions.")
    return SparseChain(n=n, k=k, successors=successors, probabilities=probabilities)
