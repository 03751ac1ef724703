import numpy as np

from pda_pow.model.difficulty import HistoryState
from pda_pow.utils import Assert


def encode_state(history: HistoryState, n: int) -> int:
    """
    Dense index of a history in base n, with the most recent winner as the most significant digit.
    """
    index = 0
    for winner in history:
        Assert.in_range(winner, 0, n)
        index = index * n + winner
    return index


def decode_state(index: int, n: int, k: int) -> HistoryState:
    Assert.in_range(index, 0, n**k)
    history = []
    for _ in range(k):
        index, winner = divmod(index, n)
        history.append(winner)
    return tuple(reversed(history))


def shift_state(index: int, winner: int, n: int, k: int) -> int:
    """
    Index of the history after `winner` wins the next block: the winner is prepended and the oldest entry dropped.
    """
    return winner * n ** (k - 1) + index // n


def decode_all_states(n: int, k: int) -> np.ndarray:
    """
    The histories of all n^k states as an array of shape (n^k, k), in index order.
    """
    indices = np.arange(n**k, dtype=np.int64)
    place_values = n ** np.arange(k - 1, -1, -1, dtype=np.int64)
    return (indices[:, None] // place_values[None, :]) % n
