import logging

import numpy as np

from pda_pow.chain.chain import SparseChain, build_chain
from pda_pow.chain.config import ChainConfig, StationarySolver
from pda_pow.chain.states import encode_state
from pda_pow.model.config import SystemConfig
from pda_pow.model.difficulty import check_player
from pda_pow.utils import Assert

logger = logging.getLogger(__name__)


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, iterations: int, residual: float):
        # All the arguments go to `args` so the error survives pickling between processes.
        super().__init__(message, iterations, residual)
        self.iterations = iterations
        self.residual = residual

    def __str__(self):
        return self.args[0]


def stationary_distribution(
    chain: SparseChain, tolerance: float = 1e-12, max_iterations: int = 10**6
) -> np.ndarray:
    """
    Power iteration from the uniform distribution, stopping once |pP - p|_inf <= tolerance.
    Finite difficulty parameters make the chain irreducible and aperiodic, so the limit is unique.
    """
    Assert.gt(tolerance, 0)
    distribution = np.full(chain.num_states, 1.0 / chain.num_states)
    residual = float("inf")
    for iteration in range(1, max_iterations + 1):
        next_distribution = chain.step(distribution)
        residual = np.abs(next_distribution - distribution).max()
        if residual <= tolerance:
            logger.debug(f"Power iteration converged after {iteration} iterations (residual {residual:.3e}).")
            return distribution / distribution.sum()
        # Keep the mass at exactly one despite rounding.
        distribution = next_distribution / next_distribution.sum()
    raise ConvergenceError(
        f"Power iteration did not converge after {max_iterations} iterations (residual {residual:.3e}).",
        iterations=max_iterations,
        residual=residual,
    )


def stationary_distribution_direct(chain: SparseChain, state_limit: int = 4096) -> np.ndarray:
    """
    Solve pi P = pi, sum(pi) = 1 as a dense least-squares problem. Only meant for small chains.
    """
    Assert.leq(chain.num_states, state_limit)
    matrix = chain.to_dense()
    system = np.vstack([matrix.T - np.eye(chain.num_states), np.ones((1, chain.num_states))])
    target = np.zeros(chain.num_states + 1)
    target[-1] = 1.0
    solution, *_ = np.linalg.lstsq(system, target, rcond=None)
    solution = np.clip(solution, 0.0, None)
    return solution / solution.sum()


def solve_stationary(chain: SparseChain, chain_config: ChainConfig) -> np.ndarray:
    if chain_config.solver == StationarySolver.direct:
        return stationary_distribution_direct(chain, chain_config.direct_state_limit)
    return stationary_distribution(chain, chain_config.tolerance, chain_config.max_iterations)


def consecutive_winning_probability(
    config: SystemConfig, player: int = 0, chain_config: ChainConfig | None = None
) -> float:
    """
    Stationary probability that `player` won each of the last k blocks, from the full chain.
    """
    check_player(player, config.n)
    if chain_config is None:
        chain_config = ChainConfig()
    distribution = solve_stationary(build_chain(config, chain_config), chain_config)
    return float(distribution[encode_state((player,) * config.k, config.n)])
