import logging

from pda_pow.chain.config import AUTO_FULL_CHAIN_STATES, ChainConfig, ChainMethod
from pda_pow.chain.stationary import consecutive_winning_probability
from pda_pow.model.config import SystemConfig
from pda_pow.model.difficulty import check_player
from pda_pow.reduction.config import ReductionConfig
from pda_pow.reduction.reduction import LumpabilityError, reduced_consecutive_probability

logger = logging.getLogger(__name__)


def resolve_method(config: SystemConfig, method: ChainMethod = ChainMethod.auto) -> ChainMethod:
    if method != ChainMethod.auto:
        return method
    if config.num_states <= AUTO_FULL_CHAIN_STATES or not config.equal_powers:
        return ChainMethod.full
    return ChainMethod.reduced


def consecutive_probability(
    config: SystemConfig,
    player: int = 0,
    method: ChainMethod = ChainMethod.auto,
    chain_config: ChainConfig | None = None,
    reduction_config: ReductionConfig | None = None,
) -> float:
    """
    Stationary probability that `player` won each of the last k blocks.
    The full chain is used for small state spaces, the reduced one otherwise.
    The reduced chain requires equal computing powers, and then gives the same value for every player.
    """
    check_player(player, config.n)
    method = resolve_method(config, ChainMethod(method))
    logger.debug(f"Consecutive winning probability for n={config.n}, k={config.k}: using the {method.value} chain.")
    if method == ChainMethod.full:
        return consecutive_winning_probability(config, player, chain_config)
    if not config.equal_powers:
        raise LumpabilityError("The reduced chain requires equal computing powers.")
    return reduced_consecutive_probability(config, chain_config, reduction_config)
