import enum

from pda_pow.config import Config, Field, FieldHint, check_field, config_class
from pda_pow.utils import Assert

# Largest standard state space solved with the full chain when the method is chosen automatically.
AUTO_FULL_CHAIN_STATES = 10**5


class ChainMethod(str, enum.Enum):
    auto = "auto"
    full = "full"
    reduced = "reduced"


class StationarySolver(str, enum.Enum):
    # Power iteration on the sparse rows.
    power = "power"
    # Dense least-squares solve, only for small chains.
    direct = "direct"


@config_class()
class ChainConfig(Config):
    tolerance: float = Field(
        default=1e-12,
        desc="Stop the power iteration once the L-infinity residual |pP - p| is below this value.",
        hint=FieldHint.stability,
        valid=check_field(Assert.gt, 0),
    )
    max_iterations: int = Field(
        default=10**6,
        desc="Fail if the power iteration hasn't converged after this many iterations.",
        hint=FieldHint.stability,
        valid=check_field(Assert.gt, 0),
    )
    state_budget: int = Field(
        default=2**24,
        desc="Refuse to build a full chain with more states than this. Use the reduced chain instead.",
        hint=FieldHint.performance,
        valid=check_field(Assert.gt, 0),
    )
    solver: StationarySolver = Field(
        default=StationarySolver.power,
        desc="Method used to find the stationary distribution.",
        hint=FieldHint.expert,
    )
    direct_state_limit: int = Field(
        default=4096,
        desc="Largest chain accepted by the dense direct solver.",
        hint=FieldHint.expert,
        valid=check_field(Assert.gt, 0),
    )
