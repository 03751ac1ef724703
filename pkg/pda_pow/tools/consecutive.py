import argparse
import logging
import typing

from pda_pow.chain.config import ChainConfig, ChainMethod, StationarySolver
from pda_pow.config import Field, FieldHint, ValidationError, check_field, config_class
from pda_pow.reduction.config import ReductionConfig
from pda_pow.tools.common import SystemRunnableConfig
from pda_pow.utils import Assert

logger = logging.getLogger(__name__)


@config_class()
class ConsecutiveConfig(SystemRunnableConfig):
    """
    Print the stationary probability that a player wins k consecutive blocks.
    """

    player: int = Field(default=0, desc="The player winning the blocks.", hint=FieldHint.optional)
    method: ChainMethod = Field(
        default=ChainMethod.auto,
        desc="Solve the full chain, the reduced chain, or pick automatically from the state space size.",
        hint=FieldHint.optional,
    )
    precision: int = Field(
        default=3,
        desc="Significant digits of the printed probability.",
        hint=FieldHint.optional,
        valid=check_field(Assert.gt, 0),
    )
    chain: ChainConfig = Field(default_factory=ChainConfig, desc="Stationary solver settings.", hint=FieldHint.expert)
    reduction: ReductionConfig = Field(
        default_factory=ReductionConfig, desc="Reduced chain settings.", hint=FieldHint.expert
    )

    def _validate(self):
        super()._validate()
        if not 0 <= self.player < self.system.n:
            raise ValidationError(f"Player {self.player} out of range for {self.system.n} players.")
        if self.method == ChainMethod.reduced and not self.system.equal_powers:
            raise ValidationError("The reduced chain requires equal computing powers, use `--full` instead.")

    @classmethod
    def _get_parser(cls):
        parser = super()._get_parser()
        parser.add_argument("--player", type=int, default=argparse.SUPPRESS, help="The player winning the blocks.")
        method = parser.add_mutually_exclusive_group()
        method.add_argument(
            "--full", dest="method", action="store_const", const=ChainMethod.full.value, default=argparse.SUPPRESS
        )
        method.add_argument(
            "--reduced",
            dest="method",
            action="store_const",
            const=ChainMethod.reduced.value,
            default=argparse.SUPPRESS,
        )
        parser.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="Power iteration tolerance.")
        parser.add_argument(
            "--solver",
            choices=[solver.value for solver in StationarySolver],
            default=argparse.SUPPRESS,
            help="Stationary distribution solver.",
        )
        parser.add_argument("--precision", type=int, default=argparse.SUPPRESS, help="Significant digits.")
        return parser

    @classmethod
    def _get_flag_updates(cls, parsed: argparse.Namespace) -> dict[tuple[str, ...], typing.Any]:
        updates = super()._get_flag_updates(parsed)
        for name, key in (
            ("player", ("player",)),
            ("method", ("method",)),
            ("precision", ("precision",)),
            ("tol", ("chain", "tolerance")),
            ("solver", ("chain", "solver")),
        ):
            if hasattr(parsed, name):
                updates[key] = getattr(parsed, name)
        return updates

    def run(self):
        from pda_pow.consecutive import consecutive_probability
        from pda_pow.utils import format_significant

        probability = consecutive_probability(self.system, self.player, self.method, self.chain, self.reduction)
        logger.info(f"Consecutive winning probability: {probability!r}")
        self.write_output(format_significant(probability, self.precision))


if __name__ == "__main__":
    ConsecutiveConfig.parse_and_run()
