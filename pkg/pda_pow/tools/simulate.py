import argparse
import logging
import typing

from pda_pow.chain.config import ChainConfig
from pda_pow.config import Field, FieldHint, ValidationError, check_field, config_class
from pda_pow.simulate.config import SimulationConfig
from pda_pow.tools.common import SystemRunnableConfig
from pda_pow.utils import Assert

logger = logging.getLogger(__name__)


@config_class()
class SimulateConfig(SystemRunnableConfig):
    """
    Mine blocks at random and compare the rate of k consecutive wins with the exact probability.
    Prints one json report per line, then one comparison line per report.
    """

    simulation: SimulationConfig = Field(
        default_factory=SimulationConfig, desc="Simulation settings.", hint=FieldHint.core
    )
    runs: int = Field(
        default=1,
        desc="Number of independent runs, with consecutive seeds starting from `simulation.seed`.",
        hint=FieldHint.optional,
        valid=check_field(Assert.gt, 0),
    )
    workers: int = Field(
        default=1,
        desc="Number of processes running the simulations.",
        hint=FieldHint.performance,
        valid=check_field(Assert.gt, 0),
    )
    compare: bool = Field(
        default=True, desc="Compare the empirical rate with the exact probability.", hint=FieldHint.feature
    )
    chain: ChainConfig = Field(default_factory=ChainConfig, desc="Stationary solver settings.", hint=FieldHint.expert)

    def _validate(self):
        super()._validate()
        if self.simulation.tracked_player >= self.system.n:
            raise ValidationError(
                f"Player {self.simulation.tracked_player} out of range for {self.system.n} players."
            )
        if self.simulation.blocks < self.system.k:
            raise ValidationError(f"Need at least k={self.system.k} blocks, got {self.simulation.blocks}.")

    @classmethod
    def _get_parser(cls):
        parser = super()._get_parser()
        parser.add_argument("--blocks", type=int, default=argparse.SUPPRESS, help="Number of measured blocks.")
        parser.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="Random seed.")
        parser.add_argument("--player", type=int, default=argparse.SUPPRESS, help="Tracked player.")
        parser.add_argument("--burn-in", dest="burn_in", type=int, default=argparse.SUPPRESS, help="Burn-in blocks.")
        parser.add_argument(
            "--race-mode",
            dest="race_mode",
            action="store_true",
            default=argparse.SUPPRESS,
            help="Sample exponential waiting times instead of the winner directly.",
        )
        parser.add_argument("--runs", type=int, default=argparse.SUPPRESS, help="Number of seeds.")
        parser.add_argument("--workers", type=int, default=argparse.SUPPRESS, help="Number of processes.")
        return parser

    @classmethod
    def _get_flag_updates(cls, parsed: argparse.Namespace) -> dict[tuple[str, ...], typing.Any]:
        updates = super()._get_flag_updates(parsed)
        for name, key in (
            ("blocks", ("simulation", "blocks")),
            ("seed", ("simulation", "seed")),
            ("player", ("simulation", "tracked_player")),
            ("burn_in", ("simulation", "burn_in")),
            ("race_mode", ("simulation", "race_mode")),
            ("runs", ("runs",)),
            ("workers", ("workers",)),
        ):
            if hasattr(parsed, name):
                updates[key] = getattr(parsed, name)
        return updates

    def run(self):
        from pda_pow.chain.chain import StateBudgetError
        from pda_pow.consecutive import consecutive_probability
        from pda_pow.simulate.simulator import empirical_consecutive_rate, run_simulations, z_score
        from pda_pow.utils import format_significant

        seeds = range(self.simulation.seed, self.simulation.seed + self.runs)
        reports = run_simulations(self.system, self.simulation, seeds, self.workers)
        lines = [report.to_json(indent=None) for report in reports]
        if self.compare:
            try:
                expected = consecutive_probability(
                    self.system, self.simulation.tracked_player, chain_config=self.chain
                )
            except StateBudgetError as e:
                logger.warning(f"No exact probability to compare with: {e}")
            else:
                m = self.system.k
                for report in reports:
                    rate = empirical_consecutive_rate(report, m)
                    lines.append(
                        f"seed={report.seed} m={m} empirical={format_significant(rate, 4)}"
                        f" analytic={format_significant(expected, 4)}"
                        f" standard_error={format_significant(report.standard_errors[m - 1], 2)}"
                        f" z={z_score(report, m, expected):.3f}"
                    )
        self.write_output("\n".join(lines))


if __name__ == "__main__":
    SimulateConfig.parse_and_run()
