import argparse
import typing

from pda_pow.baseline.config import AttackerParams
from pda_pow.config import Field, FieldHint, check_field, config_class
from pda_pow.tools.common import OutputRunnableConfig
from pda_pow.utils import Assert


@config_class()
class NakamotoConfig(OutputRunnableConfig):
    """
    Print the probability that a double-spending attacker catches up in traditional proof-of-work.
    """

    attacker: AttackerParams = Field(default_factory=AttackerParams, desc="The attack.", hint=FieldHint.core)
    precision: int = Field(
        default=4,
        desc="Significant digits of the printed probability.",
        hint=FieldHint.optional,
        valid=check_field(Assert.gt, 0),
    )

    @classmethod
    def _get_parser(cls):
        parser = super()._get_parser()
        parser.add_argument("--q", type=float, default=argparse.SUPPRESS, help="Attacker computing power fraction.")
        parser.add_argument("--z", type=int, default=argparse.SUPPRESS, help="Confirmation depth.")
        parser.add_argument("--precision", type=int, default=argparse.SUPPRESS, help="Significant digits.")
        return parser

    @classmethod
    def _get_flag_updates(cls, parsed: argparse.Namespace) -> dict[tuple[str, ...], typing.Any]:
        updates = super()._get_flag_updates(parsed)
        for name in ("q", "z"):
            if hasattr(parsed, name):
                updates[("attacker", name)] = getattr(parsed, name)
        if hasattr(parsed, "precision"):
            updates[("precision",)] = parsed.precision
        return updates

    def run(self):
        from pda_pow.baseline.nakamoto import attacker_success
        from pda_pow.utils import format_significant

        self.write_output(format_significant(attacker_success(self.attacker), self.precision))


if __name__ == "__main__":
    NakamotoConfig.parse_and_run()
