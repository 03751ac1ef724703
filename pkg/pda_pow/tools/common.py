import argparse
import logging
import pathlib
import typing

from pda_pow.config import Field, FieldHint, config_class
from pda_pow.config_utils.runnable import RunnableConfig
from pda_pow.model.config import SYSTEM_CONFIG_KEYS, SystemConfig

logger = logging.getLogger(__name__)


def parse_alpha(value: str) -> float | None:
    return None if value.lower() in ("none", "null", "uniform") else float(value)


def parse_powers(value: str) -> list[float]:
    return [float(power) for power in value.split(",") if power.strip()]


@config_class()
class OutputRunnableConfig(RunnableConfig):
    """
    A command printing its results to stdout, or to a file given with `--out`.
    """

    output: pathlib.Path | None = Field(
        default=None, desc="Write the results to this file instead of stdout.", hint=FieldHint.optional
    )

    @classmethod
    def _get_parser(cls):
        parser = super()._get_parser()
        parser.add_argument("--out", type=pathlib.Path, default=argparse.SUPPRESS, help="Output file.")
        return parser

    @classmethod
    def _get_flag_updates(cls, parsed: argparse.Namespace) -> dict[tuple[str, ...], typing.Any]:
        updates = super()._get_flag_updates(parsed)
        if hasattr(parsed, "out"):
            updates[("output",)] = parsed.out
        return updates

    def write_output(self, text: str):
        if not text.endswith("\n"):
            text += "\n"
        if self.output is None:
            print(text, end="", flush=True)
        else:
            self.output.parent.mkdir(parents=True, exist_ok=True)
            self.output.write_text(text)
            logger.info(f"Saved the results to {self.output}")


@config_class()
class SystemRunnableConfig(OutputRunnableConfig):
    """
    A command about one PDA system, given with the `--n`, `--k`, `--alpha` and `--powers` flags
    and/or a config file. A file holding only system keys (`n`, `k`, `alpha`, `powers`) describes the system alone.
    """

    system: SystemConfig = Field(default_factory=SystemConfig, desc="The PDA system.", hint=FieldHint.core)

    @classmethod
    def _get_parser(cls):
        parser = super()._get_parser()
        group = parser.add_argument_group("system")
        group.add_argument("--n", type=int, default=argparse.SUPPRESS, help="Number of players.")
        group.add_argument("--k", type=int, default=argparse.SUPPRESS, help="Winning history window.")
        group.add_argument(
            "--alpha",
            type=parse_alpha,
            default=argparse.SUPPRESS,
            help="Base of the exponential difficulty function, or `none` for a uniform difficulty.",
        )
        group.add_argument(
            "--powers",
            type=parse_powers,
            default=argparse.SUPPRESS,
            help="Comma-separated computing powers, one per player.",
        )
        return parser

    @classmethod
    def _load_default_config_dict(cls, parsed: argparse.Namespace) -> dict[str, typing.Any]:
        config_dict = super()._load_default_config_dict(parsed)
        if config_dict and set(config_dict) <= SYSTEM_CONFIG_KEYS:
            config_dict = {"system": config_dict}
        return config_dict

    @classmethod
    def _get_flag_updates(cls, parsed: argparse.Namespace) -> dict[tuple[str, ...], typing.Any]:
        updates = super()._get_flag_updates(parsed)
        for name in SYSTEM_CONFIG_KEYS:
            if hasattr(parsed, name):
                updates[("system", name)] = getattr(parsed, name)
        return updates
