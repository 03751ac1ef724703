import argparse
import typing

from pda_pow.config import Field, FieldHint, config_class
from pda_pow.tables.config import TableFormat, TableId, TableSpec
from pda_pow.tools.common import OutputRunnableConfig


@config_class()
class TableConfig(OutputRunnableConfig):
    """
    Compute one of the published tables and print it as csv, json or markdown.
    """

    table: TableSpec = Field(default_factory=TableSpec, desc="The table to compute.", hint=FieldHint.core)

    @classmethod
    def _get_parser(cls):
        parser = super()._get_parser()
        parser.add_argument(
            "--table", choices=[table.value for table in TableId], default=argparse.SUPPRESS, help="Table id."
        )
        parser.add_argument(
            "--format",
            choices=[format_.value for format_ in TableFormat],
            default=argparse.SUPPRESS,
            help="Output format.",
        )
        parser.add_argument("--precision", type=int, default=argparse.SUPPRESS, help="Significant digits.")
        parser.add_argument("--workers", type=int, default=argparse.SUPPRESS, help="Number of processes.")
        parser.add_argument(
            "--pda-rows",
            dest="pda_rows",
            action="store_true",
            default=argparse.SUPPRESS,
            help="Add the (unavailable) PDA rows to the attacker table.",
        )
        return parser

    @classmethod
    def _get_flag_updates(cls, parsed: argparse.Namespace) -> dict[tuple[str, ...], typing.Any]:
        updates = super()._get_flag_updates(parsed)
        for name in ("table", "format", "precision", "workers", "pda_rows"):
            if hasattr(parsed, name):
                updates[("table", name)] = getattr(parsed, name)
        return updates

    def run(self):
        from pda_pow.tables.tables import build_table

        table = build_table(self.table)
        self.write_output(table.render(self.table.format))


if __name__ == "__main__":
    TableConfig.parse_and_run()
