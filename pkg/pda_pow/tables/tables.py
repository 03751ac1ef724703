import csv
import dataclasses
import io
import json
import logging
import multiprocessing
import typing

import tqdm

from pda_pow.baseline.nakamoto import attacker_success_row
from pda_pow.consecutive import consecutive_probability
from pda_pow.model.config import SystemConfig
from pda_pow.tables.config import TableFormat, TableId, TableSpec
from pda_pow.utils import Assert, format_significant

logger = logging.getLogger(__name__)

NOT_AVAILABLE = "n/a"

PDA_ROWS_NOTE = (
    "The PDA rows of the attacker table are not reproducible:"
    " the number of players, window and run length behind them are not specified."
)


@dataclasses.dataclass()
class Table:
    title: str
    corner: str
    columns: list[str]
    rows: list[str]
    # Missing cells are None.
    cells: list[list[float | None]]
    precision: int
    notes: list[str] = dataclasses.field(default_factory=list)

    def __post_init__(self):
        Assert.eq(len(self.cells), len(self.rows))
        for row in self.cells:
            Assert.eq(len(row), len(self.columns))

    def format_cell(self, value: float | None) -> str:
        return NOT_AVAILABLE if value is None else format_significant(value, self.precision)

    def formatted_cells(self) -> list[list[str]]:
        return [[self.format_cell(value) for value in row] for row in self.cells]

    def to_csv(self) -> str:
        stream = io.StringIO()
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow([self.corner, *self.columns])
        for label, row in zip(self.rows, self.formatted_cells()):
            writer.writerow([label, *row])
        for note in self.notes:
            writer.writerow([f"# {note}"])
        return stream.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {
                "title": self.title,
                "corner": self.corner,
                "columns": self.columns,
                "rows": [
                    {"label": label, "values": values, "formatted": formatted}
                    for label, values, formatted in zip(self.rows, self.cells, self.formatted_cells())
                ],
                "notes": self.notes,
            },
            indent=2,
        )

    def to_markdown(self) -> str:
        lines = [
            f"**{self.title}**",
            "",
            "| " + " | ".join([self.corner, *self.columns]) + " |",
            "|" + "---|" * (len(self.columns) + 1),
        ]
        for label, row in zip(self.rows, self.formatted_cells()):
            lines.append("| " + " | ".join([label, *row]) + " |")
        lines.extend(f"\n_{note}_" for note in self.notes)
        return "\n".join(lines) + "\n"

    def render(self, format_: TableFormat) -> str:
        format_ = TableFormat(format_)
        if format_ == TableFormat.csv:
            return self.to_csv()
        elif format_ == TableFormat.json:
            return self.to_json()
        elif format_ == TableFormat.markdown:
            return self.to_markdown()
        raise NotImplementedError(format_)


def _difficulty_label(alpha: float) -> str:
    return "No difficulty" if alpha == 1 else f"{alpha:g}-exponential non-ordered"


def _system(n: int, k: int, alpha: float) -> SystemConfig:
    return SystemConfig(n=n, k=k, alpha=None if alpha == 1 else alpha)


def _compute_cell(system: dict[str, typing.Any]) -> float:
    return consecutive_probability(SystemConfig.from_dict(system))


def compute_consecutive_probabilities(systems: list[SystemConfig], workers: int = 1) -> list[float]:
    """
    The consecutive winning probability of each system, in order, computed in `workers` processes.
    """
    tasks = [system.to_serialized(verbose=None) for system in systems]
    with tqdm.tqdm(total=len(tasks), desc="Table cells", unit="cell", disable=len(tasks) <= 1) as progress:
        if workers == 1:
            results = []
            for task in tasks:
                results.append(_compute_cell(task))
                progress.update()
        else:
            with multiprocessing.Pool(min(workers, len(tasks))) as pool:
                results = []
                for result in pool.imap(_compute_cell, tasks):
                    results.append(result)
                    progress.update()
    return results


def build_table(spec: TableSpec) -> Table:
    if spec.table == TableId.table1:
        (n,) = spec.n_values
        systems = [_system(n, k, alpha) for alpha in spec.alpha_values for k in spec.k_values]
        values = compute_consecutive_probabilities(systems, spec.workers)
        width = len(spec.k_values)
        return Table(
            title=f"Probability of consecutive winning. n={n}.",
            corner="Difficulty function \\ k",
            columns=[str(k) for k in spec.k_values],
            rows=[_difficulty_label(alpha) for alpha in spec.alpha_values],
            cells=[values[i : i + width] for i in range(0, len(values), width)],
            precision=spec.precision,
        )
    elif spec.table == TableId.table3:
        row_keys = [(n, alpha) for alpha in spec.alpha_values for n in spec.n_values]
        systems = [_system(n, k, alpha) for n, alpha in row_keys for k in spec.k_values]
        values = compute_consecutive_probabilities(systems, spec.workers)
        width = len(spec.k_values)
        single_alpha = len(spec.alpha_values) == 1
        return Table(
            title="Probability of consecutive winning."
            + (f" {_difficulty_label(spec.alpha_values[0])} difficulty." if single_alpha else ""),
            corner="n \\ k",
            columns=[str(k) for k in spec.k_values],
            rows=[str(n) if single_alpha else f"{n} (alpha={alpha:g})" for n, alpha in row_keys],
            cells=[values[i : i + width] for i in range(0, len(values), width)],
            precision=spec.precision,
        )
    elif spec.table == TableId.table4_bitcoin:
        rows = ["Bitcoin PoW"]
        cells = [attacker_success_row(spec.q, spec.depths)]
        notes = []
        if spec.pda_rows:
            rows.extend(f"PDA PoW: {alpha:g}-exponential" for alpha in spec.alpha_values)
            cells.extend([None] * len(spec.depths) for _ in spec.alpha_values)
            notes.append(PDA_ROWS_NOTE)
        return Table(
            title=f"Attacker has {spec.q:.0%} computing power.",
            corner="Mechanism \\ k",
            columns=[str(depth) for depth in spec.depths],
            rows=rows,
            cells=cells,
            precision=spec.precision,
            notes=notes,
        )
    raise NotImplementedError(spec.table)
