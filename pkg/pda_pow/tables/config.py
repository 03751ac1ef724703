import enum

from pda_pow.baseline.config import check_fraction
from pda_pow.config import (
    Config,
    Field,
    FieldHint,
    ValidationError,
    check_field,
    config_class,
    skip_valid_if_none,
)
from pda_pow.utils import Assert


class TableId(str, enum.Enum):
    # Consecutive winning probability for n=5, by difficulty function and window.
    table1 = "table1"
    # Consecutive winning probability with a 2-exponential difficulty, by number of players and window.
    table3 = "table3"
    # Catch-up probability of an attacker in traditional proof-of-work, by confirmation depth.
    table4_bitcoin = "table4-bitcoin"


class TableFormat(str, enum.Enum):
    csv = "csv"
    json = "json"
    markdown = "markdown"


def _check_positive_values(values: list):
    Assert.gt(len(values), 0)
    for value in values:
        Assert.gt(value, 0)


@config_class()
class TableSpec(Config):
    """
    A table of consecutive winning (or attacker success) probabilities.
    Ranges left unset take the values of the published table.
    """

    table: TableId = Field(default=TableId.table1, desc="The table to compute.", hint=FieldHint.core)
    format: TableFormat = Field(default=TableFormat.csv, desc="Output format.", hint=FieldHint.core)
    n_values: list[int] | None = Field(
        default=None,
        desc="Numbers of players. Fixed to [5] for table1.",
        hint=FieldHint.optional,
        valid=skip_valid_if_none(check_field(_check_positive_values)),
    )
    k_values: list[int] | None = Field(
        default=None,
        desc="Winning history windows, one column each.",
        hint=FieldHint.optional,
        valid=skip_valid_if_none(check_field(_check_positive_values)),
    )
    alpha_values: list[float] | None = Field(
        default=None,
        desc="Bases of the exponential difficulty function. 1 means no difficulty adjustment.",
        hint=FieldHint.optional,
        valid=skip_valid_if_none(check_field(_check_positive_values)),
    )
    q: float = Field(
        default=0.1,
        desc="Computing power fraction of the attacker, for table4-bitcoin.",
        hint=FieldHint.optional,
        valid=check_field(check_fraction),
    )
    depths: list[int] | None = Field(
        default=None,
        desc="Confirmation depths, for table4-bitcoin.",
        hint=FieldHint.optional,
        valid=skip_valid_if_none(check_field(_check_positive_values)),
    )
    precision: int | None = Field(
        default=None,
        desc="Significant digits of the printed values. Default: 4 for table4-bitcoin, 3 otherwise.",
        hint=FieldHint.optional,
        valid=skip_valid_if_none(check_field(Assert.gt, 0)),
    )
    pda_rows: bool = Field(
        default=False,
        desc="Add the PDA rows of the attacker table. Their parameters are unknown, so they are printed as n/a.",
        hint=FieldHint.feature,
    )
    workers: int = Field(
        default=1,
        desc="Number of processes computing the table cells.",
        hint=FieldHint.performance,
        valid=check_field(Assert.gt, 0),
    )

    def _validate(self):
        if self.table == TableId.table1:
            if self.n_values is None:
                self.n_values = [5]
            if self.k_values is None:
                self.k_values = [2, 3, 4, 5]
            if self.alpha_values is None:
                self.alpha_values = [1.0, 2.0, 5.0]
        elif self.table == TableId.table3:
            if self.n_values is None:
                self.n_values = list(range(1, 8))
            if self.k_values is None:
                self.k_values = list(range(1, 7))
            if self.alpha_values is None:
                self.alpha_values = [2.0]
        elif self.table == TableId.table4_bitcoin:
            if self.depths is None:
                self.depths = list(range(1, 7))
            if self.alpha_values is None:
                self.alpha_values = [2.0, 5.0]
        if self.precision is None:
            self.precision = 4 if self.table == TableId.table4_bitcoin else 3
        super()._validate()
        if self.table == TableId.table1 and self.n_values != [5]:
            raise ValidationError(f"table1 is for n=5, got n_values={self.n_values}")
