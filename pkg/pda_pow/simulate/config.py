from pda_pow.config import Config, Field, FieldHint, check_field, config_class, skip_valid_if_none
from pda_pow.utils import Assert


@config_class()
class SimulationConfig(Config):
    blocks: int = Field(
        default=10**6,
        desc="Number of measured blocks, mined after the initial history and the burn-in.",
        hint=FieldHint.core,
        valid=check_field(Assert.gt, 0),
    )
    seed: int = Field(
        default=0,
        desc="Seed of the PCG64 random generator. Runs with the same system, length and seed are identical.",
        hint=FieldHint.core,
        valid=check_field(Assert.geq, 0),
    )
    tracked_player: int = Field(
        default=0,
        desc="Player whose consecutive winning runs are counted.",
        hint=FieldHint.optional,
        valid=check_field(Assert.geq, 0),
    )
    race_mode: bool = Field(
        default=False,
        desc="Pick each winner as the first player to solve the puzzle among exponential waiting times,"
        " instead of a direct draw from the winning probabilities.",
        hint=FieldHint.feature,
    )
    burn_in: int | None = Field(
        default=None,
        desc="Blocks mined and discarded after the initial history. Default: 10 * k.",
        hint=FieldHint.optional,
        valid=skip_valid_if_none(check_field(Assert.geq, 0)),
    )
    batches: int = Field(
        default=50,
        desc="Number of contiguous batches for the batch-means standard error.",
        hint=FieldHint.stability,
        valid=check_field(Assert.geq, 2),
    )
    chunk_size: int = Field(
        default=2**16,
        desc="Number of random draws generated at once.",
        hint=FieldHint.performance,
        valid=check_field(Assert.gt, 0),
    )

    def get_burn_in(self, k: int) -> int:
        return 10 * k if self.burn_in is None else self.burn_in
