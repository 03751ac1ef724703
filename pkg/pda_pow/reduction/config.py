from pda_pow.config import Config, Field, FieldHint, check_field, config_class
from pda_pow.utils import Assert


@config_class()
class ReductionConfig(Config):
    orbit_check_states: int = Field(
        default=200_000,
        desc="Count the preimages of every reduced state by brute force"
        " when the standard state space is at most this large.",
        hint=FieldHint.expert,
        valid=check_field(Assert.geq, 0),
    )
    orbit_check_max_k: int = Field(
        default=6,
        desc="Largest window for which orbit sizes are counted by brute force.",
        hint=FieldHint.expert,
        valid=check_field(Assert.geq, 0),
    )
    lumpability_samples: int = Field(
        default=16,
        desc="Number of reduced states on which the row-sum constancy across preimages"
        " is verified when building the chain.",
        hint=FieldHint.testing,
        valid=check_field(Assert.geq, 0),
    )
    lumpability_tolerance: float = Field(
        default=1e-12,
        desc="Tolerance on the row-sum constancy check.",
        hint=FieldHint.testing,
        valid=check_field(Assert.gt, 0),
    )
    seed: int = Field(
        default=0,
        desc="Seed for sampling the states checked for lumpability.",
        hint=FieldHint.testing,
    )
