from pda_pow.config import Config, Field, FieldHint, check_field, config_class
from pda_pow.utils import Assert


def check_fraction(q: float):
    Assert.gt(q, 0)
    Assert.lt(q, 1)


@config_class()
class AttackerParams(Config):
    """
    A double-spending attack on a traditional proof-of-work chain:
    the attacker holds a fraction `q` of the computing power and the merchant waits for `z` confirmations.
    """

    q: float = Field(
        default=0.1,
        desc="Fraction of the total computing power held by the attacker.",
        hint=FieldHint.core,
        valid=check_field(check_fraction),
    )
    z: int = Field(
        default=1,
        desc="Number of confirmation blocks the merchant waits for.",
        hint=FieldHint.core,
        valid=check_field(Assert.geq, 1),
    )
