import enum
import typing

from pda_pow.config import Config, Field, FieldHint, ValidationError, check_field, config_class, skip_valid_if_none
from pda_pow.utils import Assert

if typing.TYPE_CHECKING:
    import numpy as np

    from pda_pow.model.difficulty import DifficultyFunction

# Keys of the system json schema, used to recognize system-only config files.
SYSTEM_CONFIG_KEYS = frozenset(("n", "k", "alpha", "powers"))


class DifficultyFunctionType(str, enum.Enum):
    """
    The available difficulty functions. Both are non-ordered: they only depend on the win counts in the window.
    """

    uniform = "uniform"
    exponential = "exponential"


def _check_positive_powers(powers: list[float]):
    for power in powers:
        Assert.gt(power, 0)
    return powers


@config_class()
class SystemConfig(Config):
    """
    The fixed parameters of a personalized difficulty adjustment (PDA) proof-of-work system:
    the players, their computing powers, the history window and the difficulty function.
    """

    n: int = Field(
        default=None,
        desc="Number of players.",
        hint=FieldHint.core,
        valid=check_field(Assert.gt, 0),
    )
    k: int = Field(
        default=1,
        desc="Number of past blocks (winning history window) seen by the difficulty function.",
        hint=FieldHint.core,
        valid=check_field(Assert.gt, 0),
    )
    alpha: float | None = Field(
        default=None,
        desc="Base of the exponential non-ordered difficulty function. None means a uniform difficulty.",
        hint=FieldHint.core,
        valid=skip_valid_if_none(check_field(Assert.gt, 0)),
    )
    powers: list[float] | None = Field(
        default=None,
        desc="Computing power of each player. Defaults to the same power (1.0) for every player.",
        hint=FieldHint.optional,
        valid=skip_valid_if_none(_check_positive_powers),
    )

    def _validate(self):
        super()._validate()
        if self.powers is not None and len(self.powers) != self.n:
            raise ValidationError(f"Expected {self.n} computing powers, got {len(self.powers)}")

    @classmethod
    def traditional(cls, n: int, powers: list[float] | None = None) -> "SystemConfig":
        """
        A traditional proof-of-work system: one difficulty shared by every player, so no history matters.
        """
        return cls(n=n, k=1, alpha=None, powers=powers)

    @property
    def difficulty_type(self) -> DifficultyFunctionType:
        return DifficultyFunctionType.uniform if self.alpha is None else DifficultyFunctionType.exponential

    @property
    def equal_powers(self) -> bool:
        return self.powers is None or len(set(self.powers)) == 1

    @property
    def num_states(self) -> int:
        return self.n**self.k

    @property
    def computing_powers(self) -> "np.ndarray":
        import numpy as np

        return np.ones(self.n) if self.powers is None else np.array(self.powers, dtype=np.float64)

    @property
    def difficulty_function(self) -> "DifficultyFunction":
        from pda_pow.model.difficulty import create_difficulty_function

        return create_difficulty_function(self)
