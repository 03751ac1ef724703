import math
import typing

from pda_pow.baseline.config import AttackerParams


def attacker_success(params: AttackerParams) -> float:
    """
    Probability that an attacker with a fraction q of the computing power ever catches up
    after the honest chain got z blocks ahead.
    The progress of the attacker while the z blocks are mined is Poisson with mean z * q / (1 - q).
    """
    q, z = params.q, params.z
    p = 1.0 - q
    if q >= p:
        return 1.0
    ratio = q / p
    mean = z * ratio
    poisson = math.exp(-mean)
    total = 1.0
    for j in range(z + 1):
        if j > 0:
            poisson *= mean / j
        total -= poisson * (1 - ratio ** (z - j))
    return min(max(total, 0.0), 1.0)


def attacker_success_row(q: float, depths: typing.Iterable[int] = range(1, 7)) -> list[float]:
    return [attacker_success(AttackerParams(q=q, z=z)) for z in depths]
