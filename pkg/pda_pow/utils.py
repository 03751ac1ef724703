import itertools
import math
import typing

if typing.TYPE_CHECKING:
    import numpy as np


def header(title: str | None = None, width: int = 60, fill_char: str = "-"):
    if title is None:
        return fill_char * width
    title_width = len(title) + 2
    left = (width - title_width) // 2
    right = width - left - title_width
    return fill_char * left + f" {title} " + fill_char * right


def get_type_name(type_):
    if isinstance(type_, type):
        module = type_.__module__
        return type_.__qualname__ if module == "builtins" else f"{module}.{type_.__qualname__}"
    # Happens for aliases, None and invalid types.
    return type_


def format_significant(x: float, digits: int = 3) -> str:
    """
    Scientific notation with `digits` significant digits and a compact exponent, as in `6.38e-7`.
    """
    Assert.gt(digits, 0)
    if x == 0:
        return f"{0:.{digits - 1}f}e0"
    if not math.isfinite(x):
        return str(x)
    mantissa, exponent = f"{x:.{digits - 1}e}".split("e")
    return f"{mantissa}e{int(exponent)}"


def falling_factorial(n: int, d: int) -> int:
    """
    n * (n-1) * ... * (n-d+1), the number of injective maps from d labels into n players.
    """
    return math.perm(n, d) if d <= n else 0


class Tag:
    def __init__(self, value: str):
        self.value = value

    def __repr__(self):
        return self.value


class Assert:
    """
    A bunch of assertions that print relevant information on failure, packed into a namespace to simplify usage
    """

    @staticmethod
    def eq(x, *args):
        for arg in args:
            assert x == arg, f"{x} != {arg}"

    @staticmethod
    def geq(x, y):
        assert x >= y, f"{x} not >= {y}"

    @staticmethod
    def leq(x, y):
        assert x <= y, f"{x} not <= {y}"

    @staticmethod
    def gt(x, y):
        assert x > y, f"{x} not > {y}"

    @staticmethod
    def lt(x, y):
        assert x < y, f"{x} not < {y}"

    @staticmethod
    def in_range(x, low, high):
        assert low <= x < high, f"{x} not in range({low}, {high})"

    @staticmethod
    def close(x, y, atol: float = 0.0, rtol: float = 0.0):
        assert abs(x - y) <= atol + rtol * abs(y), f"{x} != {y} (atol={atol}, rtol={rtol})"

    @staticmethod
    def all_close(x: "np.ndarray", y: "np.ndarray", atol: float = 0.0, rtol: float = 0.0):
        import numpy as np

        x, y = np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)
        Assert.eq(x.shape, y.shape)
        diff = np.abs(x - y)
        bad = diff > atol + rtol * np.abs(y)
        if bad.any():
            index = np.flatnonzero(bad)
            raise AssertionError(
                f"Arrays have {index.size} mismatching entries out of {x.size}"
                f" (max abs diff {diff.max():.3e}): {x.ravel()[index[:8]]} != {y.ravel()[index[:8]]}"
                f" at index {index[:8]}"
            )

    @staticmethod
    def custom(fn, *args, **kwargs):
        assert fn(
            *args, **kwargs
        ), f"Assertion failed: fn({', '.join(itertools.chain((str(x) for x in args),(f'{str(k)}={str(v)}' for k,v in kwargs.items())))})"


_KeyType = typing.TypeVar("_KeyType")
_ValueType = typing.TypeVar("_ValueType")


class Registry(typing.Generic[_KeyType, _ValueType]):
    def __init__(self, name: str, data: dict[_KeyType, _ValueType]):
        self._name = name
        self._data = data.copy()

    def __getitem__(self, key):
        if key not in self:
            raise KeyError(f"Entry {key} not found in {self._name} registry")
        return self._data[key]

    def keys(self):
        return list(self._data)

    def __contains__(self, item):
        return item in self._data


class LazyRegistry(Registry):
    """
    A registry of zero-argument factories, so entries are only imported when requested.
    """

    def __getitem__(self, key):
        return super().__getitem__(key)()


def normalize_probabilities(p: "np.ndarray", axis: int = -1) -> "np.ndarray":
    """
    Normalize non-negative weights into probabilities along `axis`.
    """
    import numpy as np

    p = np.asarray(p, dtype=np.float64)
    Assert.custom(lambda x: np.all(x >= 0), p)
    p_sum = p.sum(axis=axis, keepdims=True)
    Assert.custom(lambda x: np.all(x > 0), p_sum)
    return p / p_sum
