import time

from functools import wraps
from typing import Iterator

from tno.shared.log import get_logger

logger = get_logger(__name__)


def popcount(mask: int) -> int:
    """Number of set bits of a non-negative int mask."""
    return bin(mask).count("1")


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of `mask`, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bit(mask: int) -> int:
    """Position of the lowest set bit, -1 for an empty mask."""
    return (mask & -mask).bit_length() - 1


def timed(func):
    """This decorator logs the execution time for the decorated function."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        start = time.time()
        result = func(*args, **kwargs)
        end = time.time()
        runtime = round(end - start, 3)
        logger.debug(
            "{} ran in {}s".format(func.__name__, runtime),
            function=func.__name__,
            runtime=runtime,
        )
        return result

    return wrapper
