import numpy as np
from numpy.random import Generator, Philox


STREAMS_PER_TRIAL = 2**32
"""number of independent streams available inside a single trial"""

_UINT64 = 2**64


def stream(seed: int, trial: int, index: int = 0) -> Generator:
    """
    Get the random generator of stream ``index`` in trial ``trial`` of an
    experiment seeded with ``seed``.

    Streams are keyed Philox generators: the draws of a stream only depend on
    ``(seed, trial, index)``, and not on the order in which streams are used.
    This makes multi-threaded experiments reproducible.
    """
    if not 0 <= seed < _UINT64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if trial < 0 or not 0 <= index < STREAMS_PER_TRIAL:
        raise ValueError(f"invalid stream ({trial}, {index})")

    counter = trial * STREAMS_PER_TRIAL + index
    if counter >= _UINT64:
        raise ValueError(f"trial {trial} is too large")

    key = np.array([seed, counter], dtype=np.uint64)
    return Generator(Philox(key=key))
