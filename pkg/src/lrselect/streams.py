"""Per-trial random streams keyed by ``(seed, trial_index)``.

Each trial gets its own Philox generator whose 128-bit key packs the seed in
the high word and the trial index in the low word.  A trial's draws therefore
never depend on which thread ran it or in what order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

import numpy as np

T = TypeVar("T")

_MASK64 = (1 << 64) - 1


def check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must lie in [0, 2**64), got {seed}")
    return seed


def trial_rng(seed: int, index: int, stream: int = 0) -> np.random.Generator:
    """Generator for trial ``index``; ``stream`` separates independent uses of one seed."""
    low = ((stream << 48) ^ index) & _MASK64
    key = (check_seed(seed) << 64) | low
    return np.random.Generator(np.random.Philox(key=key))


def blocks(total: int, size: int) -> list[range]:
    return [range(start, min(start + size, total)) for start in range(0, total, size)]


def map_blocks(fn: Callable[[range], T], ranges: Iterable[range], workers: int = 1) -> list[T]:
    """Apply ``fn`` to each block, optionally on a thread pool; results keep block order."""
    ranges = list(ranges)
    if workers <= 1 or len(ranges) <= 1:
        return [fn(r) for r in ranges]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, ranges))
