"""
Thread configuration for sweep evaluation.

``OPTOCOOL_THREADS`` sets the initial worker count; otherwise every core is
used. ``set_sweep_threads`` changes it at runtime.
"""
from __future__ import annotations

import logging
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

logger = logging.getLogger(__name__)

ENV_VAR = "OPTOCOOL_THREADS"

T = TypeVar("T")
R = TypeVar("R")

_lock = threading.Lock()
_threads: int | None = None


def get_hardware_concurrency() -> int:
    """Number of logical cores, at least 1."""
    return max(1, os.cpu_count() or 1)


def get_optimal_thread_count() -> int:
    """Worker count used when nothing is configured: the env cap or every core."""
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return get_hardware_concurrency()
    try:
        value = int(raw)
    except ValueError:
        logger.warning("ignoring %s=%r: not an integer", ENV_VAR, raw)
        return get_hardware_concurrency()
    if value < 1:
        logger.warning("ignoring %s=%r: must be >= 1", ENV_VAR, raw)
        return get_hardware_concurrency()
    return value


def set_sweep_threads(n: int) -> None:
    global _threads
    with _lock:
        _threads = max(1, int(n))


def get_sweep_threads() -> int:
    with _lock:
        if _threads is None:
            return get_optimal_thread_count()
        return _threads


def reset_sweep_threads() -> None:
    """Forget any runtime setting and go back to the environment default."""
    global _threads
    with _lock:
        _threads = None


def ordered_map(func: Callable[[T], R], items: Iterable[T],
                threads: int | None = None) -> list[R]:
    """``[func(x) for x in items]`` evaluated on a thread pool, in input order."""
    items = list(items)
    workers = min(threads or get_sweep_threads(), max(1, len(items)))
    if workers == 1:
        return [func(item) for item in items]
    results: list = [None] * len(items)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(func, item): i for i, item in enumerate(items)}
        for future, index in futures.items():
            results[index] = future.result()
    return results
