"""Worker-count control for the per-line solve loops.

Lines within a sweep are independent and write disjoint output slabs, so
results are identical for any worker count; threads only trade wall time.
"""
from __future__ import annotations

import os

_max_workers: int | None = None


def set_max_workers(n: int | None) -> None:
    global _max_workers
    _max_workers = None if n is None else max(1, int(n))


def get_max_workers() -> int:
    if _max_workers is not None:
        return _max_workers
    env = os.environ.get("SLSV_THREADS", "")
    try:
        return max(1, int(env))
    except ValueError:
        return 1
