"""Thread-pool map whose width is set by ``LIDSTONE_WORKERS`` (default 1)."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("LIDSTONE_WORKERS", "1")))
    except ValueError:
        return 1


def pmap(fn, items) -> list:
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
