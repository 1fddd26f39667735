"""Order-preserving map over independent evaluations, capped by ONOFRI_LAB_THREADS."""

import os
from concurrent.futures import ThreadPoolExecutor

ENV_VAR = "ONOFRI_LAB_THREADS"


def worker_count():
    raw = os.environ.get(ENV_VAR, "1")
    try:
        count = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_VAR} must be a positive integer, got {raw!r}") from None
    if count < 1:
        raise ValueError(f"{ENV_VAR} must be a positive integer, got {raw!r}")
    return count


def pmap(fn, items):
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
