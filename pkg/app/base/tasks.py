import asyncio
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from .general import prinlv, thread_count

Item = TypeVar("Item")
Result = TypeVar("Result")

_worker = threading.local()


def _in_worker(fn: Callable[[Item], Result]) -> Callable[[Item], Result]:
    def run(item: Item) -> Result:
        _worker.active = True
        try:
            return fn(item)
        finally:
            _worker.active = False

    return run


async def gather_in_pool(
    fn: Callable[[Item], Result], items: List[Item], workers: int
) -> List[Result]:
    """
    Run `fn` over `items` as executor tasks and wait for all of them.
    `asyncio.gather` returns results in submission order, so any
    reduction over them is deterministic.
    """
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        tasks = [loop.run_in_executor(pool, _in_worker(fn), item) for item in items]
        return await asyncio.gather(*tasks)


def parallel_map(
    fn: Callable[[Item], Result], items: Iterable[Item], min_items: int = 8
) -> List[Result]:
    """
    Ordered map of `fn` over `items`, using up to RITTCALC_THREADS threads.
    Runs as a plain loop for short inputs, for a single thread, inside
    a pool worker, or when called from a running event loop.
    """
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1 or len(items) < min_items or getattr(_worker, "active", False):
        return [fn(item) for item in items]
    try:
        asyncio.get_running_loop()
        return [fn(item) for item in items]
    except RuntimeError:
        pass
    prinlv(f"Mapping {len(items)} item(s) over {workers} thread(s)...")
    return asyncio.run(gather_in_pool(fn, items, workers))
