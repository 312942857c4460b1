from typing import Callable, List, Optional, Sequence, TypeVar
import asyncio
import logging

from .config import get_caps

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


async def sweep(fn: Callable[[T], R], items: Sequence[T], jobs: Optional[int] = None) -> List[R]:
    """
    Evaluate fn over independent items in worker threads.

    Args:
        fn: Pure function applied to each item
        items: Work items
        jobs: Maximum number of concurrent evaluations. Defaults to the configured jobs cap

    Returns:
        Results in the same order as items
    """
    jobs = jobs or get_caps().jobs
    semaphore = asyncio.Semaphore(max(1, jobs))

    async def run_item(index: int, item: T) -> R:
        async with semaphore:
            logger.debug("sweep item %d/%d started", index + 1, len(items))
            return await asyncio.to_thread(fn, item)

    tasks = [run_item(index, item) for index, item in enumerate(items)]
    return list(await asyncio.gather(*tasks))


def sweep_sync(fn: Callable[[T], R], items: Sequence[T], jobs: Optional[int] = None) -> List[R]:
    """
    Synchronous version of sweep. With a single job the items run inline.
    """
    jobs = jobs or get_caps().jobs
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    return asyncio.run(sweep(fn, items, jobs))
