'''
Worker pool used by every scan.

Grid rows are handed to a thread pool and the results are returned in row order, so a scan's output
never depends on how many workers ran it. `amap_rows` is the awaitable form for callers that already
run an event loop.
'''
from __future__ import annotations

import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from besselturan.utils.config import get_settings

logger = logging.getLogger(__name__)

Row = TypeVar("Row")
Result = TypeVar("Result")


def map_rows(func: Callable[[Row], Result], rows: Sequence[Row], workers: Optional[int] = None) -> List[Result]:
    '''
    Applies `func` to every row on a thread pool.

    Args:
        func (Callable): Pure function applied to each row.
        rows (Sequence): Grid rows.
        workers (int, optional): Worker count. Defaults to the configured thread count.

    Returns:
        list: func(row) for each row, in the order of `rows`.
    '''
    if workers is None:
        workers = get_settings().workers
    if workers <= 1 or len(rows) <= 1:
        return [func(row) for row in rows]
    logger.debug("dispatching %d rows to %d workers", len(rows), workers)
    with ThreadPoolExecutor(max_workers=min(workers, len(rows))) as pool:
        return list(pool.map(func, rows))


async def amap_rows(func: Callable[[Row], Result], rows: Sequence[Row],
                    workers: Optional[int] = None) -> List[Result]:
    '''
    Awaitable map_rows. Each row runs in a worker thread, at most `workers` at a time, and the event
    loop stays free while they do.

    Returns:
        list: func(row) for each row, in the order of `rows`. The first exception raised by a row
        propagates.
    '''
    if workers is None:
        workers = get_settings().workers
    gate = asyncio.Semaphore(max(workers, 1))

    async def run(row: Row) -> Result:
        async with gate:
            return await asyncio.to_thread(func, row)

    logger.debug("scheduling %d rows on the event loop, %d at a time", len(rows), max(workers, 1))
    return list(await asyncio.gather(*(run(row) for row in rows)))
