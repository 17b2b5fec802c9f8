# modules/worker_pool.py
# -*- coding: utf-8 -*-
"""
分塊平行執行：
- 工作先切成固定大小的 chunk（與 worker 數無關），結果依 chunk 順序回傳
- workers <= 1 直接逐塊跑；否則用 asyncio + ProcessPoolExecutor，一批一批 gather
  → 呼叫端做可結合、可交換的 merge，輸出與 worker 數無關
"""
from __future__ import annotations

import asyncio
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

from tqdm import tqdm

from config import QUIET


def run_chunks(func: Callable, chunks: Sequence, workers: int = 1, desc: str | None = None) -> list:
    chunks = list(chunks)
    show = bool(desc) and not QUIET and len(chunks) > 1
    if workers <= 1 or len(chunks) <= 1:
        it = tqdm(chunks, desc=desc, disable=not show, leave=False)
        return [func(c) for c in it]
    return asyncio.run(_gather_chunks(func, chunks, workers, show, desc))


async def _gather_chunks(func, chunks, workers, show, desc):
    loop = asyncio.get_running_loop()
    batch = workers * 4
    results: list = []
    with ProcessPoolExecutor(max_workers=workers) as pool, \
            tqdm(total=len(chunks), desc=desc, disable=not show, leave=False) as bar:
        for i in range(0, len(chunks), batch):
            part = chunks[i:i + batch]
            done = await asyncio.gather(*(loop.run_in_executor(pool, func, c) for c in part))
            results.extend(done)
            bar.update(len(part))
    return results


def split_range(total: int, size: int) -> list:
    """[0, total) 切成固定大小的 (lo, hi)"""
    size = max(1, int(size))
    return [(lo, min(lo + size, total)) for lo in range(0, total, size)]
