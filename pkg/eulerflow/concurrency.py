# Copyright 2025 John Brosnihan
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Bounded worker pool for verification checks.

Checks are blocking, CPU-bound callables. CheckPool runs them on worker
threads under an asyncio.Semaphore and returns results in submission order,
so the report order never depends on completion order.
"""

import asyncio
from typing import Callable, Sequence, TypeVar

from eulerflow.logging import StructuredLogger

logger = StructuredLogger(__name__)

T = TypeVar('T')


class CheckPool:
    """Semaphore-bounded pool running blocking callables via asyncio.to_thread."""

    def __init__(self, max_concurrent: int):
        """Initialize the pool.

        Args:
            max_concurrent: Maximum number of checks running at once
        """
        if max_concurrent < 1:
            raise ValueError(f"max_concurrent must be at least 1, got {max_concurrent}")
        self.max_concurrent = max_concurrent
        self._semaphore = asyncio.Semaphore(max_concurrent)
        self._active_count = 0
        self._peak_count = 0

    async def __aenter__(self):
        await self._semaphore.acquire()
        self._active_count += 1
        self._peak_count = max(self._peak_count, self._active_count)
        return self

    async def __aexit__(self, exc_type, exc_val, exc_tb):
        self._active_count -= 1
        self._semaphore.release()

    @property
    def active_count(self) -> int:
        """Get current number of running checks."""
        return self._active_count

    @property
    def peak_count(self) -> int:
        """Highest number of checks that ran at once."""
        return self._peak_count

    async def run(self, func: Callable[[], T]) -> T:
        """Run one blocking callable on a worker thread once a slot is free."""
        async with self:
            return await asyncio.to_thread(func)

    async def run_all(self, funcs: Sequence[Callable[[], T]]) -> list[T]:
        """Run all callables, returning their results in submission order."""
        logger.debug("Dispatching checks", count=len(funcs), max_concurrent=self.max_concurrent)
        return list(await asyncio.gather(*(self.run(f) for f in funcs)))
