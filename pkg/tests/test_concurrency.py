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
"""Tests for the bounded check pool."""

import threading
import time

import pytest

from eulerflow.concurrency import CheckPool


def test_pool_rejects_zero_workers():
    with pytest.raises(ValueError, match="at least 1"):
        CheckPool(0)


@pytest.mark.asyncio
async def test_run_all_preserves_submission_order():
    """Test that results come back in submission order, not completion order."""
    pool = CheckPool(4)

    def make(i):
        def work():
            time.sleep(0.01 * (5 - i))
            return i
        return work

    results = await pool.run_all([make(i) for i in range(5)])
    assert results == [0, 1, 2, 3, 4]


@pytest.mark.asyncio
async def test_pool_bounds_concurrency():
    """Test that no more than max_concurrent checks run at once."""
    pool = CheckPool(2)
    lock = threading.Lock()
    running = 0
    peak = 0

    def work():
        nonlocal running, peak
        with lock:
            running += 1
            peak = max(peak, running)
        time.sleep(0.02)
        with lock:
            running -= 1
        return True

    results = await pool.run_all([work] * 6)

    assert all(results)
    assert peak <= 2
    assert pool.peak_count <= 2
    assert pool.active_count == 0


@pytest.mark.asyncio
async def test_run_propagates_exceptions():
    pool = CheckPool(1)

    def fail():
        raise RuntimeError("check crashed")

    with pytest.raises(RuntimeError, match="check crashed"):
        await pool.run(fail)
    assert pool.active_count == 0
