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
"""Optional in-process metrics for construction and verification runs.

Collected when ``EULERFLOW_ENABLE_METRICS`` is set (or ``verify --metrics``):
- Check outcomes by name and status
- Phase latencies (construction phases, individual checks)
- Error counts by exception type

Checks run on worker threads, so every mutation holds the collector lock.
The snapshot is printed after ``verify`` and never enters the report.
"""

import math
import time
from collections import Counter, defaultdict
from dataclasses import dataclass
from threading import Lock
from typing import Any, Dict, Optional, Tuple


@dataclass
class LatencyStats:
    """Running count/total/min/max of a sampled value."""
    count: int = 0
    total: float = 0.0
    min: float = math.inf
    max: float = 0.0

    @property
    def avg(self) -> float:
        return self.total / self.count if self.count else 0.0

    def record(self, value: float) -> None:
        self.count += 1
        self.total += value
        if value < self.min:
            self.min = value
        if value > self.max:
            self.max = value

    def to_dict(self, unit: str = "ms") -> Dict[str, float]:
        """Serialize with unit-suffixed keys (``avg_ms`` etc.)."""
        suffix = f"_{unit}" if unit else ""
        lowest = self.min if self.count else 0.0
        return {
            "count": self.count,
            f"avg{suffix}": round(self.avg, 2),
            f"min{suffix}": round(lowest, 2),
            f"max{suffix}": round(self.max, 2),
        }


class MetricsCollector:
    """Thread-safe counters and latency samples for one process."""

    def __init__(self):
        self._lock = Lock()
        self.reset()

    def reset(self) -> None:
        with self._lock:
            self._checks: Counter[Tuple[str, str]] = Counter()
            self._errors: Counter[str] = Counter()
            self._latencies: Dict[str, LatencyStats] = defaultdict(LatencyStats)
            self._started = time.monotonic()

    def record_check(self, name: str, status: str) -> None:
        """Count one check outcome (passed, failed, skipped or error)."""
        with self._lock:
            self._checks[(name, status)] += 1

    def record_error(self, error_type: str) -> None:
        with self._lock:
            self._errors[error_type] += 1

    def record_latency(self, operation: str, duration_ms: float) -> None:
        with self._lock:
            self._latencies[operation].record(duration_ms)

    def get_metrics(self) -> Dict[str, Any]:
        """JSON-ready snapshot; check names are listed in sorted order."""
        with self._lock:
            by_status: Counter[str] = Counter()
            for (_, status), count in self._checks.items():
                by_status[status] += count
            return {
                "uptime_seconds": round(time.monotonic() - self._started, 2),
                "checks": {
                    "by_status": dict(by_status),
                    "by_name": {f"{name}:{status}": n for (name, status), n in sorted(self._checks.items())},
                },
                "errors": {"by_type": dict(self._errors)},
                "latencies": {op: stats.to_dict() for op, stats in self._latencies.items()},
            }


_collector: Optional[MetricsCollector] = None


def get_metrics_collector() -> Optional[MetricsCollector]:
    """The process collector, or None while metrics are disabled."""
    return _collector


def init_metrics_collector() -> MetricsCollector:
    global _collector
    if _collector is None:
        _collector = MetricsCollector()
    return _collector


def disable_metrics_collector() -> None:
    global _collector
    _collector = None


class MetricsTimer:
    """Record the latency of a block, and its exception type if it raises.

    Usage:
        with MetricsTimer("check.duality"):
            ...

    The collector is looked up once on entry; without one the timer does nothing.
    """

    def __init__(self, operation: str):
        self.operation = operation
        self.collector = get_metrics_collector()
        self._start = 0.0

    def __enter__(self) -> "MetricsTimer":
        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        if self.collector is None:
            return
        self.collector.record_latency(self.operation, (time.perf_counter() - self._start) * 1000)
        if exc_type is not None:
            self.collector.record_error(exc_type.__name__)
