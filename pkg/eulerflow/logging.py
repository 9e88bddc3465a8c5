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
"""Structured logging for eulerflow.

Every record carries the correlation fields of the current run:
- run_id: fingerprint of the CLI invocation (p, N, a, lift mode, seed)
- check_name: the verification check executing on this thread

Construction phases and checks are timed with :class:`PhaseTimer`. Logs go
to stderr; stdout is reserved for command output.
"""

import json
import logging
import sys
import time
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Any, Dict, Iterator, Optional

CORRELATION_FIELDS = ("run_id", "check_name")

_correlation: Dict[str, ContextVar[Optional[str]]] = {
    field: ContextVar(field, default=None) for field in CORRELATION_FIELDS
}

# Attributes set by logging.LogRecord itself; extras may not shadow them
RESERVED_ATTRS = frozenset(vars(logging.makeLogRecord({}))) | {"message", "asctime"}


def set_run_id(run_id: Optional[str]) -> None:
    _correlation["run_id"].set(run_id)


def set_check_name(check_name: Optional[str]) -> None:
    _correlation["check_name"].set(check_name)


@contextmanager
def check_scope(check_name: str) -> Iterator[None]:
    """Tag records emitted inside the block with ``check_name``."""
    token = _correlation["check_name"].set(check_name)
    try:
        yield
    finally:
        _correlation["check_name"].reset(token)


def clear_context() -> None:
    for var in _correlation.values():
        var.set(None)


def get_structured_extras() -> Dict[str, Any]:
    """Correlation fields that are currently set."""
    return {field: var.get() for field, var in _correlation.items() if var.get()}


class StructuredLogger:
    """Logger whose keyword arguments become record attributes.

    Example:
        >>> logger = StructuredLogger(__name__)
        >>> logger.info("Flow constructed", p=5, delta3_degree=9)

    A keyword that collides with a LogRecord attribute (``name``, ``msg``,
    ``module``...) is renamed to ``<key>_value`` and a warning is emitted.
    """

    def __init__(self, name: str):
        self.logger = logging.getLogger(name)

    def _fields(self, fields: Dict[str, Any], stacklevel: int) -> Dict[str, Any]:
        extras = get_structured_extras()
        for key, value in fields.items():
            if key in RESERVED_ATTRS:
                self.logger.warning(
                    "Attempted to use reserved LogRecord attribute '%s' in log extras; stored as '%s_value'",
                    key,
                    key,
                    stacklevel=stacklevel + 1,
                )
                key = f"{key}_value"
            extras[key] = value
        return extras

    def log(self, level: int, message: str, /, **fields: Any) -> None:
        if not self.logger.isEnabledFor(level):
            return
        exc_info = fields.pop("exc_info", None)
        stacklevel = fields.pop("stacklevel", 1) + 1
        self.logger.log(
            level,
            message,
            extra=self._fields(fields, stacklevel),
            exc_info=exc_info,
            stacklevel=stacklevel,
        )

    def debug(self, message: str, **fields: Any) -> None:
        self.log(logging.DEBUG, message, stacklevel=2, **fields)

    def info(self, message: str, **fields: Any) -> None:
        self.log(logging.INFO, message, stacklevel=2, **fields)

    def warning(self, message: str, **fields: Any) -> None:
        self.log(logging.WARNING, message, stacklevel=2, **fields)

    def error(self, message: str, **fields: Any) -> None:
        self.log(logging.ERROR, message, stacklevel=2, **fields)


class PhaseTimer:
    """Time a construction phase or check and log its outcome.

    Usage:
        with PhaseTimer("cramer", logger):
            phi1_sq, phi2_sq = cramer_phi_squared(params, delta3)

    Completion is logged at DEBUG, failure at ERROR with the exception type.
    The exception itself propagates.
    """

    def __init__(self, phase: str, logger: StructuredLogger):
        self.phase = phase
        self.logger = logger
        self.duration_ms = 0.0
        self._start = 0.0

    def __enter__(self) -> "PhaseTimer":
        self._start = time.perf_counter()
        self.logger.debug(f"Phase started: {self.phase}")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.duration_ms = (time.perf_counter() - self._start) * 1000
        elapsed = f"{self.duration_ms:.2f}"
        if exc_type is None:
            self.logger.debug(f"Phase completed: {self.phase}", duration_ms=elapsed)
        else:
            self.logger.error(
                f"Phase failed: {self.phase}", duration_ms=elapsed, error_type=exc_type.__name__
            )


class JsonFormatter(logging.Formatter):
    """One JSON object per record: level, logger, message and structured fields."""

    def format(self, record: logging.LogRecord) -> str:
        payload: Dict[str, Any] = {
            "timestamp": self.formatTime(record),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        payload.update(
            (key, value) for key, value in vars(record).items()
            if key not in RESERVED_ATTRS and key not in payload
        )
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload, default=str)


def configure_logging(level: str = "INFO", json_format: bool = False) -> None:
    """Replace the root handlers with a single stderr handler."""
    numeric = logging.getLevelName(level.upper())
    if not isinstance(numeric, int):
        numeric = logging.INFO
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(
        JsonFormatter() if json_format
        else logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s")
    )
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(numeric)
