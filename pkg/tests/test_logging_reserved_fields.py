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
"""Tests for structured logging: reserved fields, correlation context, JSON output."""

import json
import logging

import pytest

from eulerflow.logging import (
    JsonFormatter,
    PhaseTimer,
    StructuredLogger,
    check_scope,
    clear_context,
    get_structured_extras,
    set_check_name,
    set_run_id,
)


class TestLoggingReservedFields:
    """Test suite for logging reserved field handling."""

    def test_domain_fields_logging(self, caplog):
        """Test that flow fields can be logged without errors."""
        logger = StructuredLogger(__name__)

        with caplog.at_level(logging.INFO):
            logger.info("Flow constructed", p=5, precision=3, delta3_degree=9)

        assert "Flow constructed" in caplog.text
        record = caplog.records[-1]
        assert record.delta3_degree == 9

    def test_reserved_field_warning(self, caplog):
        """Test that using reserved field 'name' triggers a warning and a rename."""
        logger = StructuredLogger(__name__)

        with caplog.at_level(logging.INFO):
            logger.info("Test message", name="linearization")

        warning_found = any(
            "reserved LogRecord attribute" in record.message
            for record in caplog.records
            if record.levelname == "WARNING"
        )
        assert warning_found, "Expected warning about reserved attribute 'name'"
        info = [r for r in caplog.records if r.getMessage() == "Test message"][0]
        assert info.name_value == "linearization"

    def test_multiple_reserved_fields_warning(self, caplog):
        """Test that using multiple reserved fields triggers warnings."""
        logger = StructuredLogger(__name__)

        with caplog.at_level(logging.WARNING):
            logger.warning("Test message", name="a", msg="b", module="c")

        warnings = [
            record for record in caplog.records
            if "reserved LogRecord attribute" in record.message
        ]
        assert len(warnings) >= 3, f"Expected at least 3 warnings, got {len(warnings)}"

    def test_disabled_level_skips_work(self, caplog):
        logger = StructuredLogger(__name__)

        with caplog.at_level(logging.WARNING):
            logger.debug("Hidden", name="ignored")

        assert caplog.records == []


class TestCorrelationContext:
    """Test suite for run_id and check_name correlation."""

    def test_context_fields_attached(self, caplog):
        logger = StructuredLogger(__name__)
        set_run_id("p5-N3-a0,1,2-exact-s0")
        set_check_name("duality")

        with caplog.at_level(logging.INFO):
            logger.info("Check finished")

        record = caplog.records[-1]
        assert record.run_id == "p5-N3-a0,1,2-exact-s0"
        assert record.check_name == "duality"

    def test_check_scope_restores_previous_name(self):
        set_check_name("outer")
        with check_scope("duality"):
            assert get_structured_extras()["check_name"] == "duality"
        assert get_structured_extras()["check_name"] == "outer"

    def test_clear_context(self):
        set_run_id("run")
        set_check_name("check")
        clear_context()
        assert get_structured_extras() == {}


def test_json_formatter_includes_extras():
    """Test that JSON output carries correlation and structured fields."""
    record = logging.LogRecord(
        name="eulerflow.test",
        level=logging.INFO,
        pathname=__file__,
        lineno=1,
        msg="Phase completed: %s",
        args=("cramer",),
        exc_info=None,
    )
    record.run_id = "run-1"
    record.duration_ms = "1.50"

    data = json.loads(JsonFormatter().format(record))

    assert data["message"] == "Phase completed: cramer"
    assert data["level"] == "INFO"
    assert data["logger"] == "eulerflow.test"
    assert data["run_id"] == "run-1"
    assert data["duration_ms"] == "1.50"
    assert "lineno" not in data


def test_phase_timer_logs_completion(caplog):
    logger = StructuredLogger(__name__)

    with caplog.at_level(logging.DEBUG):
        with PhaseTimer("delta3", logger) as timer:
            pass

    messages = [r.getMessage() for r in caplog.records]
    assert "Phase started: delta3" in messages
    assert "Phase completed: delta3" in messages
    assert timer.duration_ms >= 0


def test_phase_timer_logs_failure(caplog):
    logger = StructuredLogger(__name__)

    with caplog.at_level(logging.DEBUG):
        with pytest.raises(RuntimeError):
            with PhaseTimer("roots", logger):
                raise RuntimeError("boom")

    failed = [r for r in caplog.records if r.getMessage() == "Phase failed: roots"]
    assert failed
    assert failed[0].error_type == "RuntimeError"
