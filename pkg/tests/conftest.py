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
"""Shared test fixtures for eulerflow.

This module provides pytest fixtures for the algebra and flow tests:
- ctx5 / params5: p=5, N=3, a=(0,1,2), the CLI defaults
- params3: p=3, N=2, a=(0,1,2), which has no admissible level
- flow5 / flow3: constructed flows (session scoped, construction is the slow part)
- rng: a seeded random.Random
- test_env: EULERFLOW_* variables with safe test defaults

Usage:
    pytest tests/
    pytest tests/test_arithmetic_flow.py -v
    pytest -m "not slow"
"""

import os
import random
from unittest.mock import patch

import pytest

from eulerflow.algebra.padic import PAdicContext
from eulerflow.config import get_settings
from eulerflow.logging import clear_context
from eulerflow.metrics import disable_metrics_collector
from eulerflow.services.arithmetic_flow import build_flow, sample_admissible_c
from eulerflow.services.geometry import SystemParams


@pytest.fixture(scope="session")
def ctx5():
    return PAdicContext(5, 3)


@pytest.fixture(scope="session")
def params5(ctx5):
    return SystemParams.from_residues(ctx5, (0, 1, 2))


@pytest.fixture(scope="session")
def params5_n2():
    return SystemParams.from_residues(PAdicContext(5, 2), (0, 1, 2))


@pytest.fixture(scope="session")
def params3():
    return SystemParams.from_residues(PAdicContext(3, 2), (0, 1, 2))


@pytest.fixture(scope="session")
def flow5(params5):
    """The constructed flow for the default configuration."""
    return build_flow(params5)


@pytest.fixture(scope="session")
def flow5_n2(params5_n2):
    return build_flow(params5_n2)


@pytest.fixture(scope="session")
def flow3(params3):
    return build_flow(params3)


@pytest.fixture(scope="session")
def specs5(params5):
    """Ten admissible Teichmüller levels for p=5."""
    return sample_admissible_c(params5, 10)


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def test_env(tmp_path):
    """EULERFLOW_* environment for CLI and settings tests.

    Usage:
        def test_example(test_env):
            with patch.dict(os.environ, test_env, clear=True):
                ...
    """
    return {
        "EULERFLOW_OUTPUT_DIR": str(tmp_path),
        "EULERFLOW_LOG_LEVEL": "WARNING",
        "EULERFLOW_SPEC_SAMPLES": "2",
        "EULERFLOW_LIE_TRIALS": "2",
        "EULERFLOW_CURVE_TRIALS": "5",
        "EULERFLOW_ENABLE_METRICS": "false",
    }


@pytest.fixture
def isolated_env(test_env):
    """Patch the environment and reset cached settings around a test."""
    get_settings.cache_clear()
    with patch.dict(os.environ, test_env, clear=True):
        yield test_env
    get_settings.cache_clear()


@pytest.fixture(autouse=True)
def reset_globals():
    """Clear logging context and the metrics singleton between tests."""
    yield
    clear_context()
    disable_metrics_collector()
