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
"""Tests for settings loading and per-run configuration validation."""

import os
from pathlib import Path
from unittest.mock import patch

import pytest
from pydantic import ValidationError

from eulerflow.config import RunConfig, Settings, get_settings, parse_coefficients


def test_settings_defaults():
    """Test that settings load with default values."""
    get_settings.cache_clear()

    with patch.dict(os.environ, {}, clear=True):
        settings = Settings(_env_file=None)

        assert settings.prime == 5
        assert settings.precision == 3
        assert settings.coefficients == "0,1,2"
        assert settings.lift_mode == "exact"
        assert settings.spec_samples == 10
        assert settings.rng_seed == 0
        assert settings.max_concurrent_checks == 4
        assert settings.include_timings is False
        assert settings.enable_metrics is False


def test_settings_custom_values():
    """Test that EULERFLOW_* variables override defaults."""
    test_env = {
        "EULERFLOW_PRIME": "7",
        "EULERFLOW_PRECISION": "4",
        "EULERFLOW_COEFFICIENTS": "1,2,4",
        "EULERFLOW_LIFT_MODE": "Teichmuller",
        "EULERFLOW_RNG_SEED": "42",
        "EULERFLOW_LOG_LEVEL": "debug",
    }

    with patch.dict(os.environ, test_env, clear=True):
        settings = Settings(_env_file=None)

        assert settings.prime == 7
        assert settings.precision == 4
        assert settings.coefficients == "1,2,4"
        assert settings.lift_mode == "teichmuller"
        assert settings.rng_seed == 42
        assert settings.log_level == "DEBUG"


def test_settings_rejects_bad_values():
    with pytest.raises(ValidationError, match="log_level must be one of"):
        Settings(_env_file=None, log_level="LOUD")
    with pytest.raises(ValidationError, match="lift_mode must be one of"):
        Settings(_env_file=None, lift_mode="random")
    with pytest.raises(ValidationError, match="expected three coefficients"):
        Settings(_env_file=None, coefficients="1,2")
    with pytest.raises(ValidationError, match="greater than or equal to 1"):
        Settings(_env_file=None, max_concurrent_checks=0)


def test_get_settings_wraps_errors():
    """Test that an invalid environment surfaces as a configuration error."""
    get_settings.cache_clear()
    with patch.dict(os.environ, {"EULERFLOW_LIFT_MODE": "sideways"}, clear=True):
        with pytest.raises(ValueError, match="Configuration error"):
            get_settings()
    get_settings.cache_clear()


def test_parse_coefficients():
    assert parse_coefficients("0, 1, 2") == (0, 1, 2)
    assert parse_coefficients([3, 4, 5]) == (3, 4, 5)
    with pytest.raises(ValueError, match="must be integers"):
        parse_coefficients("a,b,c")


def test_run_config_rejects_composite_prime():
    with pytest.raises(ValidationError, match="9 is not prime"):
        RunConfig(prime=9)


def test_run_config_rejects_even_prime():
    with pytest.raises(ValidationError, match="p must be odd"):
        RunConfig(prime=2, coefficients=(0, 1, 3))


def test_run_config_rejects_congruent_coefficients():
    with pytest.raises(ValidationError, match="a_i not distinct mod p"):
        RunConfig(prime=5, coefficients="0,5,2")


def test_run_config_rejects_low_precision():
    with pytest.raises(ValidationError, match="greater than or equal to 2"):
        RunConfig(prime=5, precision=1)


def test_run_config_from_settings_ignores_none():
    """Test that None overrides keep the settings value."""
    settings = Settings(_env_file=None, prime=7, coefficients="1,2,4")
    config = RunConfig.from_settings(settings, prime=None, precision=2, seed=9, output_path=Path("out"))

    assert config.prime == 7
    assert config.precision == 2
    assert config.coefficients == (1, 2, 4)
    assert config.seed == 9
    assert config.output_path == Path("out")
    assert config.fingerprint() == "p7-N2-a1,2,4-exact-s9"


def test_run_config_system_params_teichmuller():
    config = RunConfig(prime=5, precision=2, coefficients=(2, 3, 4), lift_mode="teichmuller")
    params = config.system_params()

    assert params.context.N == 2
    assert params.a1.residue == 7
    assert all(a ** 5 == a for a in params.a)


def test_run_config_system_params_exact():
    config = RunConfig(prime=5, precision=3, coefficients=(0, 1, 2))
    params = config.system_params()
    assert [a.residue for a in params.a] == [0, 1, 2]
