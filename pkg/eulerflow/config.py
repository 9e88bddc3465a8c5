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
"""Configuration for eulerflow runs.

Settings are loaded from EULERFLOW_* environment variables (and an optional
.env file) and validated up front so that a bad prime or coefficient triple
fails before any algebra runs. RunConfig is the per-invocation view after CLI
overrides are merged in.
"""

from functools import lru_cache
from pathlib import Path
from typing import Any, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from sympy import isprime

from eulerflow.algebra.padic import PAdicContext
from eulerflow.services.geometry import SystemParams

VALID_LOG_LEVELS = {'DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'}
VALID_LIFT_MODES = {'exact', 'teichmuller'}


def parse_coefficients(value: Any) -> Tuple[int, int, int]:
    """Parse "a1,a2,a3" (or a sequence) into three integers."""
    if isinstance(value, str):
        parts = [part.strip() for part in value.split(",") if part.strip()]
    else:
        parts = list(value)
    if len(parts) != 3:
        raise ValueError(f"expected three coefficients a1,a2,a3, got: {value}")
    try:
        a1, a2, a3 = (int(part) for part in parts)
    except (TypeError, ValueError):
        raise ValueError(f"coefficients must be integers, got: {value}") from None
    return a1, a2, a3


class Settings(BaseSettings):
    """Defaults for every CLI knob, overridable via environment variables.

    All variables use the EULERFLOW_ prefix, e.g. EULERFLOW_PRIME=7.
    """

    # Algebra
    prime: int = Field(default=5, description="Odd prime p")
    precision: int = Field(default=3, ge=1, le=12, description="Precision N (values mod p^N)")
    coefficients: str = Field(
        default="0,1,2",
        description="Comma-separated a1,a2,a3",
        examples=["0,1,2", "1,2,4"]
    )
    lift_mode: str = Field(
        default="exact",
        description="How a_i are lifted to Z/p^N: exact integers or teichmuller representatives"
    )

    # Verification
    spec_samples: int = Field(default=10, ge=1, le=1000, description="Admissible levels sampled per check")
    rng_seed: int = Field(default=0, description="Seed of the single random generator used by a run")
    lie_trials: int = Field(default=20, ge=0, le=1000, description="Random K for the Lie-derivative suite")
    curve_trials: int = Field(default=100, ge=0, le=10000, description="Random cubics and quartics per point-count suite")
    extract_roots: bool = Field(default=False, description="Extract Phi_1, Phi_2 by principal square roots during construct")
    max_concurrent_checks: int = Field(default=4, ge=1, le=64, description="Worker threads used by verify")
    include_timings: bool = Field(default=False, description="Record elapsed_ms per check (makes reports non-deterministic)")

    # Output
    output_dir: str = Field(default=".", description="Directory for flow files, reports and CSV output")

    # Logging and metrics
    log_level: str = Field(default="INFO", description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)")
    log_json_format: bool = Field(default=False, description="Enable JSON structured logging output")
    enable_metrics: bool = Field(default=False, description="Collect in-process metrics and print them after verify")

    @field_validator('log_level')
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        v_upper = v.upper()
        if v_upper not in VALID_LOG_LEVELS:
            raise ValueError(f"log_level must be one of {VALID_LOG_LEVELS}, got: {v}")
        return v_upper

    @field_validator('lift_mode')
    @classmethod
    def validate_lift_mode(cls, v: str) -> str:
        v_lower = v.lower().strip()
        if v_lower not in VALID_LIFT_MODES:
            raise ValueError(f"lift_mode must be one of {VALID_LIFT_MODES}, got: {v}")
        return v_lower

    @field_validator('coefficients')
    @classmethod
    def validate_coefficients(cls, v: str) -> str:
        parse_coefficients(v)
        return v

    model_config = SettingsConfigDict(
        env_prefix="EULERFLOW_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )


@lru_cache
def get_settings() -> Settings:
    """Get the settings instance with LRU caching.

    The cache can be cleared for testing using get_settings.cache_clear().

    Raises:
        ValueError: If an environment variable holds an invalid value
    """
    try:
        return Settings()
    except Exception as e:
        raise ValueError(
            f"Configuration error: {e}. "
            "Check the EULERFLOW_* environment variables."
        ) from e


class RunConfig(BaseModel):
    """Validated configuration of a single CLI invocation.

    Attributes:
        prime: Odd prime p
        precision: N; flow work needs N >= 2 (one delta application loses a digit)
        coefficients: a1, a2, a3 as integers
        lift_mode: exact or teichmuller
        spec_samples: Number of admissible levels to sample
        seed: Seed of the run's random generator
        output_path: Directory for written artifacts
    """
    prime: int
    precision: int = Field(default=3, ge=2)
    coefficients: Tuple[int, int, int] = (0, 1, 2)
    lift_mode: str = "exact"
    spec_samples: int = Field(default=10, ge=1)
    seed: int = 0
    output_path: Path = Path(".")

    @field_validator('prime')
    @classmethod
    def validate_prime(cls, v: int) -> int:
        if not isprime(v):
            raise ValueError(f"{v} is not prime")
        if v == 2:
            raise ValueError("p must be odd")
        return v

    @field_validator('lift_mode')
    @classmethod
    def validate_lift_mode(cls, v: str) -> str:
        v_lower = v.lower().strip()
        if v_lower not in VALID_LIFT_MODES:
            raise ValueError(f"lift_mode must be one of {VALID_LIFT_MODES}, got: {v}")
        return v_lower

    @field_validator('coefficients', mode='before')
    @classmethod
    def coerce_coefficients(cls, v: Any) -> Tuple[int, int, int]:
        return parse_coefficients(v)

    @model_validator(mode='after')
    def validate_distinct(self) -> "RunConfig":
        residues = [a % self.prime for a in self.coefficients]
        if len(set(residues)) != 3:
            raise ValueError(f"a_i not distinct mod p: {self.coefficients} mod {self.prime}")
        return self

    @classmethod
    def from_settings(cls, settings: Settings, **overrides: Optional[Any]) -> "RunConfig":
        """Merge CLI overrides (None means "not given") onto settings."""
        values: dict[str, Any] = {
            "prime": settings.prime,
            "precision": settings.precision,
            "coefficients": settings.coefficients,
            "lift_mode": settings.lift_mode,
            "spec_samples": settings.spec_samples,
            "seed": settings.rng_seed,
            "output_path": Path(settings.output_dir),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    @property
    def context(self) -> PAdicContext:
        return PAdicContext(self.prime, self.precision)

    def system_params(self) -> SystemParams:
        """SystemParams over Z/p^N, Teichmüller-lifted when lift_mode says so."""
        return SystemParams.from_residues(
            self.context, self.coefficients, use_teichmuller=self.lift_mode == "teichmuller"
        )

    def fingerprint(self) -> str:
        """Short run identifier used as the logging run_id."""
        a = ",".join(str(v) for v in self.coefficients)
        return f"p{self.prime}-N{self.precision}-a{a}-{self.lift_mode}-s{self.seed}"
