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
"""Pydantic models for persisted flows and verification reports.

This module defines the JSON contracts of the CLI:
- PolynomialDocument / LocalizedDocument / FlowDocument: the versioned flow file
- CheckResult / VerificationReport: the output of ``verify``
- PointCountReport and friends: the output of ``hasse``

Coefficients are serialized as decimal strings of residues so that values
beyond 2^53 survive any JSON reader.
"""

from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Schema identifiers; bump on incompatible changes
FLOW_SCHEMA = "eulerflow.flow/v1"
REPORT_SCHEMA = "eulerflow.report/v1"

CheckStatus = Literal["passed", "failed", "skipped", "error"]


class PolynomialDocument(BaseModel):
    """Sparse polynomial in JSON form.

    Attributes:
        variables: Ordered variable names
        precision: N, coefficients are residues mod p^N
        terms: [exponent vector, coefficient] pairs sorted by exponent vector
    """
    variables: List[str] = Field(..., description="Ordered variable names", examples=[["x1", "x2", "x3"]])
    precision: int = Field(..., ge=1, description="Coefficients are residues mod p^precision")
    terms: List[Tuple[List[int], str]] = Field(
        default_factory=list,
        description="Pairs of exponent vector and decimal residue",
        examples=[[[[2, 0, 0], "1"], [[0, 0, 2], "7"]]],
    )

    @model_validator(mode="after")
    def validate_terms(self) -> "PolynomialDocument":
        n = len(self.variables)
        for exps, coeff in self.terms:
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} does not match variables {self.variables}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            if not coeff.isdigit():
                raise ValueError(f"coefficient must be a decimal residue, got: {coeff}")
        return self


class LocalizedDocument(BaseModel):
    """Numerator over A(H)^eA N(H)^eN x1^e1 x2^e2."""
    numerator: PolynomialDocument
    denominator: List[int] = Field(
        default_factory=lambda: [0, 0, 0, 0],
        description="Exponents (eA, eN, e1, e2)",
    )

    @field_validator("denominator")
    @classmethod
    def validate_denominator(cls, v: List[int]) -> List[int]:
        if len(v) != 4 or any(e < 0 for e in v):
            raise ValueError(f"denominator must be four non-negative exponents, got: {v}")
        return v


class ManifestEntry(BaseModel):
    """One verification run recorded against a flow file."""
    check: str
    status: CheckStatus
    timestamp: str = Field(..., description="UTC ISO 8601 timestamp")


class FlowDocument(BaseModel):
    """Persisted arithmetic Euler flow.

    The flow is determined by delta3; the remaining fields are stored so that
    verification never depends on re-running the construction.
    """
    model_config = ConfigDict(populate_by_name=True)

    schema_version: Literal["eulerflow.flow/v1"] = Field(FLOW_SCHEMA, alias="schema")
    p: int = Field(..., ge=3)
    N: int = Field(..., ge=1)
    a: List[str] = Field(..., min_length=3, max_length=3, description="a1, a2, a3 as residues")
    lift_mode: Literal["exact", "teichmuller"] = "exact"
    delta3: LocalizedDocument
    phi3: LocalizedDocument
    phi1_sq: LocalizedDocument
    phi2_sq: LocalizedDocument
    phi1: Optional[LocalizedDocument] = None
    phi2: Optional[LocalizedDocument] = None
    construction: Dict[str, Any] = Field(
        default_factory=dict,
        description="Construction log: degrees, denominators, term counts",
    )
    manifest: List[ManifestEntry] = Field(default_factory=list)

    @field_validator("a")
    @classmethod
    def validate_a(cls, v: List[str]) -> List[str]:
        for value in v:
            if not value.isdigit():
                raise ValueError(f"a_i must be decimal residues, got: {value}")
        return v

    @model_validator(mode="after")
    def validate_roots(self) -> "FlowDocument":
        if (self.phi1 is None) != (self.phi2 is None):
            raise ValueError("phi1 and phi2 must be present together")
        return self


class CheckResult(BaseModel):
    """Outcome of one verification check.

    Attributes:
        name: Canonical check name
        status: passed, failed, skipped or error
        detail: Human-readable explanation (skip reason, failure summary)
        cleared_difference: For congruence checks, the offending cleared difference
        data: Extra structured results (counts, defect statistics)
        elapsed_ms: Wall time, present only when timings are requested
    """
    name: str
    status: CheckStatus
    detail: Optional[str] = None
    cleared_difference: Optional[str] = None
    data: Dict[str, Any] = Field(default_factory=dict)
    elapsed_ms: Optional[float] = None


class VerificationReport(BaseModel):
    """Deterministic report of a ``verify`` run."""
    schema_version: str = Field(REPORT_SCHEMA, alias="schema")
    package_version: str
    seed: int
    p: int
    N: int
    a: List[str]
    spec_samples: int
    checks: List[CheckResult] = Field(default_factory=list)
    overall: Literal["passed", "failed"] = "passed"

    model_config = ConfigDict(populate_by_name=True)

    @model_validator(mode="after")
    def compute_overall(self) -> "VerificationReport":
        failed = any(c.status in ("failed", "error") for c in self.checks)
        self.overall = "failed" if failed else "passed"
        return self

    def counts(self) -> Dict[str, int]:
        out = {"passed": 0, "failed": 0, "skipped": 0, "error": 0}
        for check in self.checks:
            out[check.status] += 1
        return out


class PointCountReport(BaseModel):
    """Hasse invariant against brute-force point counts for y^2 = f(x).

    Every entry of ``deltas`` must be 0 (congruences mod p).
    """
    p: int
    poly: List[int] = Field(..., description="Ascending coefficients over F_p")
    degree: int
    A: int = Field(..., description="Hasse invariant as a residue mod p")
    N_p: int = Field(..., description="Affine point count")
    projective_count: Optional[int] = None
    squarefree: bool
    deltas: Dict[str, int]

    @property
    def holds(self) -> bool:
        return all(v == 0 for v in self.deltas.values())


class PointCountSuiteReport(BaseModel):
    """Randomized point-count suite over one prime."""
    p: int
    trials: int
    cubic_holds: int
    quartic_holds: int
    failures: List[PointCountReport] = Field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.cubic_holds == self.trials and self.quartic_holds == self.trials


class HasseHomogeneityReport(BaseModel):
    """Homogeneity and nonvanishing of A_{p-1}(F) for one parameter triple."""
    p: int
    a: List[str]
    expected_degree: int
    homogeneous: bool
    nonzero_mod_p: bool
    quartic_weighted: bool
    invariant: str

    @property
    def holds(self) -> bool:
        return self.homogeneous and self.nonzero_mod_p and self.quartic_weighted


class HasseReport(BaseModel):
    """Output of the ``hasse`` command."""
    schema_version: str = Field(REPORT_SCHEMA, alias="schema")
    p: int
    seed: int
    suite: PointCountSuiteReport
    homogeneity: HasseHomogeneityReport
    series_identity: bool
    supersingular_levels: List[Tuple[int, int]] = Field(default_factory=list)

    model_config = ConfigDict(populate_by_name=True)

    @property
    def holds(self) -> bool:
        return self.suite.holds and self.homogeneity.holds and self.series_identity
