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
"""Tests for the verification orchestrator."""

from unittest.mock import patch

import pytest

from eulerflow.metrics import init_metrics_collector
from eulerflow.services.arithmetic_flow import tamper
from eulerflow.services.orchestrator import (
    FlowVerifier,
    VerifyOptions,
    duality_levels,
    run_hasse,
    verify_flow,
)

CANONICAL_ORDER = [
    "flow_consistency",
    "prime_integrals",
    "linearization",
    "linearization_defect",
    "lift_independence",
    "classical_identities",
    "duality",
    "lie_identity",
    "torsor_forward",
    "torsor_difference",
    "point_counts",
    "hasse_homogeneity",
]

SMALL = VerifyOptions(spec_samples=2, seed=3, lie_trials=2, curve_trials=5, max_concurrent=2)


@pytest.fixture(scope="module")
def report5(flow5):
    """Report for the default flow with small sampling knobs."""
    return verify_flow(flow5, SMALL)


def _by_name(report):
    return {check.name: check for check in report.checks}


def test_report_order_and_verdict(report5):
    assert [c.name for c in report5.checks] == CANONICAL_ORDER
    assert report5.overall == "passed", [(c.name, c.status, c.detail) for c in report5.checks]
    assert report5.p == 5
    assert report5.N == 3
    assert report5.a == ["0", "1", "2"]
    assert report5.seed == 3


def test_every_check_runs_at_precision_three(report5):
    """Test that p=5, N=3 has admissible levels, so nothing is skipped."""
    assert report5.counts() == {"passed": 12, "failed": 0, "skipped": 0, "error": 0}
    checks = _by_name(report5)
    assert len(checks["linearization"].data["levels"]) == 2
    assert checks["torsor_difference"].detail == "finite-sample check over F_p"
    assert all(c.elapsed_ms is None for c in report5.checks)


def test_skips_without_admissible_levels(flow3):
    """Test that p=3, a=(0,1,2) skips the level checks but still passes."""
    report = verify_flow(flow3, SMALL)
    checks = _by_name(report)

    assert checks["linearization"].status == "skipped"
    assert checks["linearization"].detail == "no admissible level sets over F_3"
    assert checks["linearization_defect"].status == "skipped"
    assert checks["lift_independence"].status == "skipped"
    assert checks["lift_independence"].detail == "needs precision at least 3"
    assert checks["duality"].status == "passed"
    assert report.overall == "passed"


def test_tampered_flow_fails(flow3):
    report = verify_flow(tamper(flow3, "phi1_sq"), SMALL)
    checks = _by_name(report)

    assert report.overall == "failed"
    assert checks["prime_integrals"].status == "failed"
    assert checks["prime_integrals"].cleared_difference


def test_same_seed_same_report(flow3):
    """Test that reports are reproducible for a fixed seed and worker count changes."""
    first = verify_flow(flow3, SMALL)
    second = verify_flow(flow3, VerifyOptions(spec_samples=2, seed=3, lie_trials=2, curve_trials=5, max_concurrent=1))
    assert first.model_dump() == second.model_dump()


def test_timings_are_optional(flow3):
    options = VerifyOptions(spec_samples=1, seed=0, lie_trials=1, curve_trials=2, include_timings=True)
    report = verify_flow(flow3, options)
    assert all(c.elapsed_ms is not None and c.elapsed_ms >= 0 for c in report.checks)


def test_exception_becomes_error_status(flow3):
    with patch(
        "eulerflow.services.orchestrator.hasse_homogeneity_check",
        side_effect=RuntimeError("boom"),
    ):
        report = verify_flow(flow3, SMALL)

    check = _by_name(report)["hasse_homogeneity"]
    assert check.status == "error"
    assert check.detail == "RuntimeError: boom"
    assert report.overall == "failed"


def test_metrics_record_check_outcomes(flow3):
    collector = init_metrics_collector()
    collector.reset()

    verify_flow(flow3, SMALL)

    metrics = collector.get_metrics()
    assert metrics["checks"]["by_name"]["linearization:skipped"] == 1
    assert metrics["checks"]["by_name"]["duality:passed"] == 1
    assert "check.duality" in metrics["latencies"]


def test_invalid_worker_count(flow3):
    with pytest.raises(ValueError):
        verify_flow(flow3, VerifyOptions(max_concurrent=0))


def test_duality_levels_skip_degenerate_fibers(params3):
    levels = duality_levels(params3, 10)
    assert [spec.residues for spec in levels] == [(1, 0), (2, 0)]


def test_verifier_draws_inputs_up_front(flow3):
    """Test that building the check list consumes the generator deterministically."""
    a = FlowVerifier(flow3, SMALL)
    b = FlowVerifier(flow3, SMALL)
    a.canonical_checks()
    b.canonical_checks()
    assert a.rng.random() == b.rng.random()


def test_run_hasse(params5, params3):
    report = run_hasse(params5, 10, 0)
    assert report.holds
    assert report.suite.trials == 10
    assert report.homogeneity.expected_degree == 2

    report3 = run_hasse(params3, 5, 1)
    assert report3.supersingular_levels == [(1, 0), (2, 0)]
