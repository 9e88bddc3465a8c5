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
"""Verification orchestrator for arithmetic Euler flows.

The orchestrator runs the checks of a ``verify`` call in a fixed canonical
order:
1. flow_consistency
2. prime_integrals
3. linearization (skipped when F_p^2 has no admissible level)
4. linearization_defect
5. lift_independence (precision 3 and above)
6. classical_identities
7. duality
8. lie_identity
9. torsor_forward
10. torsor_difference
11. point_counts
12. hasse_homogeneity

All random inputs are drawn from the run's seeded generator before any
check is dispatched, so the report does not depend on scheduling. Checks run
on a bounded worker pool; a failing check is reported, an exception inside a
check becomes status "error".
"""

import asyncio
import random
import time
from dataclasses import dataclass
from typing import Callable, Optional

from eulerflow import __version__
from eulerflow.concurrency import CheckPool
from eulerflow.logging import PhaseTimer, StructuredLogger, check_scope
from eulerflow.metrics import MetricsTimer, get_metrics_collector
from eulerflow.models import CheckResult, HasseReport, VerificationReport
from eulerflow.services.arithmetic_flow import (
    FlowDescriptor,
    admissible_or_empty,
    check_flow_consistency,
    linearization_defect,
    lift_independence_check,
    perturbation_library,
    prime_integral_residuals,
    verify_linearization,
    verify_prime_integrals,
)
from eulerflow.services.classical_flow import (
    ClassicalDerivation,
    classical_delta,
    duality_check,
    flow_difference,
    lie_identity_check,
    random_lie_candidates,
    torsor_library,
    torsor_shift,
)
from eulerflow.services.geometry import (
    IdentityCheck,
    LevelSpec,
    SystemParams,
    iter_level_residues,
    make_H,
    make_N,
)
from eulerflow.services.hasse import (
    check_series_identity,
    hasse_homogeneity_check,
    point_count_suite,
    supersingular_levels,
)

logger = StructuredLogger(__name__)

CheckFunc = Callable[[], CheckResult]


@dataclass(frozen=True)
class VerifyOptions:
    """Knobs of a verification run.

    Attributes:
        spec_samples: Admissible levels sampled per level-set check
        seed: Seed of the run's single random generator
        lie_trials: Random K for the Lie-derivative identity
        curve_trials: Random cubics and quartics for the point-count suite
        max_concurrent: Worker threads
        include_timings: Record elapsed_ms per check
    """
    spec_samples: int = 10
    seed: int = 0
    lie_trials: int = 20
    curve_trials: int = 100
    max_concurrent: int = 4
    include_timings: bool = False


# -- result helpers -----------------------------------------------------------------

def _from_identity(name: str, checks: list[IdentityCheck], **data) -> CheckResult:
    for check in checks:
        failing = check.failing()
        if failing:
            key, value = next(iter(failing.items()))
            return CheckResult(
                name=name,
                status="failed",
                detail=f"{check.name}: residual {key} is nonzero",
                cleared_difference=value,
                data=data,
            )
    return CheckResult(name=name, status="passed", data=data)


def _skipped(name: str, reason: str) -> CheckResult:
    return CheckResult(name=name, status="skipped", detail=reason)


def _levels_label(specs: list[LevelSpec]) -> list[list[int]]:
    return [list(spec.residues) for spec in specs]


def duality_levels(params: SystemParams, count: int) -> list[LevelSpec]:
    """Teichmüller levels with N(c) nonzero mod p, in lexicographic order."""
    n_bar = make_N(params.reduce_mod_p())
    found: list[LevelSpec] = []
    for r1, r2 in iter_level_residues(params.p):
        if n_bar.evaluate({"z1": r1, "z2": r2}):
            found.append(LevelSpec.teichmuller(params.context, r1, r2))
            if len(found) >= count:
                break
    return found


# -- the checks ---------------------------------------------------------------------

class FlowVerifier:
    """Builds the canonical list of checks for one flow.

    Example:
        >>> verifier = FlowVerifier(flow, VerifyOptions(seed=7))
        >>> report = verifier.run()
    """

    def __init__(self, flow: FlowDescriptor, options: VerifyOptions):
        self.flow = flow
        self.options = options
        self.params = flow.params
        self.rng = random.Random(options.seed)
        self.no_level_reason = f"no admissible level sets over F_{self.params.p}"
        self.specs = list(admissible_or_empty(self.params, options.spec_samples))
        self.duality_specs = duality_levels(self.params, options.spec_samples)

    def check_flow_consistency(self) -> CheckResult:
        return _from_identity("flow_consistency", [check_flow_consistency(self.flow)], roots=self.flow.has_roots)

    def check_prime_integrals(self) -> CheckResult:
        for name, residual in prime_integral_residuals(self.flow).items():
            if not residual.is_zero():
                return CheckResult(
                    name="prime_integrals",
                    status="failed",
                    detail=f"delta({name}) is nonzero",
                    cleared_difference=str(residual),
                )
        return CheckResult(name="prime_integrals", status="passed")

    def check_linearization(self) -> CheckResult:
        if not self.specs:
            return _skipped("linearization", self.no_level_reason)
        checks = [verify_linearization(self.flow, spec) for spec in self.specs]
        return _from_identity("linearization", checks, levels=_levels_label(self.specs))

    def check_linearization_defect(self) -> CheckResult:
        if not self.specs:
            return _skipped("linearization_defect", self.no_level_reason)
        defects = [linearization_defect(self.flow, spec) for spec in self.specs]
        data = {"defects": [d.to_dict() for d in defects]}
        bad = [d for d in defects if not d.divisible_by_p]
        if bad:
            return CheckResult(
                name="linearization_defect",
                status="failed",
                detail=f"residual not divisible by p at level {list(bad[0].level)}",
                data=data,
            )
        return CheckResult(name="linearization_defect", status="passed", data=data)

    def lift_independence(self) -> CheckFunc:
        perturbations = perturbation_library(self.flow, self.rng)

        def run() -> CheckResult:
            if self.flow.precision < 3:
                return _skipped("lift_independence", "needs precision at least 3")
            checks = [lift_independence_check(self.flow, f) for f in perturbations]
            return _from_identity("lift_independence", checks, perturbations=len(perturbations))
        return run

    def check_classical_identities(self) -> CheckResult:
        d = ClassicalDerivation(self.params)
        h1, h2 = make_H(self.params)
        for name, h in (("H1", h1), ("H2", h2)):
            image = classical_delta(d, h)
            if not image.is_zero():
                return CheckResult(
                    name="classical_identities",
                    status="failed",
                    detail=f"classical delta({name}) is nonzero",
                    cleared_difference=str(image),
                )
        return CheckResult(name="classical_identities", status="passed")

    def check_duality(self) -> CheckResult:
        if not self.duality_specs:
            return _skipped("duality", f"no level with N(c) nonzero over F_{self.params.p}")
        checks = [duality_check(self.params, spec) for spec in self.duality_specs]
        return _from_identity("duality", checks, levels=_levels_label(self.duality_specs))

    def lie_identity(self) -> CheckFunc:
        candidates = random_lie_candidates(self.params, self.rng, self.options.lie_trials)

        def run() -> CheckResult:
            if not self.duality_specs:
                return _skipped("lie_identity", f"no level with N(c) nonzero over F_{self.params.p}")
            checks = [
                lie_identity_check(k, spec, self.params)
                for k in candidates
                for spec in self.duality_specs
            ]
            return _from_identity("lie_identity", checks, trials=len(candidates))
        return run

    def _verify_shifted(self, shifted: FlowDescriptor) -> Optional[str]:
        if not verify_prime_integrals(shifted):
            return "prime integrals"
        for spec in self.specs:
            if not verify_linearization(shifted, spec):
                return f"linearization at level {list(spec.residues)}"
        return None

    def torsor_forward(self) -> CheckFunc:
        library = torsor_library(self.params, self.rng)

        def run() -> CheckResult:
            for name, k in library.items():
                problem = self._verify_shifted(torsor_shift(self.flow, k))
                if problem:
                    return CheckResult(
                        name="torsor_forward",
                        status="failed",
                        detail=f"flow shifted by {name} fails {problem}",
                    )
            return CheckResult(name="torsor_forward", status="passed", data={"shifts": list(library)})
        return run

    def torsor_difference(self) -> CheckFunc:
        library = torsor_library(self.params, self.rng)

        def run() -> CheckResult:
            shifted = {name: torsor_shift(self.flow, library[name]) for name in ("H1H2", "H1", "f^p")}
            pairs = [
                ("base", "H1H2", self.flow, shifted["H1H2"]),
                ("H1", "f^p", shifted["H1"], shifted["f^p"]),
            ]
            closed: dict[str, bool] = {}
            for left, right, flow_a, flow_b in pairs:
                candidate = flow_difference(flow_b, flow_a, self.specs)
                label = f"{right}-{left}"
                if not candidate.prime_integral:
                    return CheckResult(
                        name="torsor_difference",
                        status="failed",
                        detail=f"difference {label} is not a prime integral",
                        cleared_difference=str(candidate.value),
                    )
                closed[label] = candidate.closed
            recovered = flow_difference(shifted["H1H2"], self.flow).value
            if recovered != library["H1H2"]:
                return CheckResult(
                    name="torsor_difference",
                    status="failed",
                    detail="difference with the H1H2 shift does not recover H1H2",
                    cleared_difference=str(recovered - library["H1H2"]),
                )
            return CheckResult(
                name="torsor_difference",
                status="passed",
                detail="finite-sample check over F_p",
                data={"closed_on_levels": closed},
            )
        return run

    def point_counts(self) -> CheckFunc:
        suite_rng = random.Random(self.rng.getrandbits(64))

        def run() -> CheckResult:
            suite = point_count_suite(self.params.p, self.options.curve_trials, suite_rng)
            data = {
                "trials": suite.trials,
                "cubic_holds": suite.cubic_holds,
                "quartic_holds": suite.quartic_holds,
            }
            if not suite.holds:
                return CheckResult(
                    name="point_counts",
                    status="failed",
                    detail=f"{len(suite.failures)} congruences failed",
                    data=data,
                )
            return CheckResult(name="point_counts", status="passed", data=data)
        return run

    def check_hasse_homogeneity(self) -> CheckResult:
        report = hasse_homogeneity_check(self.params)
        series = check_series_identity(self.params)
        data = {
            "expected_degree": report.expected_degree,
            "homogeneous": report.homogeneous,
            "nonzero_mod_p": report.nonzero_mod_p,
            "series_identity": series,
        }
        if report.holds and series:
            return CheckResult(name="hasse_homogeneity", status="passed", data=data)
        return CheckResult(
            name="hasse_homogeneity", status="failed", detail=f"A = {report.invariant}", data=data
        )

    def canonical_checks(self) -> list[tuple[str, CheckFunc]]:
        """(name, callable) in report order; random inputs are drawn here."""
        return [
            ("flow_consistency", self.check_flow_consistency),
            ("prime_integrals", self.check_prime_integrals),
            ("linearization", self.check_linearization),
            ("linearization_defect", self.check_linearization_defect),
            ("lift_independence", self.lift_independence()),
            ("classical_identities", self.check_classical_identities),
            ("duality", self.check_duality),
            ("lie_identity", self.lie_identity()),
            ("torsor_forward", self.torsor_forward()),
            ("torsor_difference", self.torsor_difference()),
            ("point_counts", self.point_counts()),
            ("hasse_homogeneity", self.check_hasse_homogeneity),
        ]

    def _guarded(self, name: str, func: CheckFunc) -> CheckFunc:
        include_timings = self.options.include_timings

        def run() -> CheckResult:
            start = time.perf_counter()
            with check_scope(name):
                try:
                    with PhaseTimer(f"check:{name}", logger), MetricsTimer(f"check.{name}"):
                        result = func()
                except Exception as e:
                    logger.error("Check raised", error_type=type(e).__name__, exc_info=True)
                    result = CheckResult(name=name, status="error", detail=f"{type(e).__name__}: {e}")
            if include_timings:
                result.elapsed_ms = round((time.perf_counter() - start) * 1000, 3)
            collector = get_metrics_collector()
            if collector:
                collector.record_check(name, result.status)
            return result
        return run

    async def run_async(self) -> VerificationReport:
        checks = [self._guarded(name, func) for name, func in self.canonical_checks()]
        pool = CheckPool(self.options.max_concurrent)
        results = await pool.run_all(checks)
        return self._report(results)

    def _report(self, results: list[CheckResult]) -> VerificationReport:
        report = VerificationReport(
            package_version=__version__,
            seed=self.options.seed,
            p=self.params.p,
            N=self.params.context.N,
            a=[str(a) for a in self.params.a],
            spec_samples=self.options.spec_samples,
            checks=results,
        )
        logger.info("Verification finished", overall=report.overall, **report.counts())
        return report

    def run(self) -> VerificationReport:
        return asyncio.run(self.run_async())


def verify_flow(flow: FlowDescriptor, options: Optional[VerifyOptions] = None) -> VerificationReport:
    """Run every check on ``flow`` and assemble the report."""
    return FlowVerifier(flow, options or VerifyOptions()).run()


def run_hasse(params: SystemParams, trials: int, seed: int) -> HasseReport:
    """Point-count suite, homogeneity of A and the R/S series identity."""
    rng = random.Random(seed)
    suite = point_count_suite(params.p, trials, rng)
    return HasseReport(
        p=params.p,
        seed=seed,
        suite=suite,
        homogeneity=hasse_homogeneity_check(params),
        series_identity=check_series_identity(params),
        supersingular_levels=supersingular_levels(params),
    )
