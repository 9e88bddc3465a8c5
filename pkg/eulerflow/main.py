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
"""Command-line entry point.

Commands:
- construct: build the arithmetic Euler flow and write it as JSON
- verify: run every check against a flow file and write a report
- hasse: point-count and homogeneity suites for the Hasse invariant
- demo: integrate the classical Euler top and write a CSV trajectory

Exit codes: 0 when everything passes, 1 when a check fails, 2 on
configuration or input errors.
"""

import json
from pathlib import Path
from typing import Annotated, NoReturn, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from eulerflow import __version__
from eulerflow.config import RunConfig, Settings, get_settings
from eulerflow.logging import StructuredLogger, configure_logging, set_run_id
from eulerflow.metrics import get_metrics_collector, init_metrics_collector
from eulerflow.models import VerificationReport
from eulerflow.services.arithmetic_flow import build_flow
from eulerflow.services.classical_flow import integrate_demo
from eulerflow.services.orchestrator import VerifyOptions, run_hasse, verify_flow
from eulerflow.storage import FlowStorageError, FlowStore

logger = StructuredLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2

STATUS_STYLES = {"passed": "green", "failed": "red", "skipped": "yellow", "error": "magenta"}

app = typer.Typer(
    name="eulerflow",
    help="Arithmetic Euler flows: construction and verification.",
    add_completion=False,
    no_args_is_help=True,
)
console = Console()
err_console = Console(stderr=True)


def _fail_config(message: str) -> NoReturn:
    err_console.print(f"[bold red]Configuration error:[/] {message}")
    raise typer.Exit(code=EXIT_CONFIG_ERROR)


def _first_error(e: ValidationError) -> str:
    error = e.errors()[0]
    location = ".".join(str(part) for part in error.get("loc", ()))
    message = str(error.get("msg", e))
    return f"{location}: {message}" if location else message


def _load_settings() -> Settings:
    try:
        settings = get_settings()
    except ValueError as e:
        _fail_config(str(e))
    configure_logging(settings.log_level, settings.log_json_format)
    return settings


def _run_config(settings: Settings, **overrides) -> RunConfig:
    try:
        config = RunConfig.from_settings(settings, **overrides)
    except ValidationError as e:
        _fail_config(_first_error(e))
    set_run_id(config.fingerprint())
    return config


def _write_json(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def _print_report(report: VerificationReport) -> None:
    table = Table(title=f"verify p={report.p} N={report.N} a=({', '.join(report.a)})")
    table.add_column("check")
    table.add_column("status")
    table.add_column("detail", overflow="fold")
    for check in report.checks:
        style = STATUS_STYLES[check.status]
        table.add_row(check.name, f"[{style}]{check.status}[/]", check.detail or "")
    console.print(table)
    for check in report.checks:
        if check.cleared_difference:
            console.print(f"[red]{check.name} cleared difference:[/] {check.cleared_difference}")
    console.print(f"overall: [{STATUS_STYLES[report.overall]}]{report.overall}[/]")


@app.command()
def construct(
    prime: Annotated[Optional[int], typer.Option("--prime", "-p", help="Odd prime p")] = None,
    precision: Annotated[Optional[int], typer.Option("--precision", "-N", help="Precision N >= 2")] = None,
    coefficients: Annotated[Optional[str], typer.Option("--a", help="a1,a2,a3")] = None,
    lift_mode: Annotated[Optional[str], typer.Option("--lift-mode", help="exact or teichmuller")] = None,
    extract_roots: Annotated[Optional[bool], typer.Option("--roots/--no-roots", help="Extract Phi1, Phi2")] = None,
    output: Annotated[Optional[Path], typer.Option("--output", "-o", help="Output directory")] = None,
    name: Annotated[str, typer.Option("--name", help="Flow file name")] = "flow.json",
) -> None:
    """Construct the arithmetic Euler flow and write it as JSON."""
    settings = _load_settings()
    config = _run_config(
        settings,
        prime=prime,
        precision=precision,
        coefficients=coefficients,
        lift_mode=lift_mode,
        output_path=output,
    )
    roots = settings.extract_roots if extract_roots is None else extract_roots
    flow = build_flow(config.system_params(), extract_roots=roots, lift_mode=config.lift_mode)
    path = FlowStore(config.output_path).save(flow, name)
    delta3 = flow.construction["delta3"]
    console.print(f"wrote {path}")
    console.print(
        f"Delta3: degree {delta3['degree']}, {delta3['terms']} terms, "
        f"denominator {delta3['denominator']}"
    )
    raise typer.Exit(code=EXIT_OK)


@app.command()
def verify(
    flow_file: Annotated[Optional[Path], typer.Argument(help="Flow JSON (default: <output>/flow.json)")] = None,
    spec_samples: Annotated[Optional[int], typer.Option("--specs", help="Admissible levels to sample")] = None,
    seed: Annotated[Optional[int], typer.Option("--seed", help="Random seed")] = None,
    lie_trials: Annotated[Optional[int], typer.Option("--lie-trials", help="Random K for the Lie identity")] = None,
    curve_trials: Annotated[Optional[int], typer.Option("--trials", help="Random curves per point-count suite")] = None,
    workers: Annotated[Optional[int], typer.Option("--workers", help="Concurrent checks")] = None,
    timings: Annotated[Optional[bool], typer.Option("--timings/--no-timings", help="Record elapsed_ms")] = None,
    metrics: Annotated[Optional[bool], typer.Option("--metrics/--no-metrics", help="Print metrics")] = None,
    output: Annotated[Optional[Path], typer.Option("--output", "-o", help="Output directory")] = None,
    report_name: Annotated[str, typer.Option("--report", help="Report file name")] = "report.json",
) -> None:
    """Verify a flow file; exits 1 if any check fails."""
    settings = _load_settings()
    store = FlowStore(output if output is not None else settings.output_dir)
    try:
        flow = store.load(flow_file)
    except FlowStorageError as e:
        _fail_config(str(e))
    config = _run_config(
        settings,
        prime=flow.p,
        precision=flow.precision,
        coefficients=[int(str(a)) for a in flow.params.a],
        lift_mode=flow.lift_mode,
        spec_samples=spec_samples,
        seed=seed,
        output_path=store.directory,
    )
    collect_metrics = settings.enable_metrics if metrics is None else metrics
    if collect_metrics:
        init_metrics_collector()
    options = VerifyOptions(
        spec_samples=config.spec_samples,
        seed=config.seed,
        lie_trials=settings.lie_trials if lie_trials is None else lie_trials,
        curve_trials=settings.curve_trials if curve_trials is None else curve_trials,
        max_concurrent=settings.max_concurrent_checks if workers is None else workers,
        include_timings=settings.include_timings if timings is None else timings,
    )
    try:
        report = verify_flow(flow, options)
    except ValueError as e:
        _fail_config(str(e))
    path = _write_json(store.directory / report_name, report.model_dump_json(indent=2, by_alias=True))
    store.append_manifest([(c.name, c.status) for c in report.checks], flow_file)
    _print_report(report)
    console.print(f"wrote {path}")
    collector = get_metrics_collector()
    if collector:
        err_console.print_json(json.dumps(collector.get_metrics()))
    raise typer.Exit(code=EXIT_OK if report.overall == "passed" else EXIT_CHECK_FAILED)


@app.command()
def hasse(
    prime: Annotated[Optional[int], typer.Option("--prime", "-p", help="Odd prime p")] = None,
    coefficients: Annotated[Optional[str], typer.Option("--a", help="a1,a2,a3")] = None,
    trials: Annotated[Optional[int], typer.Option("--trials", help="Random cubics and quartics")] = None,
    seed: Annotated[Optional[int], typer.Option("--seed", help="Random seed")] = None,
    output: Annotated[Optional[Path], typer.Option("--output", "-o", help="Output directory")] = None,
) -> None:
    """Hasse invariant suites for the configured parameters."""
    settings = _load_settings()
    config = _run_config(settings, prime=prime, coefficients=coefficients, seed=seed, output_path=output)
    count = settings.curve_trials if trials is None else trials
    if count < 0:
        _fail_config(f"trials must be non-negative, got {count}")
    report = run_hasse(config.system_params(), count, config.seed)
    path = _write_json(config.output_path / "hasse_report.json", report.model_dump_json(indent=2, by_alias=True))
    suite = report.suite
    console.print(f"cubics: {suite.cubic_holds}/{suite.trials}  quartics: {suite.quartic_holds}/{suite.trials}")
    homogeneity = report.homogeneity
    console.print(
        f"A_(p-1)(F) = {homogeneity.invariant}: homogeneous of degree {homogeneity.expected_degree} "
        f"{homogeneity.homogeneous}, nonzero mod p {homogeneity.nonzero_mod_p}"
    )
    console.print(f"supersingular levels: {len(report.supersingular_levels)}")
    console.print(f"wrote {path}")
    raise typer.Exit(code=EXIT_OK if report.holds else EXIT_CHECK_FAILED)


def _floats(value: str, label: str) -> list[float]:
    try:
        parts = [float(part) for part in value.split(",")]
    except ValueError:
        _fail_config(f"{label} must be three comma-separated numbers, got: {value}")
    if len(parts) != 3:
        _fail_config(f"{label} must be three comma-separated numbers, got: {value}")
    return parts


@app.command()
def demo(
    coefficients: Annotated[str, typer.Option("--a", help="a1,a2,a3 as reals")] = "1,2,3",
    x0: Annotated[str, typer.Option("--x0", help="Initial point")] = "1,1,1",
    dt: Annotated[float, typer.Option("--dt", help="Step size")] = 1e-3,
    steps: Annotated[int, typer.Option("--steps", help="Number of steps")] = 10_000,
    output: Annotated[Optional[Path], typer.Option("--output", "-o", help="Output directory")] = None,
    name: Annotated[str, typer.Option("--name", help="CSV file name")] = "trajectory.csv",
) -> None:
    """Integrate the classical Euler top and report the drift of H1, H2."""
    settings = _load_settings()
    a = _floats(coefficients, "a")
    start = _floats(x0, "x0")
    try:
        trajectory = integrate_demo(a, start, dt, steps)
    except ValueError as e:
        _fail_config(str(e))
    directory = output if output is not None else Path(settings.output_dir)
    directory.mkdir(parents=True, exist_ok=True)
    path = trajectory.to_csv(directory / name)
    drift_h1, drift_h2 = trajectory.max_drift
    console.print(f"max |H1(t) - H1(0)| = {drift_h1:.3e}")
    console.print(f"max |H2(t) - H2(0)| = {drift_h2:.3e}")
    console.print(f"wrote {path}")
    raise typer.Exit(code=EXIT_OK)


@app.command()
def version() -> None:
    """Print the package version."""
    console.print(__version__)


if __name__ == "__main__":
    app()
