"""
Command handlers: run, sweep, compile, verify.

Each handler takes the parsed arguments, writes its result to standard
output (or --out) and returns an exit code. Failures are raised and
mapped to exit codes by the error handler.
"""

import csv
import io
import math
import sys
from argparse import Namespace
from typing import Iterable, List, Optional

import structlog

from groverlab.config import settings
from groverlab.core.circuit import gate_census, serialize_circuit
from groverlab.exceptions.custom_exceptions import EXIT_OK, SizeLimitException, VerificationFailedException
from groverlab.schemas.circuit_schemas import LoweringLevel
from groverlab.schemas.grover_schemas import (
    GroverConfig,
    GroverEngine,
    SearchReport,
    SweepRow,
)
from groverlab.services import compiler_service, grover_service, verification_service

logger = structlog.get_logger(__name__)

SWEEP_HEADER = ["n", "theta_rad", "k0", "p_analytic", "p_engine"]


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        logger.info("output_written", path=out, bytes=len(text))
    else:
        sys.stdout.write(text)


def format_report(report: SearchReport) -> str:
    lines = [
        f"n: {report.n}",
        f"target: {report.target}",
        f"engine: {report.engine.value}",
    ]
    if report.level is not None:
        lines.append(f"level: {report.level.value}")
    lines += [
        f"theta_rad: {report.theta!r}",
        f"theta_deg: {math.degrees(report.theta):.1f}",
        f"k0: {report.k0}",
        f"p_analytic: {report.p_analytic!r}",
        f"p_engine: {report.p_engine!r}",
        f"shots: {report.shots}",
        f"seed: {report.seed}",
        "samples:",
    ]
    lines += [f"  {index}: {count}" for index, count in sorted(report.samples.items())]
    mode = "-" if report.measured_mode is None else str(report.measured_mode)
    lines.append(f"measured_mode: {mode}")
    return "\n".join(lines) + "\n"


def cmd_run(args: Namespace) -> int:
    config = GroverConfig(
        n=args.n,
        i0=args.target,
        engine=GroverEngine(args.engine),
        level=LoweringLevel(args.level),
        iterations_override=args.iterations,
        shots=args.shots,
        seed=args.seed,
    )
    report = grover_service.run_search(config)
    text = format_report(report)
    if args.json:
        text += report.model_dump_json() + "\n"
    sys.stdout.write(text)
    return EXIT_OK


def _csv_float(value: Optional[float]) -> str:
    return "" if value is None else repr(float(value))


def format_sweep(rows: Iterable[SweepRow]) -> str:
    """CSV with full-precision floats; p_engine blank where the engine was skipped"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow([row.n, _csv_float(row.theta_rad), row.k0, _csv_float(row.p_analytic), _csv_float(row.p_engine)])
    return buffer.getvalue()


def parse_sweep(text: str) -> List[SweepRow]:
    reader = csv.DictReader(io.StringIO(text))
    return [
        SweepRow(
            n=int(record["n"]),
            theta_rad=float(record["theta_rad"]),
            k0=int(record["k0"]),
            p_analytic=float(record["p_analytic"]),
            p_engine=float(record["p_engine"]) if record["p_engine"] else None,
        )
        for record in reader
    ]


def cmd_sweep(args: Namespace) -> int:
    rows = grover_service.sweep(
        args.n_min,
        args.n_max,
        engine=GroverEngine(args.engine),
        level=LoweringLevel(args.level),
        seed=args.seed,
    )
    _write(format_sweep(rows), args.out)
    return EXIT_OK


def cmd_compile(args: Namespace) -> int:
    level = LoweringLevel(args.level)
    if args.n > settings.max_compiled_qubits:
        raise SizeLimitException(f"compile supports n <= {settings.max_compiled_qubits}")
    k = args.iterations if args.iterations is not None else grover_service.optimal_iterations(args.n)
    circuit = compiler_service.assemble_grover_circuit(args.n, args.target, k, level)
    census = gate_census(circuit)
    footer = [f"# gates: {census.summary()}"]
    if args.n >= 2:
        footer.append(f"# predicted: {compiler_service.predicted_gate_count(args.n):.2f}")
    _write(serialize_circuit(circuit) + "\n".join(footer) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args: Namespace) -> int:
    report = verification_service.verify_all(args.n, args.target)
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        sys.stdout.write(f"{status} {check.name}: {check.detail}\n")
    if not report.passed:
        raise VerificationFailedException(report.failed_checks)
    return EXIT_OK
