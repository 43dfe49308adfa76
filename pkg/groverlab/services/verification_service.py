"""
Equivalence suite behind `verify`: every compiled building block is
checked against its dense definition by exhaustive application to the
basis states.
"""

from typing import Callable, List, Tuple

import numpy as np
import structlog

from groverlab.config import settings
from groverlab.core.circuit import (
    Circuit,
    EquivalenceMode,
    circuit_matrix,
    equivalent,
    gate_census,
    register_matrix,
    work_leakage,
)
from groverlab.core.gates import GateKind, gate_matrix
from groverlab.core.linalg import identity, outer_product, uniform_state
from groverlab.exceptions.custom_exceptions import ParameterOutOfRangeException, SizeLimitException
from groverlab.schemas.circuit_schemas import CheckResult, LoweringLevel, VerificationReport
from groverlab.services import compiler_service
from groverlab.services.compiler_service import UNIVERSAL_MNEMONICS

logger = structlog.get_logger(__name__)

CheckOutcome = Tuple[bool, str]


def _deviation(actual: np.ndarray, expected: np.ndarray) -> float:
    return float(np.max(np.abs(actual - expected)))


def _compare(actual: np.ndarray, expected: np.ndarray) -> CheckOutcome:
    deviation = _deviation(actual, expected)
    return deviation < settings.matrix_tol, f"max deviation {deviation:.3e}"


def phase_oracle_matrix(n: int, i0: int) -> np.ndarray:
    """I - 2|i0><i0|"""
    matrix = identity(1 << n)
    matrix[i0, i0] = -1.0
    return matrix


def diffusion_matrix(n: int) -> np.ndarray:
    """2|psi><psi| - I"""
    psi = uniform_state(n).amps
    return 2.0 * outer_product(psi, psi) - identity(1 << n)


def check_toffoli_exact(n: int, i0: int) -> CheckOutcome:
    circuit = compiler_service.lower_toffoli()
    stray = set(gate_census(circuit).counts) - UNIVERSAL_MNEMONICS
    if stray:
        return False, "non-universal gates: " + ", ".join(sorted(stray))
    return _compare(circuit_matrix(circuit).entries, gate_matrix(GateKind.CX, num_controls=2).entries)


def check_mcx_ladder(n: int, i0: int) -> CheckOutcome:
    num_controls = max(n, 3)
    circuit = compiler_service.lower_mcx(num_controls)
    passed, detail = _compare(
        register_matrix(circuit).entries,
        gate_matrix(GateKind.CX, num_controls=num_controls).entries,
    )
    return passed, f"{num_controls} controls, {detail}"


def check_oracle_identity(n: int, i0: int) -> CheckOutcome:
    """Oracle on register x |->: phase oracle on the register, |-> untouched"""
    minus = np.array([[1.0], [-1.0]], dtype=np.complex128) / np.sqrt(2.0)
    matrix = circuit_matrix(compiler_service.build_oracle_circuit(n, i0)).entries
    actual = matrix @ np.kron(identity(1 << n), minus)
    return _compare(actual, np.kron(phase_oracle_matrix(n, i0), minus))


def check_diffusion_identity(n: int, i0: int) -> CheckOutcome:
    matrix = circuit_matrix(compiler_service.build_diffusion_circuit(n)).entries
    return _compare(matrix, diffusion_matrix(n))


def check_reflection_involutions(n: int, i0: int) -> CheckOutcome:
    level = LoweringLevel.UNIVERSAL
    worst = 0.0
    for circuit in (compiler_service.build_oracle_circuit(n, i0), compiler_service.build_diffusion_circuit(n)):
        matrix = register_matrix(compiler_service.lower_circuit(circuit, level)).entries
        worst = max(worst, _deviation(matrix @ matrix, identity(matrix.shape[0])))
    return worst < settings.matrix_tol, f"max deviation {worst:.3e}"


def check_work_restoration(n: int, i0: int) -> CheckOutcome:
    worst = 0.0
    for level in (LoweringLevel.TOFFOLI, LoweringLevel.UNIVERSAL):
        circuit: Circuit = compiler_service.lower_circuit(compiler_service.build_grover_iteration(n, i0), level)
        worst = max(worst, work_leakage(circuit))
    return worst < settings.amplitude_tol, f"max leakage {worst:.3e}"


def check_level_equivalence(n: int, i0: int) -> CheckOutcome:
    matrices = {
        level: register_matrix(compiler_service.assemble_grover_circuit(n, i0, 1, level)).entries
        for level in LoweringLevel
    }
    reference = matrices[LoweringLevel.OPERATOR]
    mismatched = [
        level.value
        for level, matrix in matrices.items()
        if not equivalent(matrix, reference, EquivalenceMode.GLOBAL_PHASE)
    ]
    if mismatched:
        return False, "differs from operator level: " + ", ".join(mismatched)
    return True, "operator, toffoli and universal agree up to global phase"


CHECKS: List[Tuple[str, Callable[[int, int], CheckOutcome]]] = [
    ("toffoli_exact", check_toffoli_exact),
    ("mcx_ladder", check_mcx_ladder),
    ("oracle_identity", check_oracle_identity),
    ("diffusion_identity", check_diffusion_identity),
    ("reflection_involutions", check_reflection_involutions),
    ("work_restoration", check_work_restoration),
    ("level_equivalence", check_level_equivalence),
]


def verify_all(n: int, i0: int) -> VerificationReport:
    """Run every check; the report carries failures, it does not raise on them"""
    if n < 1:
        raise ParameterOutOfRangeException("n", f"n must be >= 1, got {n}")
    if n > settings.max_verify_qubits:
        raise SizeLimitException(f"matrix verification limited to n ≤ {settings.max_verify_qubits}")
    if not 0 <= i0 < (1 << n):
        raise ParameterOutOfRangeException("target", "target out of range")

    report = VerificationReport(n=n, target=i0)
    for name, check in CHECKS:
        passed, detail = check(n, i0)
        report.checks.append(CheckResult(name=name, passed=passed, detail=detail))
        if not passed:
            logger.warning("check_failed", check=name, n=n, target=i0, detail=detail)
    logger.info("verification_finished", n=n, target=i0, failed=len(report.failed_checks))
    return report
