"""
Pydantic schemas for search runs, traces and sweeps
"""

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

import groverlab.exceptions.custom_exceptions as exceptions
from groverlab.config import settings
from groverlab.schemas.circuit_schemas import LoweringLevel


class GroverEngine(str, Enum):
    """Simulation engine"""
    ANALYTIC = "analytic"
    STATEVECTOR = "statevector"
    COMPILED = "compiled"


def engine_qubit_count(engine: GroverEngine, n: int, level: LoweringLevel) -> int:
    """Qubits an engine has to hold for an n-qubit search"""
    if engine is GroverEngine.COMPILED:
        # the oracle's n-control X is the widest gate
        return n + 1 + LoweringLevel(level).work_qubits(n)
    return n


def engine_qubit_limit(engine: GroverEngine) -> int:
    return {
        GroverEngine.ANALYTIC: settings.max_analytic_qubits,
        GroverEngine.STATEVECTOR: settings.max_statevector_qubits,
        GroverEngine.COMPILED: settings.max_compiled_qubits,
    }[engine]


def engine_supports(engine: GroverEngine, n: int, level: LoweringLevel = LoweringLevel.UNIVERSAL) -> bool:
    return 1 <= n and engine_qubit_count(engine, n, level) <= engine_qubit_limit(engine)


class GroverConfig(BaseModel):
    """Run parameters"""
    n: int
    i0: int
    engine: GroverEngine = GroverEngine.STATEVECTOR
    level: LoweringLevel = LoweringLevel.UNIVERSAL
    iterations_override: Optional[int] = None
    shots: int = Field(default_factory=lambda: settings.default_shots)
    seed: int = Field(default_factory=lambda: settings.default_seed)

    def throw_if_invalid(self):
        """Throw exception if the configuration is invalid"""
        if self.n < 1:
            raise exceptions.ParameterOutOfRangeException("n", f"n must be >= 1, got {self.n}")
        if not engine_supports(self.engine, self.n, self.level):
            raise exceptions.SizeLimitException(
                f"{self.engine.value} engine supports at most {engine_qubit_limit(self.engine)} qubits "
                f"(n={self.n} needs {engine_qubit_count(self.engine, self.n, self.level)})"
            )
        if not 0 <= self.i0 < (1 << self.n):
            raise exceptions.ParameterOutOfRangeException("target", "target out of range")
        if self.iterations_override is not None and self.iterations_override < 0:
            raise exceptions.ParameterOutOfRangeException("iterations", "iterations must be >= 0")
        if self.shots < 0:
            raise exceptions.ParameterOutOfRangeException("shots", "shots must be >= 0")
        if not 0 <= self.seed < 2 ** 64:
            raise exceptions.ParameterOutOfRangeException("seed", "seed must be an unsigned 64-bit integer")


class GroverTraceRow(BaseModel):
    """Register state after k Grover iterations, in the (|u>, |i0>) plane"""
    k: int
    c_u: float
    c_i0: float
    residual: float
    p_k: float


class SearchReport(BaseModel):
    """Search results"""
    n: int
    target: int
    engine: GroverEngine
    level: Optional[LoweringLevel] = None
    theta: float
    k0: int
    p_analytic: float
    p_engine: float
    trace: List[GroverTraceRow] = Field(default_factory=list)
    shots: int = 0
    seed: int = 0
    samples: Dict[int, int] = Field(default_factory=dict)
    measured_mode: Optional[int] = None


class SweepRow(BaseModel):
    """Per-n record of the success-probability curve"""
    n: int
    theta_rad: float
    k0: int
    p_analytic: float
    p_engine: Optional[float] = None
