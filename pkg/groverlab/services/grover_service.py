"""
Grover search engine: closed-form analytics, high-level operator
simulation, compiled-circuit simulation, measurement sampling and the
success-probability sweep.

The statevector engine simulates the first register only, with the
oracle as the phase reflection I - 2|i0><i0|; the second register |->
is carried explicitly by the compiled engine alone.
"""

from __future__ import annotations

import asyncio
import math
from typing import Dict, List, Optional, Tuple

import numpy as np
import structlog

from groverlab.config import settings
from groverlab.core.circuit import execute
from groverlab.core.gates import writable_buffer
from groverlab.core.linalg import StateVector, uniform_state
from groverlab.exceptions.custom_exceptions import (
    ParameterOutOfRangeException,
    ValidationException,
)
from groverlab.schemas.circuit_schemas import LoweringLevel
from groverlab.schemas.grover_schemas import (
    GroverConfig,
    GroverEngine,
    GroverTraceRow,
    SearchReport,
    SweepRow,
    engine_supports,
)
from groverlab.services import compiler_service

logger = structlog.get_logger(__name__)

_TIE_TOLERANCE = 1e-9


def _check_n(n: int) -> None:
    if n < 1:
        raise ParameterOutOfRangeException("n", f"n must be >= 1, got {n}")


def _round_half_away(value: float) -> int:
    floor = math.floor(value)
    if abs(value - floor - 0.5) <= _TIE_TOLERANCE:
        return int(floor + 1) if value >= 0 else int(floor)
    return int(math.floor(value + 0.5))


# --- closed form ------------------------------------------------------------

def theta(n: int) -> float:
    """Rotation angle per iteration, 2 arccos sqrt(1 - 1/N).

    Evaluated as 2 arcsin(1/sqrt N), the same angle without the
    cancellation arccos suffers next to 1.
    """
    _check_n(n)
    return 2.0 * math.asin(2.0 ** (-n / 2.0))


def optimal_iterations(n: int) -> int:
    """k0 = round((pi - theta) / (2 theta)), ties away from zero"""
    angle = theta(n)
    return _round_half_away((math.pi - angle) / (2.0 * angle))


def success_probability(n: int, k: int) -> float:
    if k < 0:
        raise ParameterOutOfRangeException("iterations", f"iterations must be >= 0, got {k}")
    return math.sin((2 * k + 1) * theta(n) / 2.0) ** 2


def analytic_state(n: int, k: int) -> Tuple[float, float]:
    """(c_u, c_i0) of G^k|psi>"""
    if k < 0:
        raise ParameterOutOfRangeException("iterations", f"iterations must be >= 0, got {k}")
    half_angle = (2 * k + 1) * theta(n) / 2.0
    return math.cos(half_angle), math.sin(half_angle)


# --- operators on the first register ----------------------------------------

def _check_index(i0: int, dim: int) -> None:
    if not 0 <= i0 < dim:
        raise ParameterOutOfRangeException("target", "target out of range")


def _oracle_inplace(buffer: np.ndarray, i0: int) -> None:
    buffer[i0] = -buffer[i0]


def _diffusion_inplace(buffer: np.ndarray) -> None:
    mean = buffer.mean()
    np.negative(buffer, out=buffer)
    buffer += 2.0 * mean


def apply_oracle_phase(state: StateVector, i0: int) -> StateVector:
    """I - 2|i0><i0|"""
    _check_index(i0, state.dim)
    buffer = writable_buffer(state)
    _oracle_inplace(buffer, i0)
    return StateVector(buffer, normalized=False)


def apply_diffusion(state: StateVector) -> StateVector:
    """Inversion about the mean: sigma_i -> 2<sigma> - sigma_i"""
    buffer = writable_buffer(state)
    _diffusion_inplace(buffer)
    return StateVector(buffer, normalized=False)


def subspace_components(amps: np.ndarray, i0: int) -> Tuple[float, float, float]:
    """(c_u, c_i0, residual) of a register state.

    |u> is the normalised sum of all basis states other than |i0>; the
    residual is the norm of what lies outside span{|u>, |i0>}.
    """
    amps = np.asarray(amps).reshape(-1)
    dim = amps.size
    _check_index(i0, dim)
    if dim == 1:
        return 0.0, float(amps[0].real), float(abs(amps[0].imag))
    scale = 1.0 / math.sqrt(dim - 1)
    c_i0 = float(amps[i0].real)
    c_u = float(((amps.sum() - amps[i0]) * scale).real)
    deviation = amps - c_u * scale
    deviation[i0] = amps[i0] - c_i0
    return c_u, c_i0, float(np.linalg.norm(deviation))


def _trace_row(k: int, amps: np.ndarray, i0: int) -> GroverTraceRow:
    c_u, c_i0, residual = subspace_components(amps, i0)
    return GroverTraceRow(k=k, c_u=c_u, c_i0=c_i0, residual=residual, p_k=float(abs(amps[i0]) ** 2))


# --- measurement ------------------------------------------------------------

def _cdf(probabilities: np.ndarray) -> np.ndarray:
    norm = math.sqrt(float(probabilities.sum()))
    if abs(norm - 1.0) > settings.measure_norm_tol:
        raise ValidationException(f"Cannot measure: state norm is {norm:.12g}")
    return np.cumsum(probabilities)


def _draw(cdf: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    # inverse CDF; scaling by cdf[-1] absorbs rounding in the last bin
    indices = np.searchsorted(cdf, uniforms * cdf[-1], side="right")
    return np.minimum(indices, cdf.size - 1)


def measure(state: StateVector, rng: np.random.Generator) -> int:
    """Sample one basis index with probability |amp_i|^2"""
    cdf = _cdf(state.probabilities())
    return int(_draw(cdf, np.array([rng.random()]))[0])


def _histogram(indices: np.ndarray) -> Dict[int, int]:
    values, counts = np.unique(indices, return_counts=True)
    return {int(value): int(count) for value, count in zip(values, counts)}


def sample_probabilities(probabilities: np.ndarray, shots: int, rng: np.random.Generator) -> Dict[int, int]:
    if shots == 0:
        return {}
    cdf = _cdf(probabilities)
    return _histogram(_draw(cdf, rng.random(shots)))


def sample_histogram(state: StateVector, shots: int, rng: np.random.Generator) -> Dict[int, int]:
    """Histogram of `shots` independent measurements"""
    return sample_probabilities(state.probabilities(), shots, rng)


def sample_analytic(n: int, i0: int, p: float, shots: int, rng: np.random.Generator) -> Dict[int, int]:
    """Measurement histogram of the closed-form state without building it.

    i0 is drawn with probability p; otherwise the outcome is uniform over
    the remaining N - 1 indices.
    """
    if shots == 0:
        return {}
    hits = rng.random(shots) < p
    misses = int(shots - hits.sum())
    others = rng.integers(0, (1 << n) - 1, size=misses) if misses else np.empty(0, dtype=np.int64)
    others = others + (others >= i0)
    indices = np.concatenate([np.full(int(hits.sum()), i0, dtype=np.int64), others.astype(np.int64)])
    return _histogram(indices)


def _mode(samples: Dict[int, int]) -> Optional[int]:
    if not samples:
        return None
    return min(samples, key=lambda index: (-samples[index], index))


# --- engines ----------------------------------------------------------------

def _run_analytic(n: int, i0: int, k: int) -> List[GroverTraceRow]:
    rows = []
    for step in range(k + 1):
        c_u, c_i0 = analytic_state(n, step)
        rows.append(GroverTraceRow(k=step, c_u=c_u, c_i0=c_i0, residual=0.0, p_k=c_i0 ** 2))
    return rows


def _run_statevector(n: int, i0: int, k: int) -> Tuple[np.ndarray, List[GroverTraceRow]]:
    buffer = writable_buffer(uniform_state(n))
    rows = [_trace_row(0, buffer, i0)]
    for step in range(1, k + 1):
        _oracle_inplace(buffer, i0)
        _diffusion_inplace(buffer)
        rows.append(_trace_row(step, buffer, i0))
    return buffer, rows


def _register_amplitudes(buffer: np.ndarray, n: int) -> np.ndarray:
    """Project the oracle target onto |-> and the work qubits onto |0>"""
    tensor = buffer.reshape(1 << n, 2, -1)
    return (tensor[:, 0, 0] - tensor[:, 1, 0]) / math.sqrt(2.0)


def _run_compiled(n: int, i0: int, k: int, level: LoweringLevel) -> Tuple[np.ndarray, List[GroverTraceRow]]:
    iteration = compiler_service.build_grover_iteration(n, i0)
    work = compiler_service.work_qubits_required(iteration, level)
    preparation = compiler_service.lower_circuit(compiler_service.build_preparation(n), level, work)
    iteration = compiler_service.lower_circuit(iteration, level, work)

    buffer = np.zeros(1 << preparation.total_qubits, dtype=np.complex128)
    buffer[0] = 1.0
    execute(preparation, buffer)
    rows = [_trace_row(0, _register_amplitudes(buffer, n), i0)]
    for step in range(1, k + 1):
        execute(iteration, buffer)
        rows.append(_trace_row(step, _register_amplitudes(buffer, n), i0))
    return buffer, rows


def run_search(config: GroverConfig) -> SearchReport:
    config.throw_if_invalid()
    n, i0 = config.n, config.i0
    k = config.iterations_override if config.iterations_override is not None else optimal_iterations(n)
    p_analytic = success_probability(n, k)
    rng = np.random.default_rng(config.seed)

    if config.engine is GroverEngine.ANALYTIC:
        trace = _run_analytic(n, i0, k)
        p_engine = p_analytic
        samples = sample_analytic(n, i0, p_analytic, config.shots, rng)
    else:
        if config.engine is GroverEngine.STATEVECTOR:
            buffer, trace = _run_statevector(n, i0, k)
        else:
            buffer, trace = _run_compiled(n, i0, k, config.level)
        # marginal over the oracle target and work qubits, if any
        register_probabilities = (np.abs(buffer) ** 2).reshape(1 << n, -1).sum(axis=1)
        p_engine = float(register_probabilities[i0])
        samples = sample_probabilities(register_probabilities, config.shots, rng)

    report = SearchReport(
        n=n,
        target=i0,
        engine=config.engine,
        level=config.level if config.engine is GroverEngine.COMPILED else None,
        theta=theta(n),
        k0=k,
        p_analytic=p_analytic,
        p_engine=p_engine,
        trace=trace,
        shots=config.shots,
        seed=config.seed,
        samples=samples,
        measured_mode=_mode(samples),
    )
    logger.info("search_finished", n=n, target=i0, engine=config.engine.value, k=k, p_engine=p_engine)
    return report


# --- sweep ------------------------------------------------------------------

def _check_sweep_range(n_min: int, n_max: int) -> None:
    if not 2 <= n_min <= n_max:
        raise ParameterOutOfRangeException("n", f"sweep needs 2 <= n-min <= n-max, got {n_min}..{n_max}")
    if n_max > settings.max_analytic_qubits:
        raise ParameterOutOfRangeException("n", f"n-max must be <= {settings.max_analytic_qubits}")


def sweep_row(n: int, engine: GroverEngine, level: LoweringLevel, seed: int) -> SweepRow:
    """seed is the row's own seed: the sweep seed XOR the row index"""
    k0 = optimal_iterations(n)
    p_engine: Optional[float] = None
    if engine_supports(engine, n, level):
        config = GroverConfig(n=n, i0=0, engine=engine, level=level, shots=0, seed=seed)
        p_engine = run_search(config).p_engine
    return SweepRow(n=n, theta_rad=theta(n), k0=k0, p_analytic=success_probability(n, k0), p_engine=p_engine)


def sweep(
    n_min: int,
    n_max: int,
    engine: GroverEngine = GroverEngine.ANALYTIC,
    level: LoweringLevel = LoweringLevel.UNIVERSAL,
    seed: int = 0,
) -> List[SweepRow]:
    """One row per n; p_engine is None where the engine cannot hold n"""
    _check_sweep_range(n_min, n_max)
    engine, level = GroverEngine(engine), LoweringLevel(level)
    return [sweep_row(n, engine, level, seed ^ index) for index, n in enumerate(range(n_min, n_max + 1))]


async def sweep_async(
    n_min: int,
    n_max: int,
    engine: GroverEngine = GroverEngine.ANALYTIC,
    level: LoweringLevel = LoweringLevel.UNIVERSAL,
    seed: int = 0,
    workers: Optional[int] = None,
) -> List[SweepRow]:
    """Same rows as sweep(), computed in worker threads"""
    _check_sweep_range(n_min, n_max)
    semaphore = asyncio.Semaphore(workers or settings.sweep_workers)
    engine, level = GroverEngine(engine), LoweringLevel(level)

    async def _row(index: int, n: int) -> SweepRow:
        async with semaphore:
            return await asyncio.to_thread(sweep_row, n, engine, level, seed ^ index)

    rows = await asyncio.gather(*(_row(index, n) for index, n in enumerate(range(n_min, n_max + 1))))
    logger.info("sweep_finished", n_min=n_min, n_max=n_max, engine=engine.value)
    return list(rows)
