"""
Grover circuit builders and lowering passes.

Register layout of an assembled circuit: qubits 0..n-1 search register,
qubit n oracle target (prepared |1> then H, i.e. |->), work qubits after.

Levels:
    operator   oracle and diffusion keep their multi-controlled X gates
    toffoli    every ncx (>= 3 controls) becomes a ccx ladder over work qubits
    universal  every ccx is further replaced by the fixed H/T/S/CNOT network
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import structlog

from groverlab.core.circuit import Circuit, CircuitBuilder, Gate
from groverlab.core.gates import GateKind
from groverlab.exceptions.custom_exceptions import (
    InsufficientWorkQubitsException,
    ParameterOutOfRangeException,
    ValidationException,
)
from groverlab.schemas.circuit_schemas import LoweringLevel

logger = structlog.get_logger(__name__)


UNIVERSAL_MNEMONICS = frozenset({"x", "h", "s", "t", "tdg", "cx", "gphase"})


def _check_register(n: int, i0: Optional[int] = None) -> None:
    if n < 1:
        raise ParameterOutOfRangeException("n", f"n must be >= 1, got {n}")
    if i0 is not None and not 0 <= i0 < (1 << n):
        raise ParameterOutOfRangeException("target", "target out of range")


def _bit(i0: int, n: int, qubit: int) -> int:
    # qubit 0 is the most significant bit
    return (i0 >> (n - 1 - qubit)) & 1


def oracle_gates(n: int, i0: int) -> list[Gate]:
    flips = [Gate.single(GateKind.X, q) for q in range(n) if not _bit(i0, n, q)]
    return [*flips, Gate.mcx(range(n), n), *flips]


def build_oracle_circuit(n: int, i0: int) -> Circuit:
    """I - 2|i0><i0| as X conjugations around an n-control X onto |->"""
    _check_register(n, i0)
    return CircuitBuilder(n + 1).extend(oracle_gates(n, i0)).build()


def reflection_core_gates(n: int) -> list[Gate]:
    """2|0><0| - I: X^n, i, H.ncx.H on the last qubit, i, X^n.

    The ncx between the Hadamards flips the sign of |1...1> only; the two
    i phases turn I - 2|0><0| into 2|0><0| - I exactly. For n = 1 the
    Hadamard-conjugated X (a Z) carries the sign.
    """
    last = n - 1
    flips = [Gate.single(GateKind.X, q) for q in range(n)]
    core = [Gate.mcx(range(last), last)] if n > 1 else [Gate.single(GateKind.X, last)]
    return [
        *flips,
        Gate.gphase("i"),
        Gate.single(GateKind.H, last),
        *core,
        Gate.single(GateKind.H, last),
        Gate.gphase("i"),
        *flips,
    ]


def build_reflection_core(n: int) -> Circuit:
    _check_register(n)
    return CircuitBuilder(n).extend(reflection_core_gates(n)).build()


def diffusion_gates(n: int) -> list[Gate]:
    hadamards = [Gate.single(GateKind.H, q) for q in range(n)]
    return [*hadamards, *reflection_core_gates(n), *hadamards]


def build_diffusion_circuit(n: int) -> Circuit:
    """2|psi><psi| - I = H^n (2|0><0| - I) H^n, exact including sign"""
    _check_register(n)
    return CircuitBuilder(n).extend(diffusion_gates(n)).build()


def mcx_ladder_gates(controls: Sequence[int], target: int, work: Sequence[int]) -> list[Gate]:
    """Generalized Toffoli as a compute / apply / uncompute chain of ccx"""
    controls = list(controls)
    count = len(controls)
    if count < 1:
        raise ValidationException("Multi-controlled X needs at least one control")
    if count <= 2:
        return [Gate.mcx(controls, target)]
    required = count - 2
    if len(work) < required:
        raise InsufficientWorkQubitsException(required, len(work))

    compute = [Gate.mcx((controls[0], controls[1]), work[0])]
    for step in range(1, required):
        compute.append(Gate.mcx((controls[step + 1], work[step - 1]), work[step]))
    apply = Gate.mcx((controls[-1], work[required - 1]), target)
    return [*compute, apply, *reversed(compute)]


def lower_mcx(
    num_controls: int,
    target: Optional[int] = None,
    work_base: Optional[int] = None,
    num_work_qubits: Optional[int] = None,
) -> Circuit:
    """Standalone ladder: controls 0..c-1, work qubits from work_base on.

    target defaults to c, work_base to target + 1 and num_work_qubits to
    the c-2 the ladder needs. Qubits below work_base form the register.
    """
    target = num_controls if target is None else target
    work_base = target + 1 if work_base is None else work_base
    if target < num_controls or work_base <= target:
        raise ParameterOutOfRangeException(
            "target",
            f"ladder needs controls < target < work_base, got c={num_controls}, target={target}, work_base={work_base}",
        )
    required = LoweringLevel.TOFFOLI.work_qubits(num_controls)
    available = required if num_work_qubits is None else num_work_qubits
    work = [work_base + k for k in range(available)]
    gates = mcx_ladder_gates(range(num_controls), target, work)
    return CircuitBuilder(work_base, available).extend(gates).build()


def toffoli_gates(control1: int, control2: int, target: int) -> list[Gate]:
    """Exact Toffoli over {H, T, Tdg, S, CNOT}: H . CCZ . H on the target.

    The diagonal part realises (-1)^{abc} through the phase polynomial
    a + b + c - (a^b) - (a^c) - (b^c) + (a^b^c) in units of pi/4.
    """
    a, b, c = control1, control2, target
    one = Gate.single
    return [
        one(GateKind.H, c),
        Gate.mcx((b,), c),
        one(GateKind.TDG, c),
        Gate.mcx((a,), c),
        one(GateKind.T, c),
        Gate.mcx((b,), c),
        one(GateKind.TDG, c),
        Gate.mcx((a,), c),
        one(GateKind.T, c),
        one(GateKind.H, c),
        one(GateKind.TDG, b),
        Gate.mcx((a,), b),
        one(GateKind.TDG, b),
        Gate.mcx((a,), b),
        one(GateKind.S, b),
        one(GateKind.T, a),
    ]


def lower_toffoli() -> Circuit:
    return CircuitBuilder(3).extend(toffoli_gates(0, 1, 2)).build()


def work_qubits_required(circuit: Circuit, level: LoweringLevel) -> int:
    level = LoweringLevel(level)
    return max((level.work_qubits(gate.num_controls) for gate in circuit.ops if gate.kind is GateKind.CX), default=0)


def lower_circuit(circuit: Circuit, level: LoweringLevel, num_work_qubits: Optional[int] = None) -> Circuit:
    """Rewrite a circuit to the requested level.

    Work qubits are allocated once after the main register and shared by
    every lowered gate, since each ladder restores them to |0>.
    """
    level = LoweringLevel(level)
    required = work_qubits_required(circuit, level)
    work_count = max(required, circuit.num_work_qubits) if num_work_qubits is None else num_work_qubits
    if work_count < required:
        raise InsufficientWorkQubitsException(required, work_count)
    if level is LoweringLevel.OPERATOR:
        return circuit.with_work_qubits(work_count)

    work = [circuit.num_qubits + k for k in range(work_count)]
    builder = CircuitBuilder(circuit.num_qubits, work_count)
    for gate in circuit.ops:
        if gate.kind is not GateKind.CX or gate.num_controls == 1:
            builder.append(gate)
            continue
        for step in mcx_ladder_gates(gate.controls, gate.target, work):
            if level is LoweringLevel.UNIVERSAL and step.num_controls == 2:
                builder.extend(toffoli_gates(*step.controls, step.target))
            else:
                builder.append(step)
    lowered = builder.build()
    logger.debug("circuit_lowered", level=level.value, ops_in=circuit.size, ops_out=lowered.size, work=work_count)
    return lowered


def build_preparation(n: int) -> Circuit:
    """|0...0>|0> -> |psi>|->: X then H on the oracle target, H on the register"""
    _check_register(n)
    builder = CircuitBuilder(n + 1).x(n)
    for qubit in range(n + 1):
        builder.h(qubit)
    return builder.build()


def build_grover_iteration(n: int, i0: int) -> Circuit:
    """G = diffusion . oracle on register + oracle target"""
    _check_register(n, i0)
    return CircuitBuilder(n + 1).extend(oracle_gates(n, i0)).extend(diffusion_gates(n)).build()


def assemble_grover_circuit(n: int, i0: int, k: int, level: LoweringLevel) -> Circuit:
    _check_register(n, i0)
    if k < 0:
        raise ParameterOutOfRangeException("iterations", f"iterations must be >= 0, got {k}")
    iteration = build_grover_iteration(n, i0)
    builder = CircuitBuilder(n + 1).extend(build_preparation(n))
    for _ in range(k):
        builder.extend(iteration)
    assembled = lower_circuit(builder.build(), level)
    logger.info("grover_circuit_assembled", n=n, target=i0, iterations=k, level=LoweringLevel(level).value,
                ops=assembled.size, work=assembled.num_work_qubits)
    return assembled


def predicted_gate_count(n: int) -> float:
    """pi (17n - 15) sqrt(2^n) + n + 2"""
    if n < 2:
        raise ParameterOutOfRangeException("n", "predicted gate count defined for n >= 2")
    return math.pi * (17 * n - 15) * math.sqrt(2.0 ** n) + n + 2
