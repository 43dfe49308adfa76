"""
Circuit intermediate representation, text format, execution,
dense-matrix extraction, equivalence checking and gate census.

Text format, one statement per line, '#' starts a comment:

    qubits <m>            required, first statement
    work <k>              optional, default 0; work qubits take the highest indices
    x|h|s|t|tdg <q>
    cx <c> <t>
    ccx <c1> <c2> <t>
    ncx <c1> ... <ck> <t>
    gphase i|-1|-i
"""

from __future__ import annotations

import re
from enum import Enum
from typing import Iterable, Literal, Optional, Sequence

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, model_validator

from groverlab.config import settings
from groverlab.core.gates import (
    ONE_QUBIT_MATRICES,
    GateKind,
    check_controls,
    controlled_x_kernel,
    global_phase_kernel,
    one_qubit_kernel,
    writable_buffer,
)
from groverlab.core.linalg import Operand, StateVector, UnitaryMatrix, as_array, identity
from groverlab.exceptions.custom_exceptions import (
    CircuitSyntaxException,
    DimensionMismatchException,
    InvalidGateException,
    ParameterOutOfRangeException,
    SizeLimitException,
)
from groverlab.schemas.circuit_schemas import GateCensus

logger = structlog.get_logger(__name__)

PhaseToken = Literal["i", "-1", "-i"]

PHASE_FACTORS: dict[str, complex] = {"i": 1j, "-1": -1.0 + 0j, "-i": -1j}


class Gate(BaseModel):
    """One gate application"""
    model_config = ConfigDict(frozen=True)

    kind: GateKind
    controls: tuple[int, ...] = ()
    target: Optional[int] = None
    phase: Optional[PhaseToken] = None

    @model_validator(mode="after")
    def _check_kind(self) -> "Gate":
        if self.kind is GateKind.GPHASE:
            if self.phase is None or self.controls or self.target is not None:
                raise InvalidGateException("gphase takes exactly one phase token and no qubits")
            return self
        if self.target is None or self.target < 0:
            raise InvalidGateException(f"{self.kind.value} needs a non-negative target")
        if self.phase is not None:
            raise InvalidGateException(f"{self.kind.value} takes no phase")
        if self.kind is GateKind.CX:
            check_controls(self.controls, self.target)
            if min(self.controls) < 0:
                raise InvalidGateException("Negative control index")
        elif self.controls:
            raise InvalidGateException(f"{self.kind.value} takes no controls")
        return self

    @classmethod
    def single(cls, kind: GateKind, target: int) -> "Gate":
        return cls(kind=kind, target=target)

    @classmethod
    def mcx(cls, controls: Sequence[int], target: int) -> "Gate":
        return cls(kind=GateKind.CX, controls=tuple(controls), target=target)

    @classmethod
    def gphase(cls, phase: PhaseToken) -> "Gate":
        return cls(kind=GateKind.GPHASE, phase=phase)

    @property
    def num_controls(self) -> int:
        return len(self.controls)

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + ((self.target,) if self.target is not None else ())

    @property
    def mnemonic(self) -> str:
        if self.kind is GateKind.CX:
            return {1: "cx", 2: "ccx"}.get(self.num_controls, "ncx")
        return self.kind.value

    @property
    def is_elementary(self) -> bool:
        return self.kind.is_one_qubit or (self.kind is GateKind.CX and self.num_controls == 1)

    def shifted(self, offset: int) -> "Gate":
        if self.kind is GateKind.GPHASE:
            return self
        return Gate(
            kind=self.kind,
            controls=tuple(control + offset for control in self.controls),
            target=self.target + offset,
        )

    def to_text(self) -> str:
        if self.kind is GateKind.GPHASE:
            return f"gphase {self.phase}"
        return " ".join([self.mnemonic, *(str(q) for q in self.qubits)])


class Circuit(BaseModel):
    """Ordered gate sequence over main qubits followed by work qubits"""
    model_config = ConfigDict(frozen=True)

    num_qubits: int = Field(ge=0)
    num_work_qubits: int = Field(default=0, ge=0)
    ops: tuple[Gate, ...] = ()

    @model_validator(mode="after")
    def _check_indices(self) -> "Circuit":
        total = self.total_qubits
        for position, gate in enumerate(self.ops):
            for qubit in gate.qubits:
                if qubit >= total:
                    raise ParameterOutOfRangeException(
                        "qubit", f"Gate {position} ({gate.to_text()}) references qubit {qubit} >= {total}"
                    )
        return self

    @property
    def total_qubits(self) -> int:
        return self.num_qubits + self.num_work_qubits

    @property
    def size(self) -> int:
        return len(self.ops)

    def with_work_qubits(self, num_work_qubits: int) -> "Circuit":
        return Circuit(num_qubits=self.num_qubits, num_work_qubits=num_work_qubits, ops=self.ops)

    def then(self, other: "Circuit") -> "Circuit":
        """Sequential composition on a common register"""
        if other.num_qubits != self.num_qubits:
            raise DimensionMismatchException(self.num_qubits, other.num_qubits)
        return Circuit(
            num_qubits=self.num_qubits,
            num_work_qubits=max(self.num_work_qubits, other.num_work_qubits),
            ops=self.ops + other.ops,
        )


class CircuitBuilder:
    """Mutable builder producing immutable circuits"""

    def __init__(self, num_qubits: int, num_work_qubits: int = 0):
        self.num_qubits = num_qubits
        self.num_work_qubits = num_work_qubits
        self._ops: list[Gate] = []

    def append(self, gate: Gate) -> "CircuitBuilder":
        self._ops.append(gate)
        return self

    def x(self, qubit: int) -> "CircuitBuilder":
        return self.append(Gate.single(GateKind.X, qubit))

    def h(self, qubit: int) -> "CircuitBuilder":
        return self.append(Gate.single(GateKind.H, qubit))

    def s(self, qubit: int) -> "CircuitBuilder":
        return self.append(Gate.single(GateKind.S, qubit))

    def t(self, qubit: int) -> "CircuitBuilder":
        return self.append(Gate.single(GateKind.T, qubit))

    def tdg(self, qubit: int) -> "CircuitBuilder":
        return self.append(Gate.single(GateKind.TDG, qubit))

    def cx(self, control: int, target: int) -> "CircuitBuilder":
        return self.append(Gate.mcx((control,), target))

    def ccx(self, control1: int, control2: int, target: int) -> "CircuitBuilder":
        return self.append(Gate.mcx((control1, control2), target))

    def mcx(self, controls: Sequence[int], target: int) -> "CircuitBuilder":
        return self.append(Gate.mcx(controls, target))

    def gphase(self, phase: PhaseToken) -> "CircuitBuilder":
        return self.append(Gate.gphase(phase))

    def extend(self, gates: Iterable[Gate] | Circuit, offset: int = 0) -> "CircuitBuilder":
        """Append gates, shifting every qubit index by offset"""
        ops = gates.ops if isinstance(gates, Circuit) else gates
        self._ops.extend(gate.shifted(offset) if offset else gate for gate in ops)
        return self

    def build(self) -> Circuit:
        return Circuit(num_qubits=self.num_qubits, num_work_qubits=self.num_work_qubits, ops=tuple(self._ops))


# --- text format ------------------------------------------------------------

_INDEX_RE = re.compile(r"^[0-9]+$")
_ARITY = {"x": 1, "h": 1, "s": 1, "t": 1, "tdg": 1, "cx": 2, "ccx": 3}


def _parse_indices(line_no: int, tokens: Sequence[str]) -> list[int]:
    for token in tokens:
        if not _INDEX_RE.match(token):
            raise CircuitSyntaxException(line_no, f"expected a qubit index, got '{token}'")
    return [int(token) for token in tokens]


def _parse_header(line_no: int, tokens: list[str], keyword: str) -> int:
    if len(tokens) != 2 or tokens[0] != keyword:
        raise CircuitSyntaxException(line_no, f"expected '{keyword} <count>'")
    return _parse_indices(line_no, tokens[1:])[0]


def _parse_gate(line_no: int, tokens: list[str], total: int) -> Gate:
    mnemonic, args = tokens[0], tokens[1:]
    if mnemonic == "gphase":
        if len(args) != 1 or args[0] not in PHASE_FACTORS:
            raise CircuitSyntaxException(line_no, "gphase takes one of: i, -1, -i")
        return Gate.gphase(args[0])
    if mnemonic in _ARITY:
        if len(args) != _ARITY[mnemonic]:
            raise CircuitSyntaxException(line_no, f"{mnemonic} takes {_ARITY[mnemonic]} qubit index(es)")
    elif mnemonic == "ncx":
        if len(args) < 2:
            raise CircuitSyntaxException(line_no, "ncx takes at least one control and a target")
    else:
        raise CircuitSyntaxException(line_no, f"unknown statement '{mnemonic}'")

    indices = _parse_indices(line_no, args)
    for index in indices:
        if index >= total:
            raise CircuitSyntaxException(line_no, f"qubit {index} out of declared range (0..{total - 1})")
    try:
        if mnemonic in ("cx", "ccx", "ncx"):
            return Gate.mcx(indices[:-1], indices[-1])
        return Gate.single(GateKind(mnemonic), indices[0])
    except InvalidGateException as exc:
        raise CircuitSyntaxException(line_no, exc.message) from exc


def parse_circuit(text: str) -> Circuit:
    """Parse the line-based circuit format"""
    num_qubits: Optional[int] = None
    num_work = 0
    seen_work = False
    seen_gate = False
    ops: list[Gate] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        if num_qubits is None:
            num_qubits = _parse_header(line_no, tokens, "qubits")
            continue
        if tokens[0] == "work":
            if seen_gate or seen_work:
                raise CircuitSyntaxException(line_no, "'work' must directly follow 'qubits'")
            num_work = _parse_header(line_no, tokens, "work")
            seen_work = True
            continue
        if tokens[0] == "qubits":
            raise CircuitSyntaxException(line_no, "duplicate 'qubits' header")
        seen_gate = True
        ops.append(_parse_gate(line_no, tokens, num_qubits + num_work))

    if num_qubits is None:
        raise CircuitSyntaxException(1, "missing 'qubits' header")
    logger.debug("circuit_parsed", qubits=num_qubits, work=num_work, ops=len(ops))
    return Circuit(num_qubits=num_qubits, num_work_qubits=num_work, ops=tuple(ops))


def serialize_circuit(circuit: Circuit) -> str:
    """Canonical text: lowercase mnemonics, single spaces, one gate per line"""
    lines = [f"qubits {circuit.num_qubits}"]
    if circuit.num_work_qubits:
        lines.append(f"work {circuit.num_work_qubits}")
    lines.extend(gate.to_text() for gate in circuit.ops)
    return "\n".join(lines) + "\n"


# --- execution --------------------------------------------------------------

def apply_gate(buffer: np.ndarray, num_qubits: int, gate: Gate) -> None:
    if gate.kind is GateKind.CX:
        controlled_x_kernel(buffer, num_qubits, gate.controls, gate.target)
    elif gate.kind is GateKind.GPHASE:
        global_phase_kernel(buffer, PHASE_FACTORS[gate.phase])
    else:
        one_qubit_kernel(buffer, num_qubits, gate.target, ONE_QUBIT_MATRICES[gate.kind])


def execute(circuit: Circuit, buffer: np.ndarray) -> np.ndarray:
    """Apply the circuit in place to a (2^m,) or (2^m, B) buffer"""
    for gate in circuit.ops:
        apply_gate(buffer, circuit.total_qubits, gate)
    return buffer


def run_circuit(circuit: Circuit, state: StateVector) -> StateVector:
    if state.num_qubits != circuit.total_qubits:
        raise DimensionMismatchException(circuit.total_qubits, state.num_qubits)
    buffer = execute(circuit, writable_buffer(state))
    return StateVector(buffer, normalized=False)


def _check_dense_size(circuit: Circuit) -> None:
    if circuit.total_qubits > settings.max_dense_qubits:
        raise SizeLimitException(
            f"Dense matrices limited to {settings.max_dense_qubits} qubits, circuit has {circuit.total_qubits}"
        )


def circuit_matrix(circuit: Circuit) -> UnitaryMatrix:
    """Column j is the circuit applied to basis state |j>"""
    _check_dense_size(circuit)
    buffer = execute(circuit, identity(1 << circuit.total_qubits))
    return UnitaryMatrix(buffer)


def _register_columns(circuit: Circuit) -> np.ndarray:
    _check_dense_size(circuit)
    work_dim = 1 << circuit.num_work_qubits
    main_dim = 1 << circuit.num_qubits
    buffer = np.zeros((main_dim * work_dim, main_dim), dtype=np.complex128)
    buffer[np.arange(main_dim) * work_dim, np.arange(main_dim)] = 1.0
    return execute(circuit, buffer).reshape(main_dim, work_dim, main_dim)


def register_matrix(circuit: Circuit) -> UnitaryMatrix:
    """Action on the main qubits with work qubits |0> on input and output"""
    return UnitaryMatrix(_register_columns(circuit)[:, 0, :])


def work_leakage(circuit: Circuit) -> float:
    """Largest amplitude left on work != 0 over all main basis inputs"""
    if circuit.num_work_qubits == 0:
        return 0.0
    return float(np.max(np.abs(_register_columns(circuit)[:, 1:, :])))


# --- equivalence and census -------------------------------------------------

class EquivalenceMode(str, Enum):
    EXACT = "exact"
    GLOBAL_PHASE = "global-phase"


def equivalent(
    a: Operand,
    b: Operand,
    mode: EquivalenceMode = EquivalenceMode.EXACT,
    eps: Optional[float] = None,
) -> bool:
    left, right = as_array(a), as_array(b)
    if left.shape != right.shape:
        raise DimensionMismatchException(left.size, right.size)
    tol = settings.matrix_tol if eps is None else eps
    if EquivalenceMode(mode) is EquivalenceMode.EXACT:
        return bool(np.max(np.abs(left - right)) < tol)

    # witness from the largest-modulus entry of b
    pivot = np.unravel_index(np.argmax(np.abs(right)), right.shape)
    if abs(right[pivot]) < tol:
        return bool(np.max(np.abs(left)) < tol)
    ratio = left[pivot] / right[pivot]
    if abs(ratio) < tol:
        return False
    phase = ratio / abs(ratio)
    return bool(np.max(np.abs(left - phase * right)) < tol)


def gate_census(circuit: Circuit) -> GateCensus:
    counts: dict[str, int] = {}
    elementary = non_elementary = 0
    for gate in circuit.ops:
        counts[gate.mnemonic] = counts.get(gate.mnemonic, 0) + 1
        if gate.is_elementary:
            elementary += 1
        elif gate.kind is GateKind.CX:
            non_elementary += 1
    return GateCensus(counts=dict(sorted(counts.items())), elementary=elementary, non_elementary=non_elementary)
