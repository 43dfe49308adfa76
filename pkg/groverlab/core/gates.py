"""
Standard gates and in-place application to state vectors.

Kernels work on a contiguous complex buffer of shape (2^m,) or (2^m, B);
the optional trailing axis carries a batch of columns so that a whole
matrix can be pushed through a circuit in one pass. Amplitude pairs are
addressed by reshaping, never by building 2^m x 2^m matrices.
"""

from __future__ import annotations

from enum import Enum
from typing import Sequence

import numpy as np

from groverlab.config import settings
from groverlab.core.linalg import StateVector, UnitaryMatrix, is_unitary
from groverlab.exceptions.custom_exceptions import (
    InvalidGateException,
    NonUnitaryException,
    ParameterOutOfRangeException,
    ValidationException,
)


class GateKind(str, Enum):
    X = "x"
    H = "h"
    S = "s"
    T = "t"
    TDG = "tdg"
    CX = "cx"
    GPHASE = "gphase"

    @property
    def is_one_qubit(self) -> bool:
        return self in ONE_QUBIT_MATRICES


_INV_SQRT2 = 1.0 / np.sqrt(2.0)
_T_PHASE = np.exp(1j * np.pi / 4)

ONE_QUBIT_MATRICES: dict[GateKind, np.ndarray] = {
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=np.complex128) * _INV_SQRT2,
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=np.complex128),
    GateKind.T: np.array([[1, 0], [0, _T_PHASE]], dtype=np.complex128),
    GateKind.TDG: np.array([[1, 0], [0, np.conj(_T_PHASE)]], dtype=np.complex128),
}
for _matrix in ONE_QUBIT_MATRICES.values():
    _matrix.setflags(write=False)


def gate_matrix(kind: GateKind, num_controls: int = 1, factor: complex = 1.0) -> UnitaryMatrix:
    """Textbook matrix of a fixed-size gate.

    CX with c controls is the 2^(c+1) identity with its last two rows
    swapped (U_CNOT for c=1, U_Toffoli for c=2). GPHASE is the 1x1 scalar.
    """
    kind = GateKind(kind)
    if kind.is_one_qubit:
        return UnitaryMatrix(ONE_QUBIT_MATRICES[kind])
    if kind is GateKind.CX:
        if num_controls < 1:
            raise InvalidGateException("cx needs at least one control")
        dim = 1 << (num_controls + 1)
        entries = np.eye(dim, dtype=np.complex128)
        entries[[dim - 2, dim - 1]] = entries[[dim - 1, dim - 2]]
        return UnitaryMatrix(entries)
    _check_unit(factor)
    return UnitaryMatrix([[factor]])


def _check_unit(factor: complex) -> None:
    if abs(abs(factor) - 1.0) > settings.amplitude_tol:
        raise NonUnitaryException(f"Phase factor {factor} is not of unit modulus")


def _check_qubit(qubit: int, num_qubits: int) -> None:
    if not 0 <= qubit < num_qubits:
        raise ParameterOutOfRangeException("qubit", f"Qubit index {qubit} out of range for {num_qubits} qubits")


def check_controls(controls: Sequence[int], target: int, num_qubits: int | None = None) -> None:
    """Validate a controlled-X signature"""
    if not controls:
        raise InvalidGateException("Controlled X needs at least one control")
    if len(set(controls)) != len(controls):
        raise InvalidGateException(f"Duplicate control in {list(controls)}")
    if target in controls:
        raise InvalidGateException(f"Target {target} overlaps controls {list(controls)}")
    if num_qubits is not None:
        for qubit in (*controls, target):
            _check_qubit(qubit, num_qubits)


# --- kernels (mutate buffer in place) ---------------------------------------

def one_qubit_kernel(buffer: np.ndarray, num_qubits: int, qubit: int, matrix: np.ndarray) -> None:
    view = buffer.reshape(1 << qubit, 2, 1 << (num_qubits - qubit - 1), -1)
    u00, u01, u10, u11 = matrix[0, 0], matrix[0, 1], matrix[1, 0], matrix[1, 1]
    if u01 == 0 and u10 == 0:
        if u00 != 1:
            view[:, 0] *= u00
        if u11 != 1:
            view[:, 1] *= u11
        return
    if u00 == 0 and u11 == 0 and u01 == 1 and u10 == 1:
        view[:, [0, 1]] = view[:, [1, 0]]
        return
    low = view[:, 0].copy()
    high = view[:, 1]
    view[:, 0] = u00 * low + u01 * high
    view[:, 1] = u10 * low + u11 * high


def controlled_x_kernel(buffer: np.ndarray, num_qubits: int, controls: Sequence[int], target: int) -> None:
    tensor = buffer.reshape((2,) * num_qubits + (-1,))
    index: list = [slice(None)] * num_qubits
    for control in controls:
        index[control] = 1
    index[target] = 0
    low = tuple(index)
    index[target] = 1
    high = tuple(index)
    swap = tensor[low].copy()
    tensor[low] = tensor[high]
    tensor[high] = swap


def global_phase_kernel(buffer: np.ndarray, factor: complex) -> None:
    buffer *= factor


def writable_buffer(state: StateVector | np.ndarray) -> np.ndarray:
    """Contiguous writable copy suitable for the kernels"""
    amps = state.amps if isinstance(state, StateVector) else state
    return np.array(amps, dtype=np.complex128, order="C", copy=True)


# --- state-level operations -------------------------------------------------

def apply_one_qubit(state: StateVector, qubit: int, matrix) -> StateVector:
    """Apply a 2x2 matrix to one qubit; other bits untouched"""
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.shape != (2, 2):
        raise ValidationException(f"One-qubit gate must be 2x2, got {matrix.shape}")
    _check_qubit(qubit, state.num_qubits)
    if settings.debug and not is_unitary(matrix):
        raise NonUnitaryException()
    buffer = writable_buffer(state)
    one_qubit_kernel(buffer, state.num_qubits, qubit, matrix)
    return StateVector(buffer, normalized=False)


def apply_controlled_x(state: StateVector, controls: Sequence[int], target: int) -> StateVector:
    """Flip target wherever every control bit is 1"""
    check_controls(controls, target, state.num_qubits)
    buffer = writable_buffer(state)
    controlled_x_kernel(buffer, state.num_qubits, controls, target)
    return StateVector(buffer, normalized=False)


def apply_global_phase(state: StateVector, factor: complex) -> StateVector:
    _check_unit(factor)
    buffer = writable_buffer(state)
    global_phase_kernel(buffer, factor)
    return StateVector(buffer, normalized=False)
