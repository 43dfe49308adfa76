"""
Complex linear algebra primitives: state vectors, dense matrices,
tensor, inner and outer products.

Basis ordering: index i of a state over m qubits is the binary string
j1 j2 ... jm with qubit 0 the most significant bit, so |101> = |5>.
"""

from __future__ import annotations

from typing import Union

import numpy as np

from groverlab.config import settings
from groverlab.exceptions.custom_exceptions import (
    DimensionMismatchException,
    NonFiniteAmplitudeException,
    NonUnitaryException,
    ValidationException,
)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _num_qubits_for(length: int) -> int:
    if length < 1 or length & (length - 1):
        raise ValidationException(f"Length {length} is not a power of two")
    return length.bit_length() - 1


class StateVector:
    """Read-only pure state over the 2^m computational basis"""

    __slots__ = ("_amps", "_num_qubits")

    def __init__(self, amps, normalized: bool = True):
        array = np.array(amps, dtype=np.complex128).reshape(-1)
        self._num_qubits = _num_qubits_for(array.size)
        if not np.all(np.isfinite(array)):
            raise NonFiniteAmplitudeException()
        if normalized and abs(np.linalg.norm(array) - 1.0) > settings.amplitude_tol * max(1.0, np.sqrt(array.size)):
            raise ValidationException(f"State norm {np.linalg.norm(array):.15g} differs from 1")
        self._amps = _frozen(array)

    @property
    def num_qubits(self) -> int:
        return self._num_qubits

    @property
    def amps(self) -> np.ndarray:
        return self._amps

    @property
    def dim(self) -> int:
        return self._amps.size

    def __len__(self) -> int:
        return self._amps.size

    def __getitem__(self, index: int) -> complex:
        return complex(self._amps[index])

    def copy_amps(self) -> np.ndarray:
        """Writable copy of the amplitudes, for kernels that work in place"""
        return self._amps.copy()

    def probabilities(self) -> np.ndarray:
        return np.abs(self._amps) ** 2

    def allclose(self, other: "StateVector", atol: float | None = None) -> bool:
        if other.dim != self.dim:
            return False
        tol = settings.amplitude_tol if atol is None else atol
        return bool(np.max(np.abs(self._amps - other.amps)) < tol)

    def to_ket(self, precision: int = 4, cutoff: float = 1e-9) -> str:
        """Human readable ket expansion, e.g. 0.7071|00> + 0.7071|11>"""
        terms = []
        for index in np.flatnonzero(np.abs(self._amps) > cutoff):
            amp = self._amps[index]
            label = format(int(index), f"0{self._num_qubits}b") if self._num_qubits else ""
            coeff = f"{amp.real:.{precision}f}" if abs(amp.imag) < cutoff else f"({amp:.{precision}f})"
            terms.append(f"{coeff}|{label}>")
        return " + ".join(terms) if terms else "0"

    def __repr__(self) -> str:
        return f"StateVector(num_qubits={self._num_qubits}, {self.to_ket()})"


class UnitaryMatrix:
    """Read-only dense square matrix of dimension 2^m"""

    __slots__ = ("_entries",)

    def __init__(self, entries, check_unitary: bool = False):
        array = np.array(entries, dtype=np.complex128)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ValidationException(f"Matrix must be square, got shape {array.shape}")
        _num_qubits_for(array.shape[0])
        if not np.all(np.isfinite(array)):
            raise NonFiniteAmplitudeException()
        if check_unitary and not is_unitary(array):
            raise NonUnitaryException()
        self._entries = _frozen(array)

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.dim.bit_length() - 1

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    def __matmul__(self, other):
        if isinstance(other, UnitaryMatrix):
            return UnitaryMatrix(self._entries @ other.entries)
        if isinstance(other, StateVector):
            return StateVector(self._entries @ other.amps, normalized=False)
        return self._entries @ np.asarray(other)

    def __repr__(self) -> str:
        return f"UnitaryMatrix(dim={self.dim})"


Operand = Union[StateVector, UnitaryMatrix, np.ndarray, list]


def as_array(value: Operand) -> np.ndarray:
    """Unwrap StateVector/UnitaryMatrix values to numpy arrays"""
    if isinstance(value, StateVector):
        return value.amps
    if isinstance(value, UnitaryMatrix):
        return value.entries
    return np.asarray(value, dtype=np.complex128)


def _as_column_matrix(value: Operand) -> np.ndarray:
    array = as_array(value)
    return array.reshape(-1, 1) if array.ndim == 1 else array


def basis_state(num_qubits: int, index: int) -> StateVector:
    """|index> over num_qubits qubits"""
    dim = 1 << num_qubits
    if not 0 <= index < dim:
        raise ValidationException(f"Basis index {index} outside [0, {dim})")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(amps)


def uniform_state(num_qubits: int) -> StateVector:
    """H^{(x)n}|0...0> = (1/sqrt N) sum_i |i>"""
    dim = 1 << num_qubits
    return StateVector(np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def dagger(matrix: Operand) -> np.ndarray:
    return as_array(matrix).conj().T


def tensor_product(a: Operand, b: Operand) -> np.ndarray:
    """Kronecker product; 1-D operands are treated as columns"""
    return np.kron(_as_column_matrix(a), _as_column_matrix(b))


def inner_product(bra: Operand, ket: Operand) -> complex:
    """<bra|ket>, conjugate-linear in the first argument"""
    left, right = as_array(bra).reshape(-1), as_array(ket).reshape(-1)
    if left.size != right.size:
        raise DimensionMismatchException(left.size, right.size)
    return complex(np.vdot(left, right))


def outer_product(ket: Operand, bra: Operand) -> np.ndarray:
    """|ket><bra|"""
    return np.outer(as_array(ket).reshape(-1), as_array(bra).reshape(-1).conj())


def norm(state: Operand) -> float:
    return float(np.linalg.norm(as_array(state)))


def is_unitary(matrix: Operand, eps: float | None = None) -> bool:
    """True iff max |U^dagger U - I| < eps"""
    entries = as_array(matrix)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        return False
    tol = settings.matrix_tol if eps is None else eps
    deviation = np.max(np.abs(entries.conj().T @ entries - identity(entries.shape[0])))
    return bool(deviation < tol)
