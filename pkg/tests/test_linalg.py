import math

import numpy as np
import pytest

from groverlab.core.linalg import (
    StateVector,
    UnitaryMatrix,
    basis_state,
    dagger,
    identity,
    inner_product,
    is_unitary,
    norm,
    outer_product,
    tensor_product,
    uniform_state,
)
from groverlab.exceptions.custom_exceptions import (
    DimensionMismatchException,
    NonFiniteAmplitudeException,
    NonUnitaryException,
    ValidationException,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)
HADAMARD = np.array([[1, 1], [1, -1]]) * INV_SQRT2


class TestStateVector:
    def test_basis_ordering_qubit_zero_is_most_significant(self):
        state = basis_state(3, 5)
        assert state.num_qubits == 3
        assert state[5] == 1
        assert state.to_ket() == "1.0000|101>"

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ValidationException):
            StateVector([1, 0, 0])

    def test_rejects_unnormalised(self):
        with pytest.raises(ValidationException):
            StateVector([1, 1])

    def test_unnormalised_allowed_on_request(self):
        assert StateVector([1, 1], normalized=False).dim == 2

    def test_rejects_nan(self):
        with pytest.raises(NonFiniteAmplitudeException):
            StateVector([np.nan, 0], normalized=False)

    def test_amplitudes_are_read_only(self):
        state = uniform_state(2)
        with pytest.raises(ValueError):
            state.amps[0] = 0
        copy = state.copy_amps()
        copy[0] = 0
        assert state[0] == pytest.approx(0.5)

    def test_uniform_state(self):
        np.testing.assert_allclose(uniform_state(3).amps, np.full(8, 1 / math.sqrt(8)))

    def test_basis_index_out_of_range(self):
        with pytest.raises(ValidationException):
            basis_state(2, 4)


class TestProducts:
    def test_tensor_of_kets(self):
        ket = tensor_product([1, 0], [0, 1])
        assert ket.shape == (4, 1)
        np.testing.assert_array_equal(ket[:, 0], [0, 1, 0, 0])

    def test_tensor_hadamards(self):
        hh = tensor_product(HADAMARD, HADAMARD)
        np.testing.assert_allclose(hh @ np.array([1, 0, 0, 0]), np.full(4, 0.5), atol=1e-12)

    def test_inner_product_is_conjugate_linear_in_bra(self):
        assert inner_product([1j, 0], [1, 0]) == pytest.approx(-1j)

    def test_inner_product_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchException):
            inner_product([1, 0], [1, 0, 0, 0])

    def test_outer_product_projector(self):
        ket = np.array([INV_SQRT2, INV_SQRT2])
        projector = outer_product(ket, ket)
        np.testing.assert_allclose(projector, np.full((2, 2), 0.5), atol=1e-12)
        np.testing.assert_allclose(projector @ projector, projector, atol=1e-12)

    def test_diffusion_from_outer_product(self):
        psi = uniform_state(2).amps
        diffusion = 2 * outer_product(psi, psi) - identity(4)
        np.testing.assert_allclose(diffusion @ np.array([1, 0, 0, 0]), [-0.5, 0.5, 0.5, 0.5], atol=1e-12)

    def test_norm_and_dagger(self):
        assert norm([3, 4j]) == pytest.approx(5.0)
        np.testing.assert_array_equal(dagger([[1, 1j], [0, 1]]), [[1, 0], [-1j, 1]])


class TestUnitarity:
    def test_hadamard_is_unitary(self):
        assert is_unitary(HADAMARD)

    def test_scaled_matrix_is_not(self):
        assert not is_unitary(2 * np.eye(2))

    def test_unitary_matrix_check(self):
        with pytest.raises(NonUnitaryException):
            UnitaryMatrix([[1, 1], [0, 1]], check_unitary=True)

    def test_product_of_random_gates_is_unitary(self, rng):
        fixed = [HADAMARD, np.array([[0, 1], [1, 0]]), np.diag([1, 1j]), np.diag([1, np.exp(1j * np.pi / 4)])]
        product = np.eye(2, dtype=complex)
        for choice in rng.integers(0, len(fixed), size=50):
            product = fixed[choice] @ product
        assert is_unitary(product, eps=1e-10)

    def test_matmul_on_state(self):
        flipped = UnitaryMatrix([[0, 1], [1, 0]]) @ basis_state(1, 0)
        assert isinstance(flipped, StateVector)
        assert flipped[1] == 1


class TestAlgebraicProperties:
    def test_x_tensor_identity_display(self):
        x = np.array([[0, 1], [1, 0]])
        expected = np.block([[np.zeros((3, 3)), np.eye(3)], [np.eye(3), np.zeros((3, 3))]])
        np.testing.assert_array_equal(tensor_product(x, identity(3)), expected)

    def test_raising_operator_on_superposition(self):
        raising = outer_product([0, 1], [1, 0])
        np.testing.assert_allclose(raising @ np.array([0.6, 0.8]), [0, 0.6], atol=1e-15)

    def test_tensor_is_associative(self, rng):
        a, b, c = (rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3)) for _ in range(3))
        left = tensor_product(tensor_product(a, b), c)
        right = tensor_product(a, tensor_product(b, c))
        np.testing.assert_allclose(left, right, atol=1e-14)

    def test_mixed_product(self, random_unitary, random_state):
        a, b = random_unitary(2), random_unitary(4)
        v, w = random_state(1), random_state(2)
        np.testing.assert_allclose(
            tensor_product(a, b) @ tensor_product(v, w), tensor_product(a @ v, b @ w), atol=1e-12
        )

    def test_inner_product_conjugate_symmetry(self, random_state):
        for _ in range(10):
            psi, phi = random_state(3), random_state(3)
            assert inner_product(psi, phi) == pytest.approx(inner_product(phi, psi).conjugate(), abs=1e-14)

    def test_tensor_of_unitaries_is_unitary(self, random_unitary):
        for dims in [(2, 2), (2, 4), (4, 8)]:
            assert is_unitary(tensor_product(random_unitary(dims[0]), random_unitary(dims[1])))
