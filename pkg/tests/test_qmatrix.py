import math

import numpy as np
import pytest

from coherence_bounds.errors import DimensionError, InvalidStateError
from coherence_bounds.qmatrix import (
    PAULI_X,
    PAULI_Z,
    BipartiteState,
    dephase,
    hermitian_eig,
    is_unitary,
    maximally_mixed,
    partial_trace_matrix,
    projector,
    relative_entropy,
    tensor,
    validate_density_matrix,
    von_neumann_entropy,
)
from coherence_bounds.random_states import random_density, random_mixed


def test_partial_trace_of_product_recovers_factors():
    rng = np.random.default_rng(0)
    rho_a = random_density(2, rng)
    rho_b = random_density(3, rng)
    s = BipartiteState.from_product(rho_a, rho_b)
    assert np.allclose(s.reduced("A"), rho_a, atol=1e-12)
    assert np.allclose(s.reduced("B"), rho_b, atol=1e-12)


def test_partial_trace_rejects_wrong_dimension():
    with pytest.raises(DimensionError):
        partial_trace_matrix(np.eye(6) / 6, 2, 2, "A")


def test_bipartite_state_dimension_mismatch():
    with pytest.raises(DimensionError):
        BipartiteState(maximally_mixed(4), 2, 3)


@pytest.mark.parametrize(
    "matrix",
    [
        np.array([[0.5, 0.5], [0.0, 0.5]]),  # not Hermitian
        np.eye(2),  # trace 2
        np.diag([1.5, -0.5]),  # negative eigenvalue
    ],
)
def test_validate_density_matrix_rejects(matrix):
    with pytest.raises(InvalidStateError):
        validate_density_matrix(matrix)


def test_eigendecomposition_reconstructs_and_is_unitary():
    rng = np.random.default_rng(1)
    for _ in range(200):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        h = g + g.conj().T
        spectrum = hermitian_eig(h)
        assert np.max(np.abs(spectrum.reconstruct() - h)) <= 1e-9
        assert is_unitary(spectrum.eigenvectors)
        assert np.all(np.diff(spectrum.eigenvalues) >= 0)


@pytest.mark.slow
def test_eigendecomposition_batch_1000():
    rng = np.random.default_rng(2)
    for _ in range(1000):
        h = random_density(4, rng)
        spectrum = hermitian_eig(h)
        assert np.max(np.abs(spectrum.reconstruct() - h)) <= 1e-9
        assert is_unitary(spectrum.eigenvectors)


def test_entropy_extremes():
    assert von_neumann_entropy(maximally_mixed(4)) == pytest.approx(2.0, abs=1e-12)
    assert von_neumann_entropy(projector([1, 1j])) == pytest.approx(0.0, abs=1e-12)


def test_entropy_clamps_tiny_negative_eigenvalues():
    rho = np.diag([1.0 + 5e-11, -5e-11])
    assert von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-9)


def test_relative_entropy_to_maximally_mixed():
    rng = np.random.default_rng(3)
    rho = random_density(3, rng)
    expected = math.log2(3) - von_neumann_entropy(rho)
    assert relative_entropy(rho, maximally_mixed(3)) == pytest.approx(expected, abs=1e-9)


def test_relative_entropy_support_violation_is_infinite():
    assert relative_entropy(maximally_mixed(2), projector([1, 0])) == math.inf
    assert relative_entropy(projector([1, 0]), projector([1, 0])) == pytest.approx(0.0, abs=1e-12)


def test_dephase_removes_coherences():
    rho = projector([1, 1])
    assert np.allclose(dephase(rho), np.eye(2) / 2)


def test_blocks_layout_matches_kron():
    a = np.array([[0.7, 0.1], [0.1, 0.3]])
    b = 0.5 * (np.eye(2) + 0.3 * PAULI_X + 0.2 * PAULI_Z)
    s = BipartiteState(tensor(a, b), 2, 2)
    blocks = s.blocks()
    assert np.allclose(blocks[0, :, 1, :], a[0, 1] * b)


def test_random_mixed_is_valid():
    rng = np.random.default_rng(4)
    s = random_mixed(2, 2, rng)
    assert abs(np.trace(s.rho) - 1.0) <= 1e-12
    assert np.min(np.linalg.eigvalsh(s.rho)) >= 0.0


def test_validate_density_matrix_rejects_nan():
    with pytest.raises(InvalidStateError, match="non-finite"):
        validate_density_matrix([[0.5, np.nan], [np.nan, 0.5]])


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(InvalidStateError):
        hermitian_eig([[1.0, 2.0], [0.0, 1.0]])


def test_eigendecomposition_up_to_dim_8():
    rng = np.random.default_rng(5)
    for dim in range(1, 9):
        for _ in range(25):
            g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            h = g + g.conj().T
            spectrum = hermitian_eig(h)
            assert np.max(np.abs(spectrum.reconstruct() - h)) <= 1e-9
            assert is_unitary(spectrum.eigenvectors)


def test_tensor_examples():
    assert np.allclose(tensor(PAULI_Z, PAULI_Z), np.diag([1, -1, -1, 1]))
    expected = np.zeros((4, 4))
    expected[:2, :2] = 0.5
    assert np.allclose(tensor(projector([1, 0]), projector([1, 1])), expected)


def test_entropy_is_additive_on_products():
    rng = np.random.default_rng(6)
    for _ in range(20):
        rho_a = random_density(2, rng)
        rho_b = random_density(3, rng)
        joint = von_neumann_entropy(tensor(rho_a, rho_b))
        assert joint == pytest.approx(von_neumann_entropy(rho_a) + von_neumann_entropy(rho_b), abs=1e-9)


def test_relative_entropy_to_dephased_state():
    rng = np.random.default_rng(7)
    for dim in (2, 3, 4):
        rho = random_density(dim, rng)
        expected = von_neumann_entropy(dephase(rho)) - von_neumann_entropy(rho)
        assert relative_entropy(rho, dephase(rho)) == pytest.approx(expected, abs=1e-9)


def test_relative_entropy_to_dephased_qubit_value():
    def h(p):
        return -p * math.log2(p) - (1 - p) * math.log2(1 - p)

    rho = np.array([[0.75, 0.25], [0.25, 0.25]])
    expected = h(0.75) - h((2 + math.sqrt(2)) / 4)
    assert relative_entropy(rho, dephase(rho)) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.2104, abs=1e-4)
