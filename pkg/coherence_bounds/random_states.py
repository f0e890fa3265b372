"""Seeded random states, unitaries and measurements for the audits.

Every trial owns a generator derived from ``SeedSequence(seed, spawn_key=(phase, trial))``
so a batch gives the same draws whichever worker runs it.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from .errors import DimensionError, InvalidStateError
from .measurement import Measurement, measurement_from_basis
from .qmatrix import BipartiteState, ComplexMatrix, DensityMatrix, as_matrix, ket, tensor


RNG_ALGORITHM = "PCG64/SeedSequence"

PHASE_THEOREMS = 0
PHASE_SATURATION = 1
PHASE_NULL_PRODUCT = 2
PHASE_NULL_BLOCK = 3
PHASE_NULL_GENERIC = 4


def trial_rng(seed: int, phase: int, trial: int) -> np.random.Generator:
    sequence = np.random.SeedSequence(seed, spawn_key=(phase, trial))
    return np.random.Generator(np.random.PCG64(sequence))


def ginibre(shape: tuple[int, ...], rng: np.random.Generator) -> npt.NDArray[np.complex128]:
    """Standard complex Gaussian entries, E|z|^2 = 1."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_unitaries(dim: int, count: int, rng: np.random.Generator) -> npt.NDArray[np.complex128]:
    """Stack of ``count`` Haar unitaries: QR of Ginibre matrices with the R-diagonal phase fix."""
    z = ginibre((count, dim, dim), rng)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diag / np.abs(diag)
    return q * phases[:, None, :]


def random_unitary(dim: int, rng: np.random.Generator) -> ComplexMatrix:
    return random_unitaries(dim, 1, rng)[0]


def random_density(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """Hilbert-Schmidt random state GG†/Tr(GG†)."""
    g = ginibre((dim, dim), rng)
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def random_pure(dim_a: int, dim_b: int, rng: np.random.Generator) -> BipartiteState:
    psi = ginibre((dim_a * dim_b,), rng)
    return BipartiteState.from_vector(psi, dim_a, dim_b)


def random_mixed(dim_a: int, dim_b: int, rng: np.random.Generator) -> BipartiteState:
    return BipartiteState(random_density(dim_a * dim_b, rng), dim_a, dim_b)


def random_product(dim_a: int, dim_b: int, rng: np.random.Generator) -> BipartiteState:
    return BipartiteState.from_product(random_density(dim_a, rng), random_density(dim_b, rng))


def random_block_diagonal_b(dim_a: int, dim_b: int, rng: np.random.Generator) -> BipartiteState:
    """Sum_k w_k rho_k ⊗ |k><k|: no coherence between Bob's basis states."""
    weights = rng.dirichlet(np.ones(dim_b))
    rho = np.zeros((dim_a * dim_b, dim_a * dim_b), dtype=np.complex128)
    for k in range(dim_b):
        bob = np.outer(ket(k, dim_b), ket(k, dim_b))
        rho += weights[k] * tensor(random_density(dim_a, rng), bob)
    return BipartiteState(rho, dim_a, dim_b)


def random_classical_quantum(dim_a: int, dim_b: int, rng: np.random.Generator) -> BipartiteState:
    """Sum_i p_i |i><i| ⊗ rho_i, classical on Alice's side."""
    weights = rng.dirichlet(np.ones(dim_a))
    rho = np.zeros((dim_a * dim_b, dim_a * dim_b), dtype=np.complex128)
    for i in range(dim_a):
        alice = np.outer(ket(i, dim_a), ket(i, dim_a))
        rho += weights[i] * tensor(alice, random_density(dim_b, rng))
    return BipartiteState(rho, dim_a, dim_b)


def random_projective(dim: int, rng: np.random.Generator) -> Measurement:
    return measurement_from_basis(random_unitary(dim, rng), label="haar")


def schmidt_family_state(lambdas: npt.ArrayLike, u_a: npt.ArrayLike) -> BipartiteState:
    """|phi> = sum_j lambda_j U_A|j> ⊗ |j> with real coefficients."""
    lam = np.asarray(lambdas, dtype=np.float64).ravel()
    u = as_matrix(u_a)
    if u.shape[0] != lam.size:
        raise DimensionError(f"u_a has dimension {u.shape[0]}, expected {lam.size}")
    norm = float(np.sum(lam**2))
    if abs(norm - 1.0) > 1e-10:
        raise InvalidStateError(f"Schmidt coefficients must satisfy sum lambda^2 = 1, got {norm:.12g}")
    # psi[a, b] = U[a, b] * lambda_b
    psi = (u * lam[None, :]).ravel()
    return BipartiteState.from_vector(psi, lam.size, lam.size)


def random_schmidt_family(
    dim: int, rng: np.random.Generator
) -> tuple[BipartiteState, ComplexMatrix, npt.NDArray[np.float64]]:
    lam = np.abs(rng.standard_normal(dim))
    lam = lam / np.linalg.norm(lam)
    u_a = random_unitary(dim, rng)
    return schmidt_family_state(lam, u_a), u_a, lam
