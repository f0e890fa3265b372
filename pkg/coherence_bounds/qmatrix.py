"""Dense complex linear algebra for small Hermitian operators.

All logarithms are base 2, so entropies come out in bits. Matrices are plain
``numpy`` arrays of dtype ``complex128``; the density-matrix and bipartite
invariants are enforced at the entry points that need them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt
import scipy.linalg
from scipy.special import entr

from .errors import ConvergenceError, DimensionError, InvalidStateError


logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]
RealVector = npt.NDArray[np.float64]
# A ComplexMatrix that passed validate_density_matrix
DensityMatrix = ComplexMatrix
Subsystem = Literal["A", "B"]

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
ZERO_EIGENVALUE = 1e-12
SUPPORT_TOL = 1e-10
UNITARY_TOL = 1e-9

_LN2 = float(np.log(2.0))

PAULI_X: ComplexMatrix = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y: ComplexMatrix = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z: ComplexMatrix = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS: tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix] = (PAULI_X, PAULI_Y, PAULI_Z)


def as_matrix(m: npt.ArrayLike) -> ComplexMatrix:
    mat = np.asarray(m, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] == 0:
        raise DimensionError(f"Expected a non-empty square matrix, got shape {mat.shape}")
    return mat


def ket(index: int, dim: int) -> npt.NDArray[np.complex128]:
    vec = np.zeros(dim, dtype=np.complex128)
    vec[index] = 1.0
    return vec


def projector(vector: npt.ArrayLike) -> ComplexMatrix:
    """Rank-one projector |v><v| onto the normalized ``vector``."""
    vec = np.asarray(vector, dtype=np.complex128).ravel()
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        raise DimensionError("Cannot build a projector from the zero vector")
    vec = vec / norm
    return np.outer(vec, vec.conj())


def maximally_mixed(dim: int) -> DensityMatrix:
    return np.eye(dim, dtype=np.complex128) / dim


def is_hermitian(m: npt.ArrayLike, tol: float = HERMITIAN_TOL) -> bool:
    mat = as_matrix(m)
    return bool(np.max(np.abs(mat - mat.conj().T)) <= tol)


def is_unitary(m: npt.ArrayLike, tol: float = UNITARY_TOL) -> bool:
    mat = as_matrix(m)
    eye = np.eye(mat.shape[0], dtype=np.complex128)
    return bool(np.max(np.abs(mat.conj().T @ mat - eye)) <= tol)


def validate_density_matrix(m: npt.ArrayLike, tol: float = TRACE_TOL) -> DensityMatrix:
    """Return ``m`` as a complex matrix or raise ``InvalidStateError``.

    Rejects NaN or infinite entries, then checks Hermiticity, unit trace and
    positive semidefiniteness, each to ``tol`` (1e-10 by default).
    """
    mat = as_matrix(m)
    if not np.all(np.isfinite(mat)):
        raise InvalidStateError("Density matrix has non-finite entries")
    deviation = float(np.max(np.abs(mat - mat.conj().T)))
    if deviation > tol:
        raise InvalidStateError(f"Density matrix is not Hermitian (max deviation {deviation:.3e})")
    trace = complex(np.trace(mat))
    if abs(trace - 1.0) > tol:
        raise InvalidStateError(f"Density matrix trace is {trace.real:.12g}, expected 1")
    min_eig = float(scipy.linalg.eigvalsh(mat)[0])
    if min_eig < -tol:
        raise InvalidStateError(
            f"Density matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})"
        )
    return mat


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: RealVector
    eigenvectors: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Density matrix on H_A ⊗ H_B with declared local dimensions."""

    rho: DensityMatrix
    dim_a: int
    dim_b: int

    def __post_init__(self) -> None:
        if self.dim_a < 1 or self.dim_b < 1:
            raise DimensionError(f"Local dimensions must be positive, got ({self.dim_a}, {self.dim_b})")
        mat = validate_density_matrix(self.rho)
        if mat.shape[0] != self.dim_a * self.dim_b:
            raise DimensionError(
                f"State has dimension {mat.shape[0]}, expected dim_a*dim_b = {self.dim_a * self.dim_b}"
            )
        object.__setattr__(self, "rho", mat)

    @classmethod
    def from_product(cls, rho_a: npt.ArrayLike, rho_b: npt.ArrayLike) -> "BipartiteState":
        a = as_matrix(rho_a)
        b = as_matrix(rho_b)
        return cls(tensor(a, b), a.shape[0], b.shape[0])

    @classmethod
    def from_vector(cls, psi: npt.ArrayLike, dim_a: int, dim_b: int) -> "BipartiteState":
        return cls(projector(psi), dim_a, dim_b)

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def blocks(self) -> npt.NDArray[np.complex128]:
        """The state as a rank-4 tensor indexed ``[a, b, a', b']``."""
        return self.rho.reshape(self.dim_a, self.dim_b, self.dim_a, self.dim_b)

    def reduced(self, keep: Subsystem) -> DensityMatrix:
        return partial_trace(self, keep)


def tensor(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace_matrix(
    m: npt.ArrayLike, dim_a: int, dim_b: int, keep: Subsystem
) -> ComplexMatrix:
    """Partial trace of an arbitrary (not necessarily normalized) operator."""
    mat = as_matrix(m)
    if mat.shape[0] != dim_a * dim_b:
        raise DimensionError(
            f"Operator has dimension {mat.shape[0]}, expected {dim_a}*{dim_b} = {dim_a * dim_b}"
        )
    blocks = mat.reshape(dim_a, dim_b, dim_a, dim_b)
    if keep == "A":
        return np.einsum("ibjb->ij", blocks)
    if keep == "B":
        return np.einsum("aiaj->ij", blocks)
    raise DimensionError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_trace(s: BipartiteState, keep: Subsystem) -> DensityMatrix:
    return partial_trace_matrix(s.rho, s.dim_a, s.dim_b, keep)


def hermitian_eig(m: npt.ArrayLike, tol: float = HERMITIAN_TOL) -> Spectrum:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending."""
    mat = as_matrix(m)
    if not is_hermitian(mat, tol):
        raise InvalidStateError("hermitian_eig requires a Hermitian matrix")
    # Symmetrize so round-off below tol cannot leak into the spectrum
    sym = 0.5 * (mat + mat.conj().T)
    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"Hermitian eigensolver did not converge: {exc}") from exc
    return Spectrum(eigenvalues=np.asarray(eigenvalues, dtype=np.float64), eigenvectors=eigenvectors)


def clamp_eigenvalues(eigenvalues: npt.ArrayLike, tol: float = PSD_TOL) -> RealVector:
    """Clamp round-off negatives to zero; reject genuinely negative spectra."""
    vals = np.asarray(eigenvalues, dtype=np.float64)
    if vals.size and float(np.min(vals)) < -tol:
        raise InvalidStateError(f"Negative eigenvalue {float(np.min(vals)):.3e} below -{tol:g}")
    return np.where(vals < ZERO_EIGENVALUE, 0.0, vals)


def entropy_of_spectrum(eigenvalues: npt.ArrayLike) -> float:
    vals = clamp_eigenvalues(eigenvalues)
    return float(np.sum(entr(vals)) / _LN2)


def batched_entropies(mats: npt.NDArray[np.complex128]) -> RealVector:
    """Von Neumann entropies (bits) of a stack of Hermitian matrices.

    No validation: callers feed normalized conditional states from the
    search loops, where an exception per grid point would be too costly.
    """
    vals = np.linalg.eigvalsh(mats)
    vals = np.where(vals < ZERO_EIGENVALUE, 0.0, vals)
    return np.sum(entr(vals), axis=-1) / _LN2


def von_neumann_entropy(rho: npt.ArrayLike) -> float:
    mat = validate_density_matrix(rho)
    return entropy_of_spectrum(scipy.linalg.eigvalsh(mat))


def relative_entropy(rho: npt.ArrayLike, sigma: npt.ArrayLike) -> float:
    """S(rho||sigma) in bits; ``math.inf`` when supp(rho) is not inside supp(sigma)."""
    r = validate_density_matrix(rho)
    s = validate_density_matrix(sigma)
    if r.shape != s.shape:
        raise DimensionError(f"Shape mismatch {r.shape} vs {s.shape}")
    spectrum = hermitian_eig(s)
    weights = np.real(np.einsum("ik,ij,jk->k", spectrum.eigenvectors.conj(), r, spectrum.eigenvectors))
    kernel = spectrum.eigenvalues < ZERO_EIGENVALUE
    if np.any(weights[kernel] >= SUPPORT_TOL):
        logger.debug("Support violation in relative entropy: returning +inf")
        return float("inf")
    support = ~kernel
    cross = float(np.sum(weights[support] * np.log2(spectrum.eigenvalues[support])))
    return -von_neumann_entropy(r) - cross


def dephase(rho: npt.ArrayLike) -> DensityMatrix:
    """Delete all off-diagonal entries in the computational basis."""
    mat = as_matrix(rho)
    return np.diag(np.diag(mat)).astype(np.complex128)
