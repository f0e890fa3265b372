"""Local measurements on subsystem A and the ensembles they induce on B.

Outcomes follow the Kraus convention: outcome i leaves B in
Tr_A[(M_i ⊗ I) rho (M_i† ⊗ I)] / p_i. For Hermitian projectors this is the
usual Pi_i rho Pi_i update.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np
import numpy.typing as npt

from .errors import DimensionError, MeasurementError
from .qmatrix import (
    BipartiteState,
    ComplexMatrix,
    DensityMatrix,
    RealVector,
    as_matrix,
    clamp_eigenvalues,
    hermitian_eig,
    is_unitary,
    maximally_mixed,
)


logger = logging.getLogger(__name__)

MeasurementKind = Literal["projective", "povm"]

COMPLETENESS_TOL = 1e-9
ZERO_PROBABILITY = 1e-12


@dataclass(frozen=True, eq=False)
class Measurement:
    operators: tuple[ComplexMatrix, ...]
    kind: MeasurementKind = "projective"
    label: Optional[str] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        ops = tuple(as_matrix(op) for op in self.operators)
        if not ops:
            raise MeasurementError("A measurement needs at least one operator")
        dim = ops[0].shape[0]
        if any(op.shape != (dim, dim) for op in ops):
            raise DimensionError("All measurement operators must share one dimension")
        total = sum((op.conj().T @ op for op in ops), np.zeros((dim, dim), dtype=np.complex128))
        deviation = float(np.max(np.abs(total - np.eye(dim))))
        if deviation > COMPLETENESS_TOL:
            raise MeasurementError(f"Measurement is not complete (deviation {deviation:.3e})")
        if self.kind == "projective":
            for i, op_i in enumerate(ops):
                if float(np.max(np.abs(op_i - op_i.conj().T))) > COMPLETENESS_TOL:
                    raise MeasurementError(f"Projector {i} is not Hermitian")
                for j, op_j in enumerate(ops):
                    expected = op_i if i == j else np.zeros_like(op_i)
                    if float(np.max(np.abs(op_i @ op_j - expected))) > COMPLETENESS_TOL:
                        raise MeasurementError(f"Projectors {i} and {j} are not orthogonal idempotents")
        elif self.kind != "povm":
            raise MeasurementError(f"Unknown measurement kind {self.kind!r}")
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self) -> int:
        return int(self.operators[0].shape[0])

    def stacked(self) -> npt.NDArray[np.complex128]:
        return np.stack(self.operators)

    def describe(self) -> str:
        if self.label:
            return self.label
        return f"{self.kind}[{len(self.operators)}]"


@dataclass(frozen=True, eq=False)
class ConditionalEnsemble:
    """Probabilities and Bob's conditional states.

    Outcomes with probability below 1e-12 carry the placeholder I/d_B and
    ``valid=False``; they contribute nothing to averages.
    """

    probs: RealVector
    states: tuple[DensityMatrix, ...]
    valid: tuple[bool, ...]

    def mixture(self) -> ComplexMatrix:
        dim = self.states[0].shape[0]
        out = np.zeros((dim, dim), dtype=np.complex128)
        for p, state, ok in zip(self.probs, self.states, self.valid):
            if ok:
                out += p * state
        return out

    def outcomes(self) -> list[tuple[float, DensityMatrix]]:
        return [(float(p), st) for p, st, ok in zip(self.probs, self.states, self.valid) if ok]


def bloch_pair_batch(params: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    """Stack of (|psi>, |psi_perp>) rows for each (theta, phi); shape (n, 2, 2)."""
    params = np.atleast_2d(np.asarray(params, dtype=np.float64))
    c = np.cos(params[:, 0] / 2.0)
    s = np.sin(params[:, 0] / 2.0)
    phase = np.exp(1j * params[:, 1])
    out = np.empty((params.shape[0], 2, 2), dtype=np.complex128)
    out[:, 0, 0] = c
    out[:, 0, 1] = phase * s
    out[:, 1, 0] = s
    out[:, 1, 1] = -phase * c
    return out


def qubit_projector_pair(theta: float, phi: float) -> Measurement:
    """{|psi><psi|, I - |psi><psi|} with |psi> = cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>."""
    vecs = bloch_pair_batch((theta, phi))[0]
    plus = np.outer(vecs[0], vecs[0].conj())
    minus = np.eye(2, dtype=np.complex128) - plus
    return Measurement((plus, minus), "projective", label=f"theta={theta:.6g},phi={phi:.6g}")


def computational_measurement(dim: int) -> Measurement:
    ops = []
    for k in range(dim):
        op = np.zeros((dim, dim), dtype=np.complex128)
        op[k, k] = 1.0
        ops.append(op)
    return Measurement(tuple(ops), "projective", label="computational")


def measurement_from_basis(unitary: npt.ArrayLike, label: Optional[str] = None) -> Measurement:
    """Rank-one projective measurement onto the columns of ``unitary``."""
    u = as_matrix(unitary)
    if not is_unitary(u):
        raise MeasurementError("Basis matrix is not unitary")
    ops = tuple(np.outer(u[:, k], u[:, k].conj()) for k in range(u.shape[1]))
    return Measurement(ops, "projective", label=label)


def povm_from_elements(elements: Sequence[npt.ArrayLike], label: Optional[str] = None) -> Measurement:
    """Build Kraus operators sqrt(E_i) from POVM effects E_i."""
    kraus = []
    for effect in elements:
        spectrum = hermitian_eig(effect)
        vals = np.sqrt(clamp_eigenvalues(spectrum.eigenvalues, tol=COMPLETENESS_TOL))
        v = spectrum.eigenvectors
        kraus.append((v * vals) @ v.conj().T)
    return Measurement(tuple(kraus), "povm", label=label)


def fourier_matrix(dim: int) -> ComplexMatrix:
    """(F)_{ωj} = exp(2πi jω/N) / sqrt(N)."""
    idx = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(idx, idx) / dim) / np.sqrt(dim)


def fourier_measurement(dim: int, u_a: npt.ArrayLike) -> Measurement:
    """Undo the local unitary ``u_a``, apply the DFT, measure |ω><ω|.

    Outcome ω projects onto U_A F† |ω>.
    """
    u = as_matrix(u_a)
    if u.shape != (dim, dim):
        raise DimensionError(f"u_a has shape {u.shape}, expected ({dim}, {dim})")
    if not is_unitary(u):
        raise MeasurementError("fourier_measurement requires a unitary u_a")
    return measurement_from_basis(u @ fourier_matrix(dim).conj().T, label="fourier")


def _normalize_outcomes(
    unnormalized: npt.NDArray[np.complex128],
) -> tuple[RealVector, npt.NDArray[np.complex128], npt.NDArray[np.bool_]]:
    probs = np.real(np.einsum("...bb->...", unnormalized))
    valid = probs >= ZERO_PROBABILITY
    dim_b = unnormalized.shape[-1]
    safe = np.where(valid, probs, 1.0)[..., None, None]
    states = np.where(valid[..., None, None], unnormalized / safe, maximally_mixed(dim_b))
    return probs, states, valid


def measure_a(s: BipartiteState, m: Measurement) -> ConditionalEnsemble:
    if m.dim != s.dim_a:
        raise DimensionError(f"Measurement acts on dimension {m.dim}, subsystem A has {s.dim_a}")
    ops = m.stacked()
    unnormalized = np.einsum("nxa,abcd,nxc->nbd", ops, s.blocks(), ops.conj())
    probs, states, valid = _normalize_outcomes(unnormalized)
    if not np.all(valid):
        logger.debug("Dropping %d zero-probability outcome(s)", int(np.sum(~valid)))
    return ConditionalEnsemble(
        probs=probs,
        states=tuple(states),
        valid=tuple(bool(v) for v in valid),
    )


def rank_one_outcomes(
    s: BipartiteState, vectors: npt.NDArray[np.complex128]
) -> tuple[RealVector, npt.NDArray[np.complex128], npt.NDArray[np.bool_]]:
    """Batched ``measure_a`` for rank-one projective measurements.

    ``vectors`` has shape (n_measurements, n_outcomes, d_A); row k of
    measurement n is the k-th basis vector. Returns probabilities
    (n, k), normalized conditional states (n, k, d_B, d_B) and the validity
    mask.
    """
    unnormalized = np.einsum("nka,abcd,nkc->nkbd", vectors.conj(), s.blocks(), vectors)
    return _normalize_outcomes(unnormalized)
