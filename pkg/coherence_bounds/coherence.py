"""Relative-entropy coherence in the computational basis and total coherence."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import scipy.linalg

from .qmatrix import (
    entropy_of_spectrum,
    validate_density_matrix,
)


# Round-off below this is reported as exactly zero coherence
ROUNDOFF_TOL = 1e-9


@dataclass(frozen=True)
class CoherenceValue:
    basis_dependent: float
    basis_free: float


def _clamp(value: float) -> float:
    if -ROUNDOFF_TOL <= value < 0.0:
        return 0.0
    return value


def rel_ent_coherence(rho: npt.ArrayLike) -> float:
    """C(rho) = S(rho*) - S(rho), rho* the dephased state."""
    mat = validate_density_matrix(rho)
    diagonal = np.real(np.diag(mat))
    value = entropy_of_spectrum(diagonal) - entropy_of_spectrum(scipy.linalg.eigvalsh(mat))
    return _clamp(value)


def total_coherence(rho: npt.ArrayLike) -> float:
    """C^T(rho) = log2(d) - S(rho)."""
    mat = validate_density_matrix(rho)
    value = float(np.log2(mat.shape[0])) - entropy_of_spectrum(scipy.linalg.eigvalsh(mat))
    return _clamp(value)


def coherence_value(rho: npt.ArrayLike) -> CoherenceValue:
    return CoherenceValue(basis_dependent=rel_ent_coherence(rho), basis_free=total_coherence(rho))
