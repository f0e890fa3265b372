"""Worked example states and their closed-form reference values."""

from __future__ import annotations

import numpy as np
from scipy.special import xlogy

from .correlations import BellDiagonalParams, bell_diagonal_state
from .errors import ConfigurationError
from .measurement import Measurement, qubit_projector_pair
from .qmatrix import BipartiteState, ket, projector, tensor

_LN2 = float(np.log(2.0))

KET_0 = ket(0, 2)
KET_1 = ket(1, 2)
KET_PLUS = (KET_0 + KET_1) / np.sqrt(2.0)
KET_MINUS = (KET_0 - KET_1) / np.sqrt(2.0)

# Sweep geometry for the Bell-diagonal figure
FIGURE2_THETA = 2.0 * np.pi / 3.0
FIGURE2_PHI = np.pi / 2.0
FIGURE2_C2 = 0.33
FIGURE2_C3 = 0.22
FIGURE2_POINT = BellDiagonalParams(0.45, FIGURE2_C2, FIGURE2_C3)

EXAMPLE_NAMES = ("ex1", "ex2", "ex3")


def _mix(*terms: tuple[float, np.ndarray, np.ndarray]) -> BipartiteState:
    rho = sum(w * tensor(projector(a), projector(b)) for w, a, b in terms)
    return BipartiteState(np.asarray(rho, dtype=np.complex128), 2, 2)


def example1_state() -> BipartiteState:
    """Classical-classical: 1/2 |0><0|⊗|+><+| + 1/2 |1><1|⊗|-><-|."""
    return _mix((0.5, KET_0, KET_PLUS), (0.5, KET_1, KET_MINUS))


def example2_state() -> BipartiteState:
    """Classical-quantum: 1/2 |0><0|⊗|+><+| + 1/2 |1><1|⊗|0><0|."""
    return _mix((0.5, KET_0, KET_PLUS), (0.5, KET_1, KET_0))


def example3_state() -> BipartiteState:
    """Quantum-classical: 1/2 |+><+|⊗|+><+| + 1/2 |0><0|⊗|-><-|."""
    return _mix((0.5, KET_PLUS, KET_PLUS), (0.5, KET_0, KET_MINUS))


def block_diagonal_example() -> BipartiteState:
    rho = 0.5 * tensor(projector(KET_0), np.diag([0.75, 0.25])) + 0.5 * tensor(
        projector(KET_1), np.diag([0.25, 0.75])
    )
    return BipartiteState(rho, 2, 2)


def example3_null_measurement() -> Measurement:
    """|psi> = cos t|0> + e^{i phi} sin t|1> with cot 2t = cos phi, at phi = pi/2, t = pi/4."""
    return qubit_projector_pair(np.pi / 2.0, np.pi / 2.0)


def named_state(name: str) -> BipartiteState:
    """Resolve ``ex1``/``ex2``/``ex3`` or ``bell:c1,c2,c3``."""
    if name == "ex1":
        return example1_state()
    if name == "ex2":
        return example2_state()
    if name == "ex3":
        return example3_state()
    if name.startswith("bell:"):
        try:
            c1, c2, c3 = (float(x) for x in name[len("bell:"):].split(","))
        except ValueError as exc:
            raise ConfigurationError(f"Expected bell:c1,c2,c3, got {name!r}") from exc
        return bell_diagonal_state(BellDiagonalParams(c1, c2, c3))
    raise ConfigurationError(f"Unknown example state {name!r}; use ex1, ex2, ex3 or bell:c1,c2,c3")


def _sum_xlogx(*values: float) -> float:
    return float(sum(xlogy(v, v) for v in values) / _LN2)


def binary_entropy(p: float) -> float:
    return -_sum_xlogx(p, 1.0 - p)


def example2_classical_correlation() -> float:
    """-Sum_± ((2±√2)/4) log2((2±√2)/4), about 0.6009."""
    r = np.sqrt(2.0)
    return -_sum_xlogx((2 + r) / 4, (2 - r) / 4)


def example2_extra_miac() -> float:
    return example2_classical_correlation() + 0.5 + _sum_xlogx(0.25, 0.75)


def example3_extra() -> float:
    """1 + 1/4 log2(1/3) + 1/2 log2(2/3), about 0.311278."""
    return 1.0 + 0.25 * np.log2(1.0 / 3.0) + 0.5 * np.log2(2.0 / 3.0)


def example3_classical_correlation() -> float:
    r = np.sqrt(2.0)
    return 1.0 + _sum_xlogx((2 + r) / 4, (2 - r) / 4)
