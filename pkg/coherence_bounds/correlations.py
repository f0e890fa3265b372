"""Mutual information, classical correlation and discord for bipartite states.

Classical correlation is measured on A: J = S(rho_B) - min_Pi S(B|Pi), the
minimum taken over rank-one projective measurements on Alice's side.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
import numpy.typing as npt
from scipy.special import xlogy

from .config import SearchConfig
from .errors import ConfigurationError, InvalidStateError
from .measurement import (
    Measurement,
    bloch_pair_batch,
    measure_a,
    measurement_from_basis,
    qubit_projector_pair,
    rank_one_outcomes,
)
from .qmatrix import (
    PAULIS,
    BipartiteState,
    RealVector,
    batched_entropies,
    tensor,
    von_neumann_entropy,
)
from .search import BlochObjective, TraceEntry, minimize_on_bloch, minimize_over_bases


logger = logging.getLogger(__name__)

DISCORD_FLOOR = -1e-6
BELL_PHYSICAL_TOL = 1e-12

_LN2 = float(np.log(2.0))


@dataclass(frozen=True, eq=False)
class CorrelationReport:
    mutual_information: float
    classical_correlation: float
    discord: float
    optimal_measurement: Measurement
    optimizer_trace: tuple[TraceEntry, ...]
    entropy_b: float
    heuristic: bool = False
    discord_anomaly: bool = False

    @property
    def min_conditional_entropy(self) -> float:
        return self.entropy_b - self.classical_correlation


@dataclass(frozen=True)
class BellDiagonalParams:
    c1: float
    c2: float
    c3: float

    @property
    def c_max(self) -> float:
        return max(abs(self.c1), abs(self.c2), abs(self.c3))

    def eigenvalues(self) -> RealVector:
        return bell_diagonal_eigenvalues(self)

    def is_physical(self, tol: float = BELL_PHYSICAL_TOL) -> bool:
        return bool(np.min(self.eigenvalues()) >= -tol)


def mutual_information(s: BipartiteState) -> float:
    return (
        von_neumann_entropy(s.reduced("A"))
        + von_neumann_entropy(s.reduced("B"))
        - von_neumann_entropy(s.rho)
    )


def _weighted_entropy(
    probs: npt.NDArray[np.float64],
    states: npt.NDArray[np.complex128],
    valid: npt.NDArray[np.bool_],
) -> npt.NDArray[np.float64]:
    entropies = batched_entropies(states)
    return np.sum(np.where(valid, probs * entropies, 0.0), axis=-1)


def conditional_entropy_after(s: BipartiteState, m: Measurement) -> float:
    """Sum_i p_i S(rho_i^B) over outcomes with p_i >= 1e-12."""
    ensemble = measure_a(s, m)
    states = np.stack(ensemble.states)
    return float(_weighted_entropy(ensemble.probs, states, np.asarray(ensemble.valid)))


def _build_report(
    s: BipartiteState,
    entropy_b: float,
    min_entropy: float,
    measurement: Measurement,
    trace: tuple[TraceEntry, ...],
    heuristic: bool,
) -> CorrelationReport:
    mi = mutual_information(s)
    j = entropy_b - min_entropy
    discord = mi - j
    anomaly = discord < DISCORD_FLOOR
    if anomaly:
        logger.warning("Discord %.3e below %.0e; classical correlation overshoots", discord, DISCORD_FLOOR)
    return CorrelationReport(
        mutual_information=mi,
        classical_correlation=j,
        discord=discord,
        optimal_measurement=measurement,
        optimizer_trace=trace,
        entropy_b=entropy_b,
        heuristic=heuristic,
        discord_anomaly=anomaly,
    )


def fold_seed(report: CorrelationReport, s: BipartiteState, m: Measurement) -> CorrelationReport:
    """The report as if ``m`` had been among the optimizer seeds."""
    value = conditional_entropy_after(s, m)
    if value < report.min_conditional_entropy:
        return _build_report(s, report.entropy_b, value, m, report.optimizer_trace, report.heuristic)
    return report


def conditional_entropy_objective(s: BipartiteState) -> BlochObjective:
    def objective(params: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        probs, states, valid = rank_one_outcomes(s, bloch_pair_batch(params))
        return _weighted_entropy(probs, states, valid)

    return objective


def classical_correlation(
    s: BipartiteState,
    seeds: Iterable[Measurement] = (),
    *,
    config: Optional[SearchConfig] = None,
) -> CorrelationReport:
    if config is None:
        config = SearchConfig()
    entropy_b = von_neumann_entropy(s.reduced("B"))

    if s.dim_a == 2:
        result = minimize_on_bloch(conditional_entropy_objective(s), config=config)
        best_value = result.value
        best: Measurement = qubit_projector_pair(result.theta, result.phi)
        trace = result.trace
        heuristic = False
    else:
        if config.haar_samples <= 0:
            raise ConfigurationError(
                f"Classical correlation for d_A={s.dim_a} needs a Haar sampling budget"
            )

        def basis_objective(bases: npt.NDArray[np.complex128]) -> npt.NDArray[np.float64]:
            probs, states, valid = rank_one_outcomes(s, bases)
            return _weighted_entropy(probs, states, valid)

        found = minimize_over_bases(basis_objective, s.dim_a, config=config)
        best_value = found.value
        best = measurement_from_basis(found.basis.T, label="haar-sampled")
        trace = ()
        heuristic = True
        logger.info("d_A=%d: classical correlation from %d Haar bases is a lower bound", s.dim_a, found.evaluations)

    report = _build_report(s, entropy_b, best_value, best, trace, heuristic)
    for seed in seeds:
        report = fold_seed(report, s, seed)
    return report


def quantum_discord(s: BipartiteState, *, config: Optional[SearchConfig] = None) -> float:
    return classical_correlation(s, config=config).discord


def bell_diagonal_eigenvalues(p: BellDiagonalParams) -> RealVector:
    c1, c2, c3 = p.c1, p.c2, p.c3
    return np.array(
        [
            (1 - c1 - c2 - c3) / 4,
            (1 - c1 + c2 + c3) / 4,
            (1 + c1 - c2 + c3) / 4,
            (1 + c1 + c2 - c3) / 4,
        ],
        dtype=np.float64,
    )


def physical_c1_range(c2: float, c3: float) -> tuple[float, float]:
    """Interval of c1 keeping (c1, c2, c3) inside the physical tetrahedron."""
    return -1.0 + abs(c2 - c3), 1.0 - abs(c2 + c3)


def _require_physical(p: BellDiagonalParams) -> None:
    if not p.is_physical():
        raise InvalidStateError(
            f"Bell-diagonal parameters {(p.c1, p.c2, p.c3)} lie outside the physical tetrahedron"
        )


def bell_diagonal_state(p: BellDiagonalParams) -> BipartiteState:
    _require_physical(p)
    rho = np.eye(4, dtype=np.complex128)
    for c, sigma in zip((p.c1, p.c2, p.c3), PAULIS):
        rho = rho + c * tensor(sigma, sigma)
    return BipartiteState(rho / 4.0, 2, 2)


def bell_diagonal_classical_correlation(p: BellDiagonalParams) -> float:
    _require_physical(p)
    c = p.c_max
    return float((xlogy((1 + c) / 2, 1 + c) + xlogy((1 - c) / 2, 1 - c)) / _LN2)


def bell_diagonal_discord(p: BellDiagonalParams) -> float:
    _require_physical(p)
    scaled = np.clip(4.0 * bell_diagonal_eigenvalues(p), 0.0, None)
    return float(np.sum(xlogy(scaled, scaled)) / (4.0 * _LN2)) - bell_diagonal_classical_correlation(p)
