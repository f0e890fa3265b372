"""Measurement-induced average coherence on B and its bounds.

After Alice measures, Bob holds rho_i^B with probability p_i. MIAC averages
the relative-entropy coherence of those states; MIATC averages the total
coherence. The "extra" quantities subtract the coherence Bob already had.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import numpy.typing as npt
from scipy.special import entr, xlogy

from .coherence import ROUNDOFF_TOL, rel_ent_coherence, total_coherence
from .config import SearchConfig
from .correlations import (
    BellDiagonalParams,
    CorrelationReport,
    classical_correlation,
    fold_seed,
)
from .errors import ConfigurationError
from .measurement import (
    Measurement,
    bloch_pair_batch,
    measure_a,
    measurement_from_basis,
    qubit_projector_pair,
    rank_one_outcomes,
)
from .qmatrix import BipartiteState, batched_entropies, von_neumann_entropy
from .search import minimize_on_bloch, minimize_over_bases


logger = logging.getLogger(__name__)

INCOHERENT_TOL = 1e-9
ENTROPY_MATCH_TOL = 1e-9

_LN2 = float(np.log(2.0))


@dataclass(frozen=True)
class BoundReport:
    c_b: float
    ct_b: float
    miac: float
    miatc: float
    extra_miac: float
    extra_miatc: float
    j_classical: float
    discord: float
    mutual_information: float
    entropy_a: float
    entropy_b: float
    entropy_ab: float
    measurement_params: str

    def bound_gaps(self) -> dict[str, float]:
        """Signed gaps for every bound that applies; a positive gap is a violation margin.

        Gaps compare against zero. The caller decides the tolerance.
        """
        gaps = {
            "extra_miac_below_extra_miatc": self.extra_miac - self.extra_miatc,
            "extra_miac_below_j": self.extra_miac - self.j_classical,
            "extra_miatc_below_j": self.extra_miatc - self.j_classical,
            "extra_miac_nonnegative": -self.extra_miac,
            "extra_miatc_nonnegative": -self.extra_miatc,
        }
        if self.c_b <= INCOHERENT_TOL:
            gaps["incoherent_b_miac_below_j"] = self.miac - self.j_classical
        # Total coherence of rho_B vanishes only at the maximally mixed state
        if self.ct_b <= INCOHERENT_TOL:
            gaps["mixed_b_miatc_below_j"] = self.miatc - self.j_classical
        if abs(self.entropy_b - self.entropy_a - self.entropy_ab) <= ENTROPY_MATCH_TOL:
            gaps["extra_miac_below_entropy_a"] = self.extra_miac - self.entropy_a
            gaps["extra_miatc_below_entropy_a"] = self.extra_miatc - self.entropy_a
        return gaps

    def as_rows(self) -> list[tuple[str, float | str]]:
        return [
            ("measurement", self.measurement_params),
            ("C(rho_B)", self.c_b),
            ("C^T(rho_B)", self.ct_b),
            ("MIAC", self.miac),
            ("MIATC", self.miatc),
            ("extra MIAC", self.extra_miac),
            ("extra MIATC", self.extra_miatc),
            ("J", self.j_classical),
            ("discord", self.discord),
            ("I(A:B)", self.mutual_information),
            ("S(rho_A)", self.entropy_a),
            ("S(rho_B)", self.entropy_b),
            ("S(rho_AB)", self.entropy_ab),
        ]


def _clamp(values: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    return np.where((values < 0.0) & (values >= -ROUNDOFF_TOL), 0.0, values)


def _average_coherences(
    probs: npt.NDArray[np.float64],
    states: npt.NDArray[np.complex128],
    valid: npt.NDArray[np.bool_],
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """(MIAC, MIATC) along the last outcome axis of a batch of ensembles."""
    dim_b = states.shape[-1]
    entropies = batched_entropies(states)
    diagonals = np.clip(np.real(np.diagonal(states, axis1=-2, axis2=-1)), 0.0, None)
    dephased = np.sum(entr(diagonals), axis=-1) / _LN2
    coherences = _clamp(dephased - entropies)
    miac_vals = np.sum(np.where(valid, probs * coherences, 0.0), axis=-1)
    miatc_vals = np.log2(dim_b) - np.sum(np.where(valid, probs * entropies, 0.0), axis=-1)
    return miac_vals, miatc_vals


def _ensemble_averages(s: BipartiteState, m: Measurement) -> tuple[float, float]:
    ensemble = measure_a(s, m)
    miac_val, miatc_val = _average_coherences(
        ensemble.probs, np.stack(ensemble.states), np.asarray(ensemble.valid)
    )
    return float(miac_val), float(miatc_val)


def miac(s: BipartiteState, m: Measurement) -> float:
    return _ensemble_averages(s, m)[0]


def miatc(s: BipartiteState, m: Measurement) -> float:
    return _ensemble_averages(s, m)[1]


def extra_miac(s: BipartiteState, m: Measurement) -> float:
    return miac(s, m) - rel_ent_coherence(s.reduced("B"))


def extra_miatc(s: BipartiteState, m: Measurement) -> float:
    return miatc(s, m) - total_coherence(s.reduced("B"))


def bound_report(
    s: BipartiteState,
    m: Measurement,
    params: Optional[tuple[float, float]] = None,
    base: Optional[CorrelationReport] = None,
    *,
    config: Optional[SearchConfig] = None,
) -> BoundReport:
    """Every quantity for one measurement, with J seeded by ``m``.

    ``base`` is an unseeded report for ``s`` that many measurements can
    share; folding ``m`` in gives the same J as seeding the search with it.
    """
    rho_b = s.reduced("B")
    c_b = rel_ent_coherence(rho_b)
    ct_b = total_coherence(rho_b)
    miac_val, miatc_val = _ensemble_averages(s, m)
    if base is None:
        base = classical_correlation(s, config=config)
    corr = fold_seed(base, s, m)
    if params is not None:
        descriptor = f"theta={params[0]:.6g},phi={params[1]:.6g}"
    else:
        descriptor = m.describe()
    return BoundReport(
        c_b=c_b,
        ct_b=ct_b,
        miac=miac_val,
        miatc=miatc_val,
        extra_miac=miac_val - c_b,
        extra_miatc=miatc_val - ct_b,
        j_classical=corr.classical_correlation,
        discord=corr.discord,
        mutual_information=corr.mutual_information,
        entropy_a=von_neumann_entropy(s.reduced("A")),
        entropy_b=corr.entropy_b,
        entropy_ab=von_neumann_entropy(s.rho),
        measurement_params=descriptor,
    )


def _maximize(
    s: BipartiteState,
    which: int,
    config: Optional[SearchConfig],
    base: Optional[CorrelationReport],
) -> BoundReport:
    if config is None:
        config = SearchConfig()
    if s.dim_a == 2:

        def objective(params: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
            probs, states, valid = rank_one_outcomes(s, bloch_pair_batch(params))
            return _average_coherences(probs, states, valid)[which]

        result = minimize_on_bloch(objective, config=config, maximize=True)
        m = qubit_projector_pair(result.theta, result.phi)
        return bound_report(s, m, (result.theta, result.phi), base, config=config)

    if config.haar_samples <= 0:
        raise ConfigurationError(f"Maximization for d_A={s.dim_a} needs a Haar sampling budget")

    def basis_objective(bases: npt.NDArray[np.complex128]) -> npt.NDArray[np.float64]:
        probs, states, valid = rank_one_outcomes(s, bases)
        return _average_coherences(probs, states, valid)[which]

    found = minimize_over_bases(basis_objective, s.dim_a, config=config, maximize=True)
    logger.info("d_A=%d: maximum over %d Haar bases is a lower bound", s.dim_a, found.evaluations)
    m = measurement_from_basis(found.basis.T, label="haar-sampled")
    return bound_report(s, m, base=base, config=config)


def max_extra_miac(
    s: BipartiteState,
    *,
    config: Optional[SearchConfig] = None,
    base: Optional[CorrelationReport] = None,
) -> BoundReport:
    return _maximize(s, 0, config, base)


def max_extra_miatc(
    s: BipartiteState,
    *,
    config: Optional[SearchConfig] = None,
    base: Optional[CorrelationReport] = None,
) -> BoundReport:
    return _maximize(s, 1, config, base)


def bell_diagonal_delta(p: BellDiagonalParams, theta: float, phi: float) -> float:
    """Squared length (times 4) of Bob's conditional Bloch vector at (theta, phi)."""
    c1, c2, c3 = p.c1, p.c2, p.c3
    delta = (
        c1**2
        + c2**2
        + 2 * c3**2
        - (c1**2 + c2**2 - 2 * c3**2) * np.cos(2 * theta)
        + 2 * (c1**2 - c2**2) * np.cos(2 * phi) * np.sin(theta) ** 2
    )
    return float(max(delta, 0.0))


def _pair_xlogx(center: float, half_width: float) -> float:
    lo = center - half_width
    hi = center + half_width
    return float((xlogy(hi, hi) + xlogy(lo, lo)) / _LN2)


def bell_diagonal_extra_miatc(p: BellDiagonalParams, theta: float, phi: float) -> float:
    root = np.sqrt(bell_diagonal_delta(p, theta, phi))
    return 1.0 + _pair_xlogx(0.5, root / 4.0)


def bell_diagonal_extra_miac(p: BellDiagonalParams, theta: float, phi: float) -> float:
    root = np.sqrt(bell_diagonal_delta(p, theta, phi))
    return _pair_xlogx(0.5, root / 4.0) - _pair_xlogx(0.5, p.c3 * np.cos(theta) / 2.0)
