"""State classification and randomized batch checks of the coherence bounds.

Each audit draws its states trial by trial from per-trial generators, runs
the trials through ``joblib`` and reduces the outcomes in trial order, so a
fixed seed gives bit-identical results for any ``n_jobs``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from itertools import combinations
from typing import Callable, Iterable, Mapping, Optional

import numpy as np
import numpy.typing as npt
from joblib import Parallel, delayed

from .config import AuditConfig, Tolerances
from .correlations import classical_correlation
from .measurement import fourier_measurement
from .miac import bound_report, max_extra_miac, max_extra_miatc
from .qmatrix import PAULIS, BipartiteState, tensor, von_neumann_entropy
from .random_states import (
    PHASE_NULL_BLOCK,
    PHASE_NULL_GENERIC,
    PHASE_NULL_PRODUCT,
    PHASE_SATURATION,
    PHASE_THEOREMS,
    RNG_ALGORITHM,
    random_block_diagonal_b,
    random_mixed,
    random_product,
    random_projective,
    random_pure,
    random_schmidt_family,
    trial_rng,
)


logger = logging.getLogger(__name__)


class StateLabel(str, Enum):
    PRODUCT = "product"
    CLASSICAL_CLASSICAL = "classical_classical"
    CLASSICAL_QUANTUM = "classical_quantum"
    QUANTUM_CLASSICAL = "quantum_classical"
    BLOCK_DIAGONAL_B = "block_diagonal_b"
    BELL_DIAGONAL = "bell_diagonal"
    PURE = "pure"
    GENERIC = "generic"


@dataclass(frozen=True)
class StateClass:
    labels: frozenset[StateLabel]

    def __contains__(self, label: object) -> bool:
        return label in self.labels

    def names(self) -> list[str]:
        return sorted(label.value for label in self.labels)


def _commuting_family(mats: Iterable[npt.NDArray[np.complex128]], tol: float) -> bool:
    family = list(mats)
    for x, y in combinations(family, 2):
        if float(np.max(np.abs(x @ y - y @ x))) > tol:
            return False
    return True


def _is_bell_diagonal(s: BipartiteState, tol: float) -> bool:
    if (s.dim_a, s.dim_b) != (2, 2):
        return False
    eye = np.eye(2)
    for sigma in PAULIS:
        if abs(np.trace(s.rho @ tensor(sigma, eye))) > tol:
            return False
        if abs(np.trace(s.rho @ tensor(eye, sigma))) > tol:
            return False
    for i, si in enumerate(PAULIS):
        for j, sj in enumerate(PAULIS):
            if i != j and abs(np.trace(s.rho @ tensor(si, sj))) > tol:
                return False
    return True


def classify(s: BipartiteState, tol: float = Tolerances.classifier) -> StateClass:
    """Every structural label that applies to ``s`` at tolerance ``tol``.

    Writing rho = sum_kl A_kl ⊗ |k><l| (A-blocks) or sum_ac |a><c| ⊗ B_ac
    (B-blocks), the state is classical on A when the A-blocks commute and
    classical on B when the B-blocks do.
    """
    labels: set[StateLabel] = set()
    rho_a = s.reduced("A")
    rho_b = s.reduced("B")
    blocks = s.blocks()

    if float(np.max(np.abs(s.rho - tensor(rho_a, rho_b)))) <= tol:
        labels.add(StateLabel.PRODUCT)

    off_diagonal = [
        blocks[:, k, :, l] for k in range(s.dim_b) for l in range(s.dim_b) if k != l
    ]
    if all(float(np.max(np.abs(b))) <= tol for b in off_diagonal):
        labels.add(StateLabel.BLOCK_DIAGONAL_B)

    a_blocks = (blocks[:, k, :, l] for k in range(s.dim_b) for l in range(s.dim_b))
    b_blocks = (blocks[a, :, c, :] for a in range(s.dim_a) for c in range(s.dim_a))
    classical_a = _commuting_family(a_blocks, tol)
    classical_b = _commuting_family(b_blocks, tol)
    if classical_a:
        labels.add(StateLabel.CLASSICAL_QUANTUM)
    if classical_b:
        labels.add(StateLabel.QUANTUM_CLASSICAL)
    if classical_a and classical_b:
        labels.add(StateLabel.CLASSICAL_CLASSICAL)

    if _is_bell_diagonal(s, tol):
        labels.add(StateLabel.BELL_DIAGONAL)
    if von_neumann_entropy(s.rho) <= tol:
        labels.add(StateLabel.PURE)
    if not labels:
        labels.add(StateLabel.GENERIC)
    return StateClass(frozenset(labels))


@dataclass(frozen=True)
class Violation:
    check: str
    state: str
    measurement: str
    gap: float


@dataclass(frozen=True)
class AuditResult:
    name: str
    trials: int
    violations: tuple[Violation, ...]
    max_gap: float
    tolerance: float
    rng_seed: int
    rng_algorithm: str = RNG_ALGORITHM
    checks: Mapping[str, int] = field(default_factory=dict)
    detected: Optional[int] = None
    detection_rate: Optional[float] = None
    detected_miatc: Optional[int] = None
    detection_rate_miatc: Optional[float] = None
    detection_ok: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return not self.violations and self.detection_ok is not False

    def summary(self) -> dict[str, object]:
        return {
            "audit": self.name,
            "trials": self.trials,
            "checks": sum(self.checks.values()),
            "violations": len(self.violations),
            "max_gap": self.max_gap,
            "tolerance": self.tolerance,
            "detection_rate": self.detection_rate,
            "detection_rate_miatc": self.detection_rate_miatc,
            "passed": self.passed,
        }


# (check, state descriptor, measurement descriptor, gap)
_Check = tuple[str, str, str, float]


@dataclass(frozen=True)
class _TrialOutcome:
    checks: list[_Check]
    detected: Optional[bool] = None
    detected_miatc: Optional[bool] = None


def _run_trials(
    config: AuditConfig, worker: Callable[[AuditConfig, int], _TrialOutcome], n_trials: int
) -> list[_TrialOutcome]:
    # joblib preserves submission order in its output
    return list(
        Parallel(n_jobs=config.n_jobs)(delayed(worker)(config, trial) for trial in range(n_trials))
    )


def _reduce(
    name: str,
    config: AuditConfig,
    outcomes: list[_TrialOutcome],
    tolerance: float,
) -> AuditResult:
    violations: list[Violation] = []
    counts: dict[str, int] = {}
    gaps: list[float] = []
    for outcome in outcomes:
        for check, state, measurement, gap in outcome.checks:
            counts[check] = counts.get(check, 0) + 1
            gaps.append(gap)
            if gap > tolerance:
                violations.append(Violation(check, state, measurement, gap))
    # a run without checks has no gap
    max_gap = max(gaps, default=0.0)
    if violations:
        logger.warning("%s audit: %d violation(s), max gap %.3e", name, len(violations), max_gap)
    else:
        logger.info("%s audit: %d trials clean, max gap %.3e", name, len(outcomes), max_gap)
    return AuditResult(
        name=name,
        trials=len(outcomes),
        violations=tuple(violations),
        max_gap=max_gap,
        tolerance=tolerance,
        rng_seed=config.seed,
        checks=counts,
    )


def _theorem_trial(config: AuditConfig, trial: int) -> _TrialOutcome:
    rng = trial_rng(config.seed, PHASE_THEOREMS, trial)
    s = random_mixed(config.dim_a, config.dim_b, rng)
    base = classical_correlation(s, config=config.search)
    checks: list[_Check] = []
    for j in range(config.n_measurements):
        m = random_projective(config.dim_a, rng)
        report = bound_report(s, m, base=base)
        for check, gap in report.bound_gaps().items():
            checks.append((check, f"mixed#{trial}", f"haar#{j}", gap))
    return _TrialOutcome(checks)


def audit_theorems(config: Optional[AuditConfig] = None) -> AuditResult:
    """Bounds between extra coherence and classical correlation on random mixed states."""
    if config is None:
        config = AuditConfig()
    logger.info(
        "Theorem audit: %d states x %d measurements, dims %dx%d, seed %d",
        config.n_states, config.n_measurements, config.dim_a, config.dim_b, config.seed,
    )
    outcomes = _run_trials(config, _theorem_trial, config.n_states)
    return _reduce("theorems", config, outcomes, config.tolerances.optimizer)


def _saturation_trial(config: AuditConfig, trial: int) -> _TrialOutcome:
    rng = trial_rng(config.seed, PHASE_SATURATION, trial)
    checks: list[_Check] = []

    s = random_pure(config.dim_a, config.dim_b, rng)
    m = random_projective(config.dim_a, rng)
    report = bound_report(s, m, config=config.search)
    state = f"pure#{trial}"
    checks.append(("extra_miatc_equals_j", state, "haar", abs(report.extra_miatc - report.j_classical)))
    for check, gap in report.bound_gaps().items():
        checks.append((check, state, "haar", gap))

    if config.dim_a == config.dim_b:
        family, u_a, _ = random_schmidt_family(config.dim_a, rng)
        fourier = bound_report(family, fourier_measurement(config.dim_a, u_a), config=config.search)
        state = f"schmidt#{trial}"
        checks.extend(
            [
                ("fourier_miac_saturation", state, "fourier", abs(fourier.miac - fourier.entropy_b)),
                ("fourier_incoherent_b", state, "fourier", fourier.c_b),
                ("extra_miac_equals_j", state, "fourier", abs(fourier.extra_miac - fourier.j_classical)),
                ("extra_miatc_equals_j", state, "fourier", abs(fourier.extra_miatc - fourier.j_classical)),
            ]
        )
    return _TrialOutcome(checks)


def audit_saturation(config: Optional[AuditConfig] = None) -> AuditResult:
    """Equality cases on pure states, including the Fourier measurement on the Schmidt family."""
    if config is None:
        config = AuditConfig()
    if config.dim_a != config.dim_b:
        logger.info("Skipping the Fourier saturation family: dims %dx%d differ", config.dim_a, config.dim_b)
    logger.info("Saturation audit: %d pure states, seed %d", config.n_pure, config.seed)
    outcomes = _run_trials(config, _saturation_trial, config.n_pure)
    return _reduce("saturation", config, outcomes, config.tolerances.saturation)


def _null_product_trial(config: AuditConfig, trial: int) -> _TrialOutcome:
    rng = trial_rng(config.seed, PHASE_NULL_PRODUCT, trial)
    s = random_product(config.dim_a, config.dim_b, rng)
    base = classical_correlation(s, config=config.search)
    best_p = max_extra_miac(s, config=config.search, base=base)
    best_t = max_extra_miatc(s, config=config.search, base=base)
    state = f"product#{trial}"
    return _TrialOutcome(
        [
            ("null_product_miac", state, best_p.measurement_params, best_p.extra_miac),
            ("null_product_miatc", state, best_t.measurement_params, best_t.extra_miatc),
        ]
    )


def _null_block_trial(config: AuditConfig, trial: int) -> _TrialOutcome:
    rng = trial_rng(config.seed, PHASE_NULL_BLOCK, trial)
    s = random_block_diagonal_b(config.dim_a, config.dim_b, rng)
    base = classical_correlation(s, config=config.search)
    best_p = max_extra_miac(s, config=config.search, base=base)
    checks: list[_Check] = [("null_block_miac", f"block#{trial}", best_p.measurement_params, best_p.extra_miac)]
    if StateLabel.PRODUCT in classify(s, config.tolerances.classifier):
        return _TrialOutcome(checks)
    best_t = max_extra_miatc(s, config=config.search, base=base)
    return _TrialOutcome(
        checks, detected_miatc=best_t.extra_miatc > config.tolerances.detection_threshold
    )


def _null_generic_trial(config: AuditConfig, trial: int) -> _TrialOutcome:
    rng = trial_rng(config.seed, PHASE_NULL_GENERIC, trial)
    s = random_mixed(config.dim_a, config.dim_b, rng)
    labels = classify(s, config.tolerances.classifier)
    if StateLabel.PRODUCT in labels or StateLabel.BLOCK_DIAGONAL_B in labels:
        logger.debug("generic#%d is %s, not counted", trial, ",".join(labels.names()))
        return _TrialOutcome([])
    threshold = config.tolerances.detection_threshold
    base = classical_correlation(s, config=config.search)
    best_p = max_extra_miac(s, config=config.search, base=base)
    best_t = max_extra_miatc(s, config=config.search, base=base)
    return _TrialOutcome(
        [], detected=best_p.extra_miac > threshold, detected_miatc=best_t.extra_miatc > threshold
    )


def _rate(flags: list[bool]) -> float:
    return sum(flags) / len(flags) if flags else 1.0


def audit_null_condition(config: Optional[AuditConfig] = None) -> AuditResult:
    """Null extra MIAC exactly for product and Bob-block-diagonal states,
    null extra MIATC exactly for product states.

    The "if" directions are magnitude checks. The "only if" directions are
    statistical: generic mixed states must show extra MIAC above the
    detection threshold, and every non-product state (block-diagonal or
    generic) extra MIATC above it, in at least the configured fraction of
    trials.
    """
    if config is None:
        config = AuditConfig()
    tol: Tolerances = config.tolerances
    logger.info("Null-condition audit: %d states per class, seed %d", config.n_null, config.seed)
    product = _run_trials(config, _null_product_trial, config.n_null)
    block = _run_trials(config, _null_block_trial, config.n_null)
    generic = _run_trials(config, _null_generic_trial, config.n_null)

    miac_flags = [o.detected for o in generic if o.detected is not None]
    miatc_flags = [o.detected_miatc for o in block + generic if o.detected_miatc is not None]
    rate = _rate(miac_flags)
    rate_miatc = _rate(miatc_flags)
    result = _reduce("null_condition", config, product + block + generic, tol.null_condition)

    detection_ok = rate >= tol.detection_rate and rate_miatc >= tol.detection_rate
    if not detection_ok:
        logger.warning(
            "Non-null states detected in %.1f%% (MIAC) and %.1f%% (MIATC) of trials, below %.1f%%",
            100 * rate, 100 * rate_miatc, 100 * tol.detection_rate,
        )
    return replace(
        result,
        checks={**result.checks, "null_only_if": len(miac_flags), "null_only_if_miatc": len(miatc_flags)},
        detected=sum(miac_flags),
        detection_rate=rate,
        detected_miatc=sum(miatc_flags),
        detection_rate_miatc=rate_miatc,
        detection_ok=detection_ok,
    )
