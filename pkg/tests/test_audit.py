import numpy as np
import pytest

from coherence_bounds.audit import (
    StateLabel,
    audit_null_condition,
    audit_saturation,
    audit_theorems,
    classify,
)
from coherence_bounds.config import AuditConfig, Tolerances
from coherence_bounds.correlations import BellDiagonalParams, bell_diagonal_state, mutual_information
from coherence_bounds.fixtures import (
    block_diagonal_example,
    example1_state,
    example2_state,
    example3_state,
)
from coherence_bounds.qmatrix import BipartiteState, von_neumann_entropy
from coherence_bounds.random_states import (
    RNG_ALGORITHM,
    random_mixed,
    random_product,
    random_pure,
    trial_rng,
)


def _small(**overrides) -> AuditConfig:
    values = dict(n_states=3, n_measurements=2, n_pure=3, n_null=3, seed=7)
    values.update(overrides)
    return AuditConfig(**values)


def test_classify_named_examples():
    assert StateLabel.CLASSICAL_CLASSICAL in classify(example1_state())

    ex2 = classify(example2_state())
    assert StateLabel.CLASSICAL_QUANTUM in ex2
    assert StateLabel.QUANTUM_CLASSICAL not in ex2

    ex3 = classify(example3_state())
    assert StateLabel.QUANTUM_CLASSICAL in ex3
    assert StateLabel.CLASSICAL_QUANTUM not in ex3

    assert StateLabel.BLOCK_DIAGONAL_B in classify(block_diagonal_example())


def test_classify_product_and_generic():
    rng = np.random.default_rng(0)
    product = classify(random_product(2, 2, rng))
    assert StateLabel.PRODUCT in product
    assert StateLabel.GENERIC not in product
    assert classify(random_mixed(2, 2, rng)).names() == ["generic"]


def test_classify_bell_states():
    bell = classify(BipartiteState.from_vector([1, 0, 0, 1], 2, 2))
    assert StateLabel.PURE in bell
    assert StateLabel.BELL_DIAGONAL in bell
    assert StateLabel.CLASSICAL_QUANTUM not in bell
    assert StateLabel.BELL_DIAGONAL in classify(bell_diagonal_state(BellDiagonalParams(0.45, 0.33, 0.22)))


def test_random_pure_states_are_pure():
    rng = np.random.default_rng(1)
    for _ in range(20):
        s = random_pure(2, 3, rng)
        assert np.real(np.trace(s.rho @ s.rho)) == pytest.approx(1.0, abs=1e-9)


def test_random_mixed_states_are_correlated():
    rng = np.random.default_rng(2)
    for _ in range(100):
        assert mutual_information(random_mixed(2, 2, rng)) > 0.0


def test_trial_rng_is_reproducible():
    a = trial_rng(42, 0, 5).standard_normal(4)
    b = trial_rng(42, 0, 5).standard_normal(4)
    c = trial_rng(42, 1, 5).standard_normal(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


@pytest.mark.slow
def test_mean_entanglement_entropy_of_random_pure_qubit_pairs():
    rng = np.random.default_rng(3)
    values = [von_neumann_entropy(random_pure(2, 2, rng).reduced("A")) for _ in range(5000)]
    # 1/3 nat
    assert np.mean(values) == pytest.approx(1.0 / (3.0 * np.log(2.0)), abs=0.02)


def test_theorem_audit_small_batch():
    result = audit_theorems(_small())
    assert result.passed
    assert result.trials == 3
    assert result.rng_seed == 7
    assert result.rng_algorithm == RNG_ALGORITHM
    assert result.checks["extra_miac_below_extra_miatc"] == 6
    assert result.max_gap <= 1e-6


def test_theorem_audit_is_deterministic_across_workers():
    serial = audit_theorems(_small())
    again = audit_theorems(_small())
    parallel = audit_theorems(_small(n_jobs=2))
    assert serial.max_gap == again.max_gap
    assert serial.max_gap == parallel.max_gap
    assert serial.checks == parallel.checks


def test_saturation_audit_small_batch():
    result = audit_saturation(_small())
    assert result.passed, result.violations[:3]
    assert result.checks["fourier_miac_saturation"] == 3


def test_zero_tolerance_reports_violations():
    tolerances = Tolerances(saturation=0.0)
    result = audit_saturation(_small(tolerances=tolerances))
    assert not result.passed
    assert all(v.gap > 0.0 for v in result.violations)
    first = result.violations[0]
    assert first.state.startswith(("pure#", "schmidt#"))


def test_null_condition_audit_small_batch():
    result = audit_null_condition(_small())
    assert not result.violations
    assert result.checks["null_only_if"] == 3
    assert result.checks["null_only_if_miatc"] == 6
    assert result.detection_rate is not None
    assert 0.0 <= result.detection_rate <= 1.0
    assert result.detection_rate_miatc is not None
    assert 0.0 <= result.detection_rate_miatc <= 1.0
    assert result.summary()["audit"] == "null_condition"


@pytest.mark.slow
def test_full_acceptance_batches():
    config = AuditConfig()
    assert audit_theorems(config).passed
    assert audit_saturation(config).passed
    null = audit_null_condition(config)
    assert not null.violations
    assert null.detection_ok


def test_non_product_states_show_extra_miatc():
    result = audit_null_condition(_small(n_null=4, seed=11))
    assert result.checks["null_only_if_miatc"] == 8
    assert result.detected_miatc is not None and result.detected_miatc >= 6
    assert result.detection_rate_miatc >= 0.75


def test_unreachable_detection_rate_fails_the_audit():
    tolerances = Tolerances(detection_threshold=10.0)
    result = audit_null_condition(_small(tolerances=tolerances))
    assert not result.violations
    assert result.detection_rate == 0.0
    assert result.detection_rate_miatc == 0.0
    assert result.detection_ok is False
    assert not result.passed


def test_classify_uses_tolerance():
    rng = np.random.default_rng(8)
    s = random_mixed(2, 2, rng)
    assert StateLabel.PRODUCT not in classify(s)
    assert StateLabel.PRODUCT in classify(s, tol=1.0)
    assert classify(s) == classify(s, Tolerances().classifier)


def test_empty_run_reports_zero_gap():
    result = audit_theorems(_small(n_states=0))
    assert result.trials == 0
    assert result.max_gap == 0.0
    assert result.passed
    assert np.isfinite(result.summary()["max_gap"])
