import numpy as np
import pytest

from coherence_bounds.errors import DimensionError, MeasurementError
from coherence_bounds.fixtures import KET_MINUS, KET_PLUS, example1_state, example3_state
from coherence_bounds.measurement import (
    Measurement,
    bloch_pair_batch,
    computational_measurement,
    fourier_measurement,
    measure_a,
    povm_from_elements,
    qubit_projector_pair,
)
from coherence_bounds.qmatrix import BipartiteState, maximally_mixed, projector, von_neumann_entropy
from coherence_bounds.random_states import (
    random_mixed,
    random_projective,
    random_pure,
    random_schmidt_family,
    schmidt_family_state,
)


def _same_projector_set(m: Measurement, vectors) -> bool:
    expected = [projector(v) for v in vectors]
    return all(any(np.allclose(op, e, atol=1e-9) for e in expected) for op in m.operators)


def test_qubit_projector_pair_poles_and_equator():
    assert _same_projector_set(qubit_projector_pair(0.0, 0.0), [[1, 0], [0, 1]])
    assert _same_projector_set(qubit_projector_pair(np.pi / 2, 0.0), [KET_PLUS, KET_MINUS])


def test_incomplete_measurement_rejected():
    with pytest.raises(MeasurementError):
        Measurement((projector([1, 0]),))


def test_non_orthogonal_projectors_rejected():
    half = np.sqrt(0.5) * np.eye(2)
    with pytest.raises(MeasurementError):
        Measurement((half, half), "projective")


def test_measure_on_wrong_dimension():
    with pytest.raises(DimensionError):
        measure_a(example1_state(), computational_measurement(3))


def test_example1_conditional_states():
    ensemble = measure_a(example1_state(), computational_measurement(2))
    assert np.allclose(ensemble.probs, [0.5, 0.5])
    assert np.allclose(ensemble.states[0], projector(KET_PLUS))
    assert np.allclose(ensemble.states[1], projector(KET_MINUS))

    ensemble = measure_a(example1_state(), qubit_projector_pair(np.pi / 2, 0.0))
    for state in ensemble.states:
        assert np.allclose(state, maximally_mixed(2))


def test_example3_conditional_states():
    ensemble = measure_a(example3_state(), computational_measurement(2))
    assert np.allclose(ensemble.probs, [0.75, 0.25])
    expected = projector(KET_PLUS) / 3 + 2 * projector(KET_MINUS) / 3
    assert np.allclose(ensemble.states[0], expected)
    assert np.allclose(ensemble.states[1], projector(KET_PLUS))


def test_zero_probability_outcome_is_flagged():
    product = BipartiteState.from_product(projector([1, 0]), maximally_mixed(2))
    ensemble = measure_a(product, computational_measurement(2))
    assert ensemble.valid == (True, False)
    assert np.allclose(ensemble.states[1], maximally_mixed(2))
    assert len(ensemble.outcomes()) == 1
    assert ensemble.outcomes()[0][0] == pytest.approx(1.0)


def test_mixture_consistency():
    rng = np.random.default_rng(0)
    for _ in range(200):
        s = random_mixed(2, 2, rng)
        m = random_projective(2, rng)
        ensemble = measure_a(s, m)
        assert np.sum(ensemble.probs) == pytest.approx(1.0, abs=1e-9)
        assert np.max(np.abs(ensemble.mixture() - s.reduced("B"))) <= 1e-9


@pytest.mark.slow
def test_mixture_consistency_1000():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        s = random_mixed(2, 2, rng)
        ensemble = measure_a(s, random_projective(2, rng))
        assert np.max(np.abs(ensemble.mixture() - s.reduced("B"))) <= 1e-9


def test_rank_one_measurement_on_pure_state_leaves_pure_conditionals():
    rng = np.random.default_rng(2)
    for _ in range(50):
        s = random_pure(2, 3, rng)
        for p, state in measure_a(s, random_projective(2, rng)).outcomes():
            if p > 1e-9:
                assert von_neumann_entropy(state) <= 1e-7


def test_povm_kraus_operators():
    m = povm_from_elements([0.5 * np.eye(2), 0.5 * np.eye(2)])
    assert m.kind == "povm"
    s = example1_state()
    ensemble = measure_a(s, m)
    for state in ensemble.states:
        assert np.allclose(state, s.reduced("B"))


def test_fourier_measurement_small_cases():
    assert _same_projector_set(fourier_measurement(2, np.eye(2)), [KET_PLUS, KET_MINUS])
    hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert _same_projector_set(fourier_measurement(2, hadamard), [[1, 0], [0, 1]])


def test_fourier_measurement_rejects_non_unitary():
    with pytest.raises(MeasurementError):
        fourier_measurement(2, np.array([[1, 1], [0, 1]]))


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_fourier_measurement_on_schmidt_family(dim):
    rng = np.random.default_rng(dim)
    s, u_a, lam = random_schmidt_family(dim, rng)
    ensemble = measure_a(s, fourier_measurement(dim, u_a))
    assert np.allclose(ensemble.probs, 1.0 / dim, atol=1e-9)
    for state in ensemble.states:
        assert np.allclose(np.real(np.diag(state)), lam**2, atol=1e-9)
        assert von_neumann_entropy(state) <= 1e-7


def test_equal_schmidt_coefficients_give_flat_overlaps():
    lam = np.array([np.sqrt(0.5), np.sqrt(0.5)])
    s = schmidt_family_state(lam, np.eye(2))
    for state in measure_a(s, fourier_measurement(2, np.eye(2))).states:
        assert np.allclose(np.real(np.diag(state)), [0.5, 0.5])


def test_bloch_pairs_match_single_measurements():
    rng = np.random.default_rng(9)
    params = np.column_stack([rng.uniform(0, np.pi, 6), rng.uniform(0, 2 * np.pi, 6)])
    pairs = bloch_pair_batch(params)
    assert pairs.shape == (6, 2, 2)
    for (theta, phi), vecs in zip(params, pairs):
        assert np.allclose(vecs @ vecs.conj().T, np.eye(2), atol=1e-12)
        plus = qubit_projector_pair(theta, phi).operators[0]
        assert np.allclose(plus, np.outer(vecs[0], vecs[0].conj()), atol=1e-12)
